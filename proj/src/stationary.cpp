#include "adsp/stationary.hpp"

#include "adsp/interpolate.hpp"
#include "adsp/norms.hpp"
#include "adsp/propagator.hpp"
#include "adsp/transform.hpp"

namespace adsp {

StationaryPoint stationary_point(double x1, double x2, double t) {
  if (!(t > 0.0))
    throw std::domain_error("stationary_point: requires t > 0");
  const double v = x1 / t;
  StationaryPoint sp;
  sp.mu1 = stationary_mu1(v);
  sp.mu2 = x2 / t;
  sp.residual = std::abs(sp.mu1 * sp.mu1 * sp.mu1 + sp.mu1 - v);
  return sp;
}

namespace {

// Assemble t^{-d/2} (3 mu1^2 + 1)^{-1/2} A(mu) e^{i phase} on the lattice
// from amplitude samples at the stationary points (tensor layout), where
//
//   phase = (3/4) t mu1^4 + (1/2) t |mu|^2 - d pi/4
//         - lambda |A(mu)| (3 mu1^2 + 1)^{-1/2} log t.
//
// lambda = 0 gives the plain leading term of the free evolution.
Field assemble_profile(const ComplexArray& amp_at_mu, double t,
                       const GridSpec& grid, double lambda) {
  const int d = grid.d;
  const RealVector x1 = grid.x1(), x2 = grid.x2();
  RealVector mu1(grid.n1), w1(grid.n1), phase1(grid.n1);
  for (Eigen::Index i = 0; i < grid.n1; ++i) {
    const double m = stationary_mu1(x1[i] / t);
    mu1[i] = m;
    w1[i] = 1.0 / std::sqrt(3.0 * m * m + 1.0);
    phase1[i] = t * (0.75 * m * m * m * m + 0.5 * m * m);
  }
  RealVector phase2(grid.n2);
  for (Eigen::Index j = 0; j < grid.n2; ++j) {
    const double m = d == 2 ? x2[j] / t : 0.0;
    phase2[j] = 0.5 * t * m * m;
  }
  const double prefactor = std::pow(t, -0.5 * d);
  const double corner = -0.25 * M_PI * d;
  const double log_t = std::log(t);
  Field out(grid, Domain::Space);
  for (Eigen::Index j = 0; j < grid.n2; ++j)
    for (Eigen::Index i = 0; i < grid.n1; ++i) {
      const Complex amp = amp_at_mu(i, j);
      double phase = phase1[i] + phase2[j] + corner;
      if (lambda != 0.0) phase -= lambda * std::abs(amp) * w1[i] * log_t;
      out.values(i, j) =
          prefactor * w1[i] * amp * Complex(std::cos(phase), std::sin(phase));
    }
  return out;
}

ComplexArray amplitude_at_stationary_points(const AmplitudeFn& psi_hat,
                                            double t, const GridSpec& grid) {
  if (!(t > 0.0))
    throw std::domain_error("leading_term_field: requires t > 0");
  const RealVector x1 = grid.x1(), x2 = grid.x2();
  ComplexArray amp(grid.n1, grid.n2);
  RealVector mu1(grid.n1);
  for (Eigen::Index i = 0; i < grid.n1; ++i)
    mu1[i] = stationary_mu1(x1[i] / t);
  for (Eigen::Index j = 0; j < grid.n2; ++j) {
    const double mu2 = grid.d == 2 ? x2[j] / t : 0.0;
    for (Eigen::Index i = 0; i < grid.n1; ++i)
      amp(i, j) = psi_hat(mu1[i], mu2);
  }
  return amp;
}

} // namespace

Complex leading_term(const AmplitudeFn& psi_hat, double t, double x1,
                     double x2, int d) {
  const StationaryPoint sp = stationary_point(x1, d == 2 ? x2 : 0.0, t);
  const Complex amp = psi_hat(sp.mu1, sp.mu2);
  const double w = 1.0 / std::sqrt(3.0 * sp.mu1 * sp.mu1 + 1.0);
  const double phase =
      t * (0.75 * std::pow(sp.mu1, 4) +
           0.5 * (sp.mu1 * sp.mu1 + sp.mu2 * sp.mu2)) -
      0.25 * M_PI * d;
  return std::pow(t, -0.5 * d) * w * amp *
         Complex(std::cos(phase), std::sin(phase));
}

Field leading_term_field(const AmplitudeFn& psi_hat, double t,
                         const GridSpec& grid) {
  return assemble_profile(amplitude_at_stationary_points(psi_hat, t, grid), t,
                          grid, 0.0);
}

Field modified_profile_field(const AmplitudeFn& psi_hat, double t,
                             const GridSpec& grid, double lambda) {
  return assemble_profile(amplitude_at_stationary_points(psi_hat, t, grid), t,
                          grid, lambda);
}

std::pair<Field, double> remainder_field(const Field& psi, double t) {
  require_domain(psi, Domain::Space, "remainder_field");
  const GridSpec& grid = psi.grid;
  const Field psi_hat = forward_transform(psi);
  // Spline-resample psihat onto the stationary-point tensor grid in one
  // sweep per axis instead of per-point spline solves.
  SeparableSpline2D spline(grid.d, grid.xi1()[0], grid.dxi1(), grid.xi2()[0],
                           grid.dxi2(), psi_hat.values);
  const RealVector x1 = grid.x1(), x2 = grid.x2();
  RealVector mu1(grid.n1), mu2(grid.n2);
  for (Eigen::Index i = 0; i < grid.n1; ++i)
    mu1[i] = stationary_mu1(x1[i] / t);
  for (Eigen::Index j = 0; j < grid.n2; ++j)
    mu2[j] = grid.d == 2 ? x2[j] / t : 0.0;
  const ComplexArray amp = spline.eval_tensor(mu1, mu2);
  Field lead = assemble_profile(amp, t, grid, 0.0);
  Field rem = propagate(psi, t);
  rem.values -= lead.values;
  return {rem, l2_norm(rem)};
}

} // namespace adsp
