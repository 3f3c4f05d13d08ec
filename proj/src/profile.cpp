#include "adsp/profile.hpp"

#include "adsp/norms.hpp"
#include "adsp/propagator.hpp"
#include "adsp/stationary.hpp"
#include "adsp/transform.hpp"

#include <cmath>

namespace adsp {

double phase_correction(double xi1, double xi2, double t,
                        const ProfileSpec& spec) {
  if (!(t > 0.0))
    throw std::domain_error("phase_correction: requires t > 0");
  const double amp = std::abs(spec.psi_plus_hat(xi1, xi2));
  return -spec.lambda * amp / std::sqrt(3.0 * xi1 * xi1 + 1.0) * std::log(t);
}

Field modified_free_data(double t, const ProfileSpec& spec,
                         const GridSpec& grid) {
  if (!(t > 0.0))
    throw std::domain_error("modified_free_data: requires t > 0");
  const RealVector xi1 = grid.xi1(), xi2 = grid.xi2();
  const double log_t = std::log(t);
  Field w(grid, Domain::Frequency);
  for (Eigen::Index j = 0; j < grid.n2; ++j)
    for (Eigen::Index i = 0; i < grid.n1; ++i) {
      const Complex amp = spec.psi_plus_hat(xi1[i], xi2[j]);
      const double s = -spec.lambda * std::abs(amp) /
                       std::sqrt(3.0 * xi1[i] * xi1[i] + 1.0) * log_t;
      w.values(i, j) = amp * Complex(std::cos(s), std::sin(s));
    }
  return w;
}

Field modified_free_field(double t, const ProfileSpec& spec,
                          const GridSpec& grid) {
  return inverse_transform(propagate(modified_free_data(t, spec, grid), t));
}

Field modified_profile(double t, const ProfileSpec& spec,
                       const GridSpec& grid) {
  return modified_profile_field(spec.psi_plus_hat, t, grid, spec.lambda);
}

std::pair<double, double> log_growth_ratio(double t, const ProfileSpec& spec,
                                           const GridSpec& grid) {
  const Field w = modified_free_data(t, spec, grid);
  const NormSpec h2 = NormSpec::sobolev_weighted(2.0, 0.0);
  const double denom = std::pow(std::log(t), 2);
  const double first = norm(w, h2) / denom;
  // Second quantity: the source amplitude (3 xi1^2+1)^{-1/2} |psihat| w.
  Field src = w;
  const RealVector xi1 = grid.xi1(), xi2 = grid.xi2();
  for (Eigen::Index j = 0; j < grid.n2; ++j)
    for (Eigen::Index i = 0; i < grid.n1; ++i)
      src.values(i, j) *= std::abs(spec.psi_plus_hat(xi1[i], xi2[j])) /
                          std::sqrt(3.0 * xi1[i] * xi1[i] + 1.0);
  const double second = norm(src, h2) / denom;
  return {first, second};
}

std::pair<Field, double> residual_source(double t, const ProfileSpec& spec,
                                         const GridSpec& grid) {
  if (spec.p != 2.0)
    throw std::invalid_argument("residual_source: defined for p = 2");
  if (!(t > 0.0))
    throw std::domain_error("residual_source: requires t > 0");
  const Field w = modified_free_data(t, spec, grid);
  // First term through the frequency multiplier, second pointwise after
  // propagating w.
  Field src = w;
  const RealVector xi1 = grid.xi1(), xi2 = grid.xi2();
  for (Eigen::Index j = 0; j < grid.n2; ++j)
    for (Eigen::Index i = 0; i < grid.n1; ++i)
      src.values(i, j) *= spec.lambda / t *
                          std::abs(spec.psi_plus_hat(xi1[i], xi2[j])) /
                          std::sqrt(3.0 * xi1[i] * xi1[i] + 1.0);
  Field first = inverse_transform(propagate(src, t));
  const Field v = inverse_transform(propagate(w, t));
  first.values -= spec.lambda * v.values.abs() * v.values;
  const double l2 = l2_norm(first);
  return {std::move(first), l2};
}

} // namespace adsp
