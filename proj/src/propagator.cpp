#include "adsp/propagator.hpp"

#include "adsp/norms.hpp"
#include "adsp/transform.hpp"

#include <cmath>
#include <sstream>

namespace adsp {

double dispersion_phase(double xi1, double xi2) {
  return 0.5 * (xi1 * xi1 + xi2 * xi2) + 0.25 * xi1 * xi1 * xi1 * xi1;
}

RealArray dispersion_lattice(const GridSpec& g) {
  const RealVector c1 = g.xi1(), c2 = g.xi2();
  RealArray w(g.n1, g.n2);
  for (Eigen::Index j = 0; j < g.n2; ++j)
    for (Eigen::Index i = 0; i < g.n1; ++i)
      w(i, j) = dispersion_phase(c1[i], g.d == 2 ? c2[j] : 0.0);
  return w;
}

ComplexArray propagation_multiplier(const GridSpec& g, double t) {
  const RealArray w = dispersion_lattice(g);
  ComplexArray mult(g.n1, g.n2);
  for (Eigen::Index j = 0; j < g.n2; ++j)
    for (Eigen::Index i = 0; i < g.n1; ++i) {
      // theta = t*w split as rounded product + fma residual; the residual is
      // O(eps*theta), so its first-order phase factor (1 - i*lo) suffices.
      const double hi = t * w(i, j);
      const double lo = std::fma(t, w(i, j), -hi);
      const double c = std::cos(hi), s = std::sin(hi);
      mult(i, j) = Complex(c - lo * s, -s - lo * c);
    }
  return mult;
}

Field propagate(const Field& f, double t) {
  if (f.domain == Domain::Frequency) {
    Field out = f;
    out.values *= propagation_multiplier(f.grid, t);
    return out;
  }
  Field fhat = forward_transform(f);
  fhat.values *= propagation_multiplier(f.grid, t);
  return inverse_transform(fhat);
}

namespace {

// Trapezoid value over [-R, R] with n panels for a cached integrand; the
// doubling ladder reuses previous sums, so the total work is that of the
// finest level.
class TrapezoidLadder {
 public:
  TrapezoidLadder(double radius, unsigned initial_nodes)
      : radius_(radius), n_(initial_nodes < 2 ? 2 : initial_nodes) {}

  template <typename F>
  Complex first(F&& f) {
    const double h = 2.0 * radius_ / static_cast<double>(n_);
    Complex sum = 0.5 * (f(-radius_) + f(radius_));
    for (unsigned i = 1; i < n_; ++i)
      sum += f(-radius_ + h * static_cast<double>(i));
    value_ = sum * h;
    return value_;
  }

  template <typename F>
  Complex doubled(F&& f) {
    // Midpoints of the current panels refine the trapezoid sum in place.
    const double h = 2.0 * radius_ / static_cast<double>(n_);
    Complex mid = 0.0;
    for (unsigned i = 0; i < n_; ++i)
      mid += f(-radius_ + h * (static_cast<double>(i) + 0.5));
    n_ *= 2;
    value_ = 0.5 * value_ + mid * (h * 0.5);
    return value_;
  }

 private:
  double radius_;
  unsigned n_;
  Complex value_ = 0.0;
};

template <typename F>
Complex certified_integral(F&& f, double radius, const QuadSpec& quad,
                           const char* label) {
  TrapezoidLadder ladder(radius, quad.initial_nodes);
  Complex prev = ladder.first(f);
  double prev_diff = std::numeric_limits<double>::infinity();
  for (unsigned k = 0; k < quad.max_doublings; ++k) {
    const Complex cur = ladder.doubled(f);
    const double diff = std::abs(cur - prev);
    if (diff < quad.tol) return cur;
    if (diff >= prev_diff && k >= 2) {
      std::ostringstream msg;
      msg << "kernel_quadrature: " << label
          << " refinement stalled (diff " << diff << " after " << k + 1
          << " doublings, previous " << prev_diff << ", tol " << quad.tol
          << ")";
      throw oracle_error(msg.str());
    }
    prev_diff = diff;
    prev = cur;
  }
  std::ostringstream msg;
  msg << "kernel_quadrature: " << label << " did not converge within "
      << quad.max_doublings << " doublings (last diff " << prev_diff
      << ", tol " << quad.tol << ")";
  throw oracle_error(msg.str());
}

Complex unit_phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

} // namespace

Complex kernel_quadrature(const AmplitudeFn& psi_hat, double t, double x1,
                          double x2, const QuadSpec& quad, int d) {
  if (d == 1) {
    auto f = [&](double xi1) {
      return psi_hat(xi1, 0.0) *
             unit_phase(x1 * xi1 - t * dispersion_phase(xi1));
    };
    return certified_integral(f, quad.radius1, quad, "xi1 ladder") /
           std::sqrt(2.0 * M_PI);
  }
  // Inner transverse integral per xi1, certified on its own ladder with a
  // tighter tolerance so inner noise cannot mask outer convergence.
  QuadSpec inner_quad = quad;
  inner_quad.tol = 0.1 * quad.tol;
  auto outer = [&](double xi1) {
    auto f2 = [&](double xi2) {
      return psi_hat(xi1, xi2) * unit_phase(x2 * xi2 - 0.5 * t * xi2 * xi2);
    };
    const Complex inner =
        certified_integral(f2, quad.radius2, inner_quad, "xi2 ladder");
    const double q2 = xi1 * xi1;
    return inner * unit_phase(x1 * xi1 - t * (0.5 * q2 + 0.25 * q2 * q2));
  };
  return certified_integral(outer, quad.radius1, quad, "xi1 ladder") /
         (2.0 * M_PI);
}

Complex kernel_quadrature(const GaussianAmplitude& psi_hat, double t,
                          double x1, double x2, const QuadSpec& quad, int d) {
  auto f1 = [&](double xi1) {
    const double q2 = xi1 * xi1;
    return psi_hat.a * std::exp(-0.5 * q2 / (psi_hat.s1 * psi_hat.s1)) *
           unit_phase(x1 * xi1 - t * (0.5 * q2 + 0.25 * q2 * q2));
  };
  const Complex along = certified_integral(f1, quad.radius1, quad, "xi1 ladder");
  if (d == 1) return along / std::sqrt(2.0 * M_PI);
  // Closed-form transverse factor: int e^{-alpha xi^2 + i x2 xi} dxi with
  // alpha = 1/(2 s2^2) + i t/2 equals sqrt(pi/alpha) e^{-x2^2/(4 alpha)}.
  const Complex alpha(0.5 / (psi_hat.s2 * psi_hat.s2), 0.5 * t);
  const Complex transverse =
      std::sqrt(M_PI / alpha) * std::exp(-x2 * x2 / (4.0 * alpha));
  return along * transverse / (2.0 * M_PI);
}

Complex certified_line_integral(const std::function<Complex(double)>& f,
                                double radius, const QuadSpec& quad) {
  return certified_integral(f, radius, quad, "line ladder");
}

std::vector<std::pair<double, double>> sup_decay_series(
    const Field& psi, const std::vector<double>& times, double p,
    std::vector<std::string>* warnings) {
  require_domain(psi, Domain::Space, "sup_decay_series");
  const int d = psi.grid.d;
  const double weight_power = 1.0 - 2.0 / p; // 0 at p = 2
  const double comp_power = d * (0.5 - 1.0 / p);
  const Field psi_hat = forward_transform(psi);
  std::vector<std::pair<double, double>> series;
  series.reserve(times.size());
  for (double t : times) {
    Field uhat = propagate(psi_hat, t);
    Field u = inverse_transform(apply_anisotropic_bessel(uhat, weight_power));
    const double value = std::pow(t, comp_power) * lp_norm(u, p);
    series.emplace_back(t, value);
    if (warnings) {
      const double bm = boundary_mass_fraction(inverse_transform(uhat));
      if (bm >= 1e-8) {
        std::ostringstream msg;
        msg << "wrap-around warning: boundary mass " << bm << " at t = " << t;
        warnings->push_back(msg.str());
      }
    }
  }
  return series;
}

} // namespace adsp
