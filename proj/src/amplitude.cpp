#include "adsp/amplitude.hpp"

#include "adsp/interpolate.hpp"

#include <cmath>

namespace adsp {

namespace {

// Moments of e^{-s^2 x^2}: integrals of 1, x^2, x^4 over the line.
double m0(double s) { return std::sqrt(M_PI) / s; }
double m2(double s) { return std::sqrt(M_PI) / (2.0 * s * s * s); }
double m4(double s) { return 3.0 * std::sqrt(M_PI) / (4.0 * std::pow(s, 5)); }

} // namespace

double GaussianAmplitude::h02_norm() const {
  // The physical-space counterpart of a*e^{-xi^2/(2s^2)} per axis is
  // a*s1*s2*e^{-s1^2 x1^2/2 - s2^2 x2^2/2} (unitary transform), so
  // ||<x>^2 psi||_L2^2 expands into separable Gaussian moments of
  // (1 + |x|^2)^2 = 1 + 2x1^2 + 2x2^2 + x1^4 + 2x1^2x2^2 + x2^4.
  const double w = m0(s1) * m0(s2) + 2.0 * (m2(s1) * m0(s2) + m0(s1) * m2(s2)) +
                   m4(s1) * m0(s2) + 2.0 * m2(s1) * m2(s2) + m0(s1) * m4(s2);
  return std::abs(a) * s1 * s2 * std::sqrt(w);
}

GaussianAmplitude GaussianAmplitude::with_h02(double s1, double s2,
                                              double target) {
  GaussianAmplitude g{1.0, s1, s2};
  g.a = target / g.h02_norm();
  return g;
}

AmplitudeFn grid_amplitude(const Field& psi_hat) {
  require_domain(psi_hat, Domain::Frequency, "grid_amplitude");
  const GridSpec& g = psi_hat.grid;
  auto spline = std::make_shared<SeparableSpline2D>(
      g.d, g.xi1()[0], g.dxi1(), g.xi2()[0], g.dxi2(), psi_hat.values);
  return [spline](double xi1, double xi2) { return (*spline)(xi1, xi2); };
}

} // namespace adsp
