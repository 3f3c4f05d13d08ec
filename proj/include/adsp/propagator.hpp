#pragma once

// The exact linear solution operator W(t): frequency multiplier e^{-i t w}
// with the anisotropic quartic symbol
//
//   w(xi) = |xi|^2 / 2 + xi1^4 / 4,
//
// plus a direct oscillatory-quadrature oracle for the kernel representation
//
//   [W(t) psi](x) = (2 pi)^{-d/2} int e^{i(x.xi - t w(xi))} psihat(xi) dxi
//
// and the compensated sup-norm decay diagnostic. The multiplier phase t*w is
// split into rounded part plus fma residual so that unitarity and the group
// law survive at the 1e-13 / 1e-12 level even for large t*w.

#include "adsp/amplitude.hpp"
#include "adsp/grid.hpp"

#include <string>
#include <vector>

namespace adsp {

// Thrown when a self-certifying quadrature ladder fails to converge.
class oracle_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double dispersion_phase(double xi1, double xi2 = 0.0);

// w(xi) on the frequency lattice.
RealArray dispersion_lattice(const GridSpec& g);

// e^{-i t w(xi)} on the lattice, with the two-product phase correction.
ComplexArray propagation_multiplier(const GridSpec& g, double t);

// W(t) applied to a field; space fields make the round trip through the
// transform, frequency fields are multiplied in place. t may be negative.
Field propagate(const Field& f, double t);

struct QuadSpec {
  double radius1 = 12.0;      // truncation radius along xi1
  double radius2 = 12.0;      // truncation radius along xi2
  unsigned initial_nodes = 64;
  unsigned max_doublings = 14;
  double tol = 1e-9;          // certification tolerance
};

// Direct evaluation of the kernel integral by truncated trapezoid rules,
// doubling nodes until successive values differ by less than quad.tol.
Complex kernel_quadrature(const AmplitudeFn& psi_hat, double t, double x1,
                          double x2, const QuadSpec& quad, int d = 2);

// Same oracle for the separable Gaussian family, with the transverse
// integral reduced in closed form (complex Gaussian integral) so only the
// quartic-phase axis is quadratured.
Complex kernel_quadrature(const GaussianAmplitude& psi_hat, double t,
                          double x1, double x2, const QuadSpec& quad,
                          int d = 2);

// The same self-certifying ladder over [-radius, radius], exposed for other
// certified one-dimensional integrals (real integrands ride the real part).
Complex certified_line_integral(const std::function<Complex(double)>& f,
                                double radius, const QuadSpec& quad);

// value(t) = t^{d(1/2-1/p)} || <d_x1>^{1-2/p} W(t) psi ||_Lp, the quantity
// the linear decay estimate bounds; appends a wrap-around warning when the
// propagated field's boundary mass exceeds 1e-8.
std::vector<std::pair<double, double>> sup_decay_series(
    const Field& psi, const std::vector<double>& times, double p,
    std::vector<std::string>* warnings = nullptr);

} // namespace adsp
