#pragma once

// Stationary point of the oscillatory phase x.xi - t w(xi) and the
// stationary-phase leading term of W(t)psi:
//
//   mu1 solves mu^3 + mu = x1/t (unique real root; the cubic is strictly
//   increasing), mu2 = x2/t, and
//
//   lead(t, x) = t^{-d/2} (3 mu1^2 + 1)^{-1/2} psihat(mu)
//                  e^{i((3/4) t mu1^4 + (1/2) t |mu|^2) - i d pi/4}.
//
// The remainder field W(t)psi - lead measures how fast the asymptotic
// expansion takes over.

#include "adsp/amplitude.hpp"
#include "adsp/grid.hpp"

#include <cmath>
#include <utility>

namespace adsp {

// Unique real root of mu^3 + mu = v via a cancellation-free Cardano form:
// the larger-magnitude cube root is computed directly and the companion
// term through the product identity (the two cube roots multiply to -1/3),
// which keeps the relative residual at the 1e-12 level across 16 orders of
// magnitude of |v|. Below |v| = 0.01 the Cardano difference subtracts two
// terms of size 3^{-1/2} to produce a root of size |v|, so that branch
// switches to the series mu = v(1 - v^2 + 3v^4 - 12v^6 + ...), whose
// truncation error is under 1e-14 relative at the crossover.
template <typename T>
T stationary_mu1(T v) {
  if (v == T(0)) return T(0);
  const T v2 = v * v;
  if (v2 < T(1e-4))
    return v * (T(1) - v2 * (T(1) - v2 * (T(3) - T(12) * v2)));
  const T sign = v >= T(0) ? T(1) : T(-1);
  const T r = std::cbrt(T(0.5) * v +
                        sign * std::sqrt(T(0.25) * v * v + T(1) / T(27)));
  return r - T(1) / (T(3) * r);
}

struct StationaryPoint {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double residual = 0.0; // |mu1^3 + mu1 - x1/t|
};

StationaryPoint stationary_point(double x1, double x2, double t);

Complex leading_term(const AmplitudeFn& psi_hat, double t, double x1,
                     double x2, int d = 2);

// Leading term sampled on the whole space lattice. The stationary points
// form a tensor grid (mu1 depends only on x1, mu2 only on x2), which both
// the analytic and the spline-resampled amplitude paths exploit.
Field leading_term_field(const AmplitudeFn& psi_hat, double t,
                         const GridSpec& grid);

// Leading-term lattice evaluator with the optional log-corrected phase
// -lambda |psihat(mu)| (3 mu1^2 + 1)^{-1/2} log t added; lambda = 0 recovers
// leading_term_field. The profile module builds its asymptote on top of it.
Field modified_profile_field(const AmplitudeFn& psi_hat, double t,
                             const GridSpec& grid, double lambda);

// W(t)psi minus the leading-term field built from the grid-interpolated
// psihat, together with its L2 norm.
std::pair<Field, double> remainder_field(const Field& psi, double t);

} // namespace adsp
