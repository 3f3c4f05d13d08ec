#pragma once

// Log-corrected scattering data for the critical quadratic nonlinearity:
// the phase correction
//
//   S(t, xi) = -lambda |psihat_plus(xi)| (3 xi1^2 + 1)^{-1/2} log t,
//
// the frequency data w(t, xi) = psihat_plus(xi) e^{i S(t, xi)}, the
// physical-space asymptote u_plus(t, x) (leading term with S evaluated at
// the stationary point), the compensated H^2 growth diagnostics, and the
// residual source
//
//   R(t) = W(t) F^{-1}[ lambda t^{-1} (3 xi1^2+1)^{-1/2} |psihat| w ]
//          - lambda |W(t) F^{-1} w| W(t) F^{-1} w,
//
// whose L2 norm must decay like t^{-1-beta} (up to logs).

#include "adsp/amplitude.hpp"
#include "adsp/grid.hpp"

#include <utility>

namespace adsp {

struct ProfileSpec {
  AmplitudeFn psi_plus_hat;
  double lambda = 0.0;
  double p = 2.0; // nonlinearity power; the critical case is p = 2 in 2D
  int d = 2;
};

double phase_correction(double xi1, double xi2, double t,
                        const ProfileSpec& spec);

// w(t, .) on the frequency lattice; |w| = |psihat_plus| exactly.
Field modified_free_data(double t, const ProfileSpec& spec,
                         const GridSpec& grid);

// W(t) F^{-1} w(t): the modified free evolution the solution is compared
// against (space domain).
Field modified_free_field(double t, const ProfileSpec& spec,
                          const GridSpec& grid);

// u_plus(t, .) on the space lattice.
Field modified_profile(double t, const ProfileSpec& spec,
                       const GridSpec& grid);

// ( ||w(t)||_{H^2_xi} / log^2 t,
//   ||(3 xi1^2+1)^{-1/2} |psihat| w(t)||_{H^2_xi} / log^2 t );
// both stay bounded in t when the data class is respected.
std::pair<double, double> log_growth_ratio(double t, const ProfileSpec& spec,
                                           const GridSpec& grid);

// The residual source field and its L2 norm. Requires p = 2.
std::pair<Field, double> residual_source(double t, const ProfileSpec& spec,
                                         const GridSpec& grid);

} // namespace adsp
