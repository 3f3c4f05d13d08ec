#pragma once

// Nonexistence-of-free-scattering diagnostic: pairing a solution against the
// asymptotic datum,
//
//   <W(-t) u(t) - W(-s) u(s), psi_plus>_{L2},
//
// the leading contribution grows like
//
//   |lambda| * int |psihat_plus(mu)|^{p+1} (1 + 3 mu1^2)^{-(p-1)/2} dmu
//            * int_s^t tau^{-d(p-1)/2} dtau,
//
// which diverges as t -> infinity exactly when p <= 1 + 2/d. The report
// carries the amplitude integral (certified quadrature; closed-form
// transverse factor for separable Gaussians), the closed-form time factor
// (a logarithm at the critical exponent), and the divergence flag. The
// companion series evaluates the pairing from simulated trajectories.

#include "adsp/integrator.hpp"
#include "adsp/profile.hpp"
#include "adsp/propagator.hpp"

#include <utility>
#include <vector>

namespace adsp {

struct GlasseyReport {
  double amplitude_integral = 0.0; // int |psihat|^{p+1} (1+3 mu1^2)^{-(p-1)/2}
  double time_exponent = 0.0;      // d (p - 1) / 2
  bool diverges = false;           // p <= 1 + 2/d
  double s_time = 0.0;
  double t_time = 0.0;
  double time_factor = 0.0;        // int_s^t tau^{-time_exponent} dtau
  double i1_magnitude = 0.0;       // |lambda| * amplitude_integral * time_factor
};

// The divergence predicate, kept as the literal critical-threshold
// comparison so callers checking p <= 1 + 2/d agree bit for bit.
bool glassey_diverges(double p, int d);

// int_s^t tau^{-e} dtau, the logarithm branch taken exactly at e = 1.
double glassey_time_factor(double e, double s, double t);

// Certified quadrature of the amplitude integral. d = 1 integrates the
// first axis only; d = 2 runs a nested ladder; d = 3 assumes the transverse
// profile is radial and integrates both transverse axes in Cartesian form.
double glassey_amplitude_integral(const AmplitudeFn& amp, double p, int d,
                                  const QuadSpec& quad);

// Separable Gaussian overload: transverse axes contribute s2 sqrt(2 pi /
// (p+1)) each in closed form, leaving one certified axial ladder.
double glassey_amplitude_integral(const GaussianAmplitude& amp, double p,
                                  int d, const QuadSpec& quad);

// Full analytic prediction for the pairing growth between times s and t.
GlasseyReport glassey_diagnostic(const ProfileSpec& spec, double s_time,
                                 double t_time, const QuadSpec& quad);

// <W(-t) u(t) - W(-s) u(s), psi_plus> from stored snapshots, s fixed at the
// first recorded time; evaluated in frequency by unitarity of the transform.
std::vector<std::pair<double, Complex>> glassey_pairing_series(
    const TrajectoryRecord& traj, const ProfileSpec& spec);

} // namespace adsp
