#pragma once

// Least-squares power-law fits y ~ c * t^(-alpha) on log-log axes, used to
// extract decay rates from sampled norms (remainder sweeps, residual-source
// decay, distance-to-profile convergence).

#include <cstddef>
#include <vector>

namespace adsp {

struct PowerLawFit {
  double c = 0.0;         // prefactor, y ~ c * t^(-alpha)
  double alpha = 0.0;     // decay exponent (positive = decay)
  double r_squared = 1.0; // coefficient of determination in log-log space
  std::size_t n_points = 0;

  double eval(double t) const;
};

// Requires matching lengths, at least 4 samples, and strictly positive
// entries; errors name the first offending index.
PowerLawFit fit_power_law(const std::vector<double>& t,
                          const std::vector<double>& y);

} // namespace adsp
