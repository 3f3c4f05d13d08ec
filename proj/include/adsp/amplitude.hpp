#pragma once

// Frequency-side amplitude data. Analytic amplitudes (the Gaussian test
// family) evaluate exactly at off-grid points; grid-sampled amplitudes go
// through separable cubic spline interpolation.

#include "adsp/grid.hpp"

#include <memory>

namespace adsp {

using AmplitudeFn = std::function<Complex(double xi1, double xi2)>;

// a * exp(-xi1^2/(2 s1^2) - xi2^2/(2 s2^2)); strictly positive, so the
// modulus appearing in phase corrections stays smooth.
struct GaussianAmplitude {
  double a = 1.0;
  double s1 = 1.0;
  double s2 = 1.0;

  Complex operator()(double xi1, double xi2) const {
    return a * std::exp(-0.5 * (xi1 * xi1 / (s1 * s1) + xi2 * xi2 / (s2 * s2)));
  }

  // || <x>^2 psi ||_L2 of the physical-space counterpart (d = 2), in closed
  // form via 1D Gaussian moments.
  double h02_norm() const;

  // Scale the amplitude so the weighted norm above hits `target`.
  static GaussianAmplitude with_h02(double s1, double s2, double target);
};

// Wrap a frequency-domain field as an amplitude with separable cubic spline
// evaluation between lattice points (and zero outside the lattice).
AmplitudeFn grid_amplitude(const Field& psi_hat);

} // namespace adsp
