#pragma once

// Unitary Fourier transform pair on the periodic grid:
//
//   fhat(xi) = (2*pi)^{-d/2} * sum_x f(x) e^{-i x.xi} h1 h2
//   f(x)     = (2*pi)^{-d/2} * sum_xi fhat(xi) e^{+i x.xi} dxi1 dxi2
//
// With this pairing Parseval is weight-free: ||f||_L2 (h-measure) equals
// ||fhat||_L2 (dxi-measure) to machine precision, and the standard Gaussian
// e^{-|x|^2/2} is a fixed point. Plans are cached per grid shape and their
// use is internally synchronized, so fields may be transformed concurrently.

#include "adsp/grid.hpp"

namespace adsp {

enum class PlanEffort { Estimate, Measure };

// Planning effort for plans created after the call (FFTW_ESTIMATE vs
// FFTW_MEASURE). Experiments switch to Measure; tests keep the cheap default.
void set_transform_effort(PlanEffort effort);

// Number of threads used by newly created plans (no-op without FFTW threads).
void set_transform_threads(unsigned n);

Field forward_transform(const Field& f); // Space -> Frequency
Field inverse_transform(const Field& f); // Frequency -> Space

// Transform into the other domain regardless of the current one (forward for
// space fields, inverse for frequency fields).
Field conjugate_transform(const Field& f);

} // namespace adsp
