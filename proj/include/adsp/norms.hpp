#pragma once

// Norm zoo on lattice fields. All integrals use the plain rectangle rule on
// the periodic grid (spectrally accurate for smooth periodic integrands).
//
//   Lp                    : (sum |f|^p * cell)^{1/p}, sup norm at p = inf
//   SobolevWeighted(m, s) : || <x>^s <grad>^m f ||_L2 with <grad>^m realized
//                           as the multiplier (1+|y|^2)^{m/2} in the domain
//                           conjugate to f's own
//   AnisotropicBessel(s,p): || <d_x1>^s f ||_Lp with <d_x1>^s the frequency
//                           multiplier (1+xi1^2)^{s/2}
//
// For a frequency-side field g the SobolevWeighted(2, 0) norm is the H^2
// norm in the frequency variable, computed through the transform pair in the
// opposite direction; no finite differences are involved anywhere.

#include "adsp/grid.hpp"

#include <limits>

namespace adsp {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct NormSpec {
  enum class Kind { Lp, SobolevWeighted, AnisotropicBessel };
  Kind kind = Kind::Lp;
  double p = 2.0; // Lp exponent, in [1, inf]
  double m = 0.0; // derivative order (SobolevWeighted)
  double s = 0.0; // weight power (SobolevWeighted) or Bessel power

  static NormSpec lp(double p);
  static NormSpec sobolev_weighted(double m, double s);
  static NormSpec anisotropic_bessel(double s, double p);
};

double l2_norm(const Field& f);
double lp_norm(const Field& f, double p);
double norm(const Field& f, const NormSpec& spec);

// ||f||_L2^2 — the conserved mass of the evolution.
double mass(const Field& f);

// Frequency-side multiplication by (1+xi1^2)^{s/2}; space fields make a
// round trip through the transform. Applying s then -s is the identity.
Field apply_anisotropic_bessel(const Field& f, double s);

// Fraction of ||f||_L2^2 in the outer 10% band of the box (either axis, own
// domain). The wrap-around indicator every experiment reports.
double boundary_mass_fraction(const Field& f);

} // namespace adsp
