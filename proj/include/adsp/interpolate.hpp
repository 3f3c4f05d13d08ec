#pragma once

// Separable natural cubic spline on uniform 1D/2D lattices of complex
// values. Used to evaluate grid-sampled frequency amplitudes at the
// off-grid stationary points; evaluation outside the lattice returns zero
// (amplitudes decay below roundoff well inside the box by construction).

#include "adsp/grid.hpp"

#include <vector>

namespace adsp {

class CubicSpline1D {
 public:
  CubicSpline1D() = default;
  // Nodes x0 + i*dx, i = 0..n-1, natural boundary conditions.
  CubicSpline1D(double x0, double dx, const Eigen::ArrayXcd& y);

  Complex operator()(double x) const;

  Eigen::Index size() const { return y_.size(); }

 private:
  double x0_ = 0.0, dx_ = 1.0;
  Eigen::ArrayXcd y_;  // values
  Eigen::ArrayXcd m_;  // second derivatives at the nodes
};

class SeparableSpline2D {
 public:
  // values(i, j) sampled at (x0 + i*dx, y0 + j*dy); d == 1 collapses the
  // second axis.
  SeparableSpline2D(int d, double x0, double dx, double y0, double dy,
                    const ComplexArray& values);

  Complex operator()(double x, double y) const;

  // Resample on the tensor grid t1 x t2 in one sweep per axis (O(N) total);
  // this is the path the stationary-point lattice evaluation takes, since
  // mu1 depends only on x1 and mu2 only on x2.
  ComplexArray eval_tensor(const RealVector& t1, const RealVector& t2) const;

 private:
  int d_;
  double x0_, dx_, y0_, dy_;
  std::vector<CubicSpline1D> columns_; // spline in x for every j
};

} // namespace adsp
