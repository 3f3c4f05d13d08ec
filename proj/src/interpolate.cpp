#include "adsp/interpolate.hpp"

#include <cmath>

namespace adsp {

CubicSpline1D::CubicSpline1D(double x0, double dx, const Eigen::ArrayXcd& y)
    : x0_(x0), dx_(dx), y_(y), m_(Eigen::ArrayXcd::Zero(y.size())) {
  const Eigen::Index n = y.size();
  if (n < 3) return; // linear/constant data: zero curvature is exact enough
  // Natural spline: tridiagonal system (Thomas algorithm) for the interior
  // second derivatives; uniform spacing makes the diagonals constant.
  const Eigen::Index k = n - 2;
  Eigen::ArrayXd diag = Eigen::ArrayXd::Constant(k, 4.0);
  Eigen::ArrayXcd rhs(k);
  const double inv_h2 = 6.0 / (dx * dx);
  for (Eigen::Index i = 0; i < k; ++i)
    rhs[i] = inv_h2 * (y[i] - 2.0 * y[i + 1] + y[i + 2]);
  for (Eigen::Index i = 1; i < k; ++i) {
    const double w = 1.0 / diag[i - 1];
    diag[i] -= w;
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (Eigen::Index i = k - 2; i >= 0; --i)
    m_[i + 1] = (rhs[i] - m_[i + 2]) / diag[i];
}

Complex CubicSpline1D::operator()(double x) const {
  const Eigen::Index n = y_.size();
  const double u = (x - x0_) / dx_;
  if (u < 0.0 || u > static_cast<double>(n - 1)) return {0.0, 0.0};
  Eigen::Index i = static_cast<Eigen::Index>(u);
  if (i >= n - 1) i = n - 2;
  const double a = u - static_cast<double>(i); // in [0, 1]
  const double b = 1.0 - a;
  const double h2 = dx_ * dx_ / 6.0;
  return b * y_[i] + a * y_[i + 1] +
         h2 * ((b * b * b - b) * m_[i] + (a * a * a - a) * m_[i + 1]);
}

SeparableSpline2D::SeparableSpline2D(int d, double x0, double dx, double y0,
                                     double dy, const ComplexArray& values)
    : d_(d), x0_(x0), dx_(dx), y0_(y0), dy_(dy) {
  columns_.reserve(static_cast<size_t>(values.cols()));
  for (Eigen::Index j = 0; j < values.cols(); ++j)
    columns_.emplace_back(x0, dx, values.col(j));
}

Complex SeparableSpline2D::operator()(double x, double y) const {
  if (d_ == 1) return columns_[0](x);
  const Eigen::Index n2 = static_cast<Eigen::Index>(columns_.size());
  Eigen::ArrayXcd along(n2);
  for (Eigen::Index j = 0; j < n2; ++j) along[j] = columns_[j](x);
  return CubicSpline1D(y0_, dy_, along)(y);
}

ComplexArray SeparableSpline2D::eval_tensor(const RealVector& t1,
                                            const RealVector& t2) const {
  const Eigen::Index n2 = static_cast<Eigen::Index>(columns_.size());
  // Pass 1: evaluate every column spline at the x-targets.
  ComplexArray mid(t1.size(), n2);
  for (Eigen::Index j = 0; j < n2; ++j)
    for (Eigen::Index i = 0; i < t1.size(); ++i) mid(i, j) = columns_[j](t1[i]);
  if (d_ == 1) return mid;
  // Pass 2: spline each row of the intermediate along y.
  ComplexArray out(t1.size(), t2.size());
  for (Eigen::Index i = 0; i < t1.size(); ++i) {
    CubicSpline1D row(y0_, dy_, mid.row(i).transpose());
    for (Eigen::Index j = 0; j < t2.size(); ++j) out(i, j) = row(t2[j]);
  }
  return out;
}

} // namespace adsp
