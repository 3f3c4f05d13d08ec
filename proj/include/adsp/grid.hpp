#pragma once

// Uniform periodic grids on [-l1, l1) x [-l2, l2) and the complex lattice
// fields living on them. The frequency lattice is the natural (monotone)
// ordering xi_i = (pi/l_i) * (k - n_i/2), k = 0..n_i-1; any FFT-internal
// layout stays hidden behind the transform functions.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>

namespace adsp {

using Complex = std::complex<double>;
// Column-major with rows indexed by the x1 axis, so memory order is
// x1-fastest, matching the on-disk snapshot layout.
using ComplexArray = Eigen::ArrayXXcd;
using RealArray = Eigen::ArrayXXd;
using RealVector = Eigen::ArrayXd;

enum class Domain { Space, Frequency };

// Thrown when an operation receives a field in the wrong domain or with
// mismatched grids.
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct GridSpec {
  int d;               // spatial dimension, 1 or 2 (1 drops the second axis)
  Eigen::Index n1, n2; // points per axis; powers of two; n2 == 1 when d == 1
  double l1, l2;       // half-extents of the space box

  GridSpec(int d_, Eigen::Index n1_, Eigen::Index n2_, double l1_, double l2_);

  static GridSpec square(Eigen::Index n, double l) { return {2, n, n, l, l}; }
  static GridSpec line(Eigen::Index n, double l) { return {1, n, 1, l, 1.0}; }

  double h1() const { return 2.0 * l1 / static_cast<double>(n1); }
  double h2() const { return d == 2 ? 2.0 * l2 / static_cast<double>(n2) : 1.0; }
  double dxi1() const;
  double dxi2() const;

  // Sample coordinates: x_j = -l + j*h and xi_k = (pi/l)*(k - n/2).
  RealVector x1() const;
  RealVector x2() const;
  RealVector xi1() const;
  RealVector xi2() const;

  Eigen::Index size() const { return n1 * n2; }
  bool operator==(const GridSpec& o) const {
    return d == o.d && n1 == o.n1 && n2 == o.n2 && l1 == o.l1 && l2 == o.l2;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

struct Field {
  GridSpec grid;
  Domain domain;
  ComplexArray values; // n1 x n2

  Field(const GridSpec& g, Domain dom)
      : grid(g), domain(dom), values(ComplexArray::Zero(g.n1, g.n2)) {}
  Field(const GridSpec& g, Domain dom, ComplexArray v);
};

// Sample a callable (x1, x2) -> complex (or real) on the space lattice.
Field space_field(const GridSpec& g,
                  const std::function<Complex(double, double)>& fn);
// Sample a callable (xi1, xi2) -> complex on the frequency lattice.
Field frequency_field(const GridSpec& g,
                      const std::function<Complex(double, double)>& fn);

// Quadrature cell volume for the given domain (h1*h2 or dxi1*dxi2; the
// second factor is 1 in one dimension).
double cell_measure(const GridSpec& g, Domain dom);

void require_domain(const Field& f, Domain dom, const char* where);
void require_same_grid(const Field& a, const Field& b, const char* where);

} // namespace adsp
