#include "adsp/grid.hpp"

#include <cmath>
#include <string>

namespace adsp {

namespace {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

GridSpec::GridSpec(int d_, Eigen::Index n1_, Eigen::Index n2_, double l1_,
                   double l2_)
    : d(d_), n1(n1_), n2(n2_), l1(l1_), l2(l2_) {
  if (d != 1 && d != 2)
    throw std::invalid_argument("GridSpec: dimension must be 1 or 2");
  if (d == 1) n2 = 1;
  if (!is_power_of_two(n1) || (d == 2 && !is_power_of_two(n2)))
    throw std::invalid_argument("GridSpec: point counts must be powers of two");
  if (!(l1 > 0.0) || (d == 2 && !(l2 > 0.0)))
    throw std::invalid_argument("GridSpec: half-extents must be positive");
}

double GridSpec::dxi1() const { return M_PI / l1; }

double GridSpec::dxi2() const { return d == 2 ? M_PI / l2 : 1.0; }

RealVector GridSpec::x1() const {
  return -l1 + h1() * RealVector::LinSpaced(n1, 0.0, static_cast<double>(n1 - 1));
}

RealVector GridSpec::x2() const {
  if (d == 1) return RealVector::Zero(1);
  return -l2 + h2() * RealVector::LinSpaced(n2, 0.0, static_cast<double>(n2 - 1));
}

RealVector GridSpec::xi1() const {
  return dxi1() * (RealVector::LinSpaced(n1, 0.0, static_cast<double>(n1 - 1)) -
                   static_cast<double>(n1 / 2));
}

RealVector GridSpec::xi2() const {
  if (d == 1) return RealVector::Zero(1);
  return dxi2() * (RealVector::LinSpaced(n2, 0.0, static_cast<double>(n2 - 1)) -
                   static_cast<double>(n2 / 2));
}

Field::Field(const GridSpec& g, Domain dom, ComplexArray v)
    : grid(g), domain(dom), values(std::move(v)) {
  if (values.rows() != grid.n1 || values.cols() != grid.n2)
    throw contract_error("Field: value array does not match grid shape");
}

Field space_field(const GridSpec& g,
                  const std::function<Complex(double, double)>& fn) {
  Field f(g, Domain::Space);
  const RealVector c1 = g.x1(), c2 = g.x2();
  for (Eigen::Index j = 0; j < g.n2; ++j)
    for (Eigen::Index i = 0; i < g.n1; ++i) f.values(i, j) = fn(c1[i], c2[j]);
  return f;
}

Field frequency_field(const GridSpec& g,
                      const std::function<Complex(double, double)>& fn) {
  Field f(g, Domain::Frequency);
  const RealVector c1 = g.xi1(), c2 = g.xi2();
  for (Eigen::Index j = 0; j < g.n2; ++j)
    for (Eigen::Index i = 0; i < g.n1; ++i) f.values(i, j) = fn(c1[i], c2[j]);
  return f;
}

double cell_measure(const GridSpec& g, Domain dom) {
  return dom == Domain::Space ? g.h1() * g.h2() : g.dxi1() * g.dxi2();
}

void require_domain(const Field& f, Domain dom, const char* where) {
  if (f.domain != dom)
    throw contract_error(std::string(where) + ": field is in the wrong domain");
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (a.grid != b.grid)
    throw contract_error(std::string(where) + ": grid mismatch");
}

} // namespace adsp
