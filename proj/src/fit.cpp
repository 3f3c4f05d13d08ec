#include "adsp/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adsp {

double PowerLawFit::eval(double t) const {
  return c * std::pow(t, -alpha);
}

PowerLawFit fit_power_law(const std::vector<double>& t,
                          const std::vector<double>& y) {
  if (t.size() != y.size())
    throw std::invalid_argument("fit_power_law: abscissa/ordinate length mismatch");
  if (t.size() < 4)
    throw std::invalid_argument("fit_power_law: need at least 4 samples, got " +
                                std::to_string(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0))
      throw std::invalid_argument("fit_power_law: nonpositive abscissa at index " +
                                  std::to_string(i));
    if (!(y[i] > 0.0))
      throw std::invalid_argument("fit_power_law: nonpositive ordinate at index " +
                                  std::to_string(i));
  }

  // Ordinary least squares on (log t, log y).
  const std::size_t n = t.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(t[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("fit_power_law: all abscissae coincide");

  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = intercept + slope * lx[i];
    ss_res += (ly[i] - fit) * (ly[i] - fit);
    ss_tot += (ly[i] - my) * (ly[i] - my);
  }

  PowerLawFit out;
  out.c = std::exp(intercept);
  out.alpha = -slope;
  out.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  out.n_points = n;
  return out;
}

} // namespace adsp
