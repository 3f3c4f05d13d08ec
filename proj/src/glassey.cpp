#include "adsp/glassey.hpp"

#include "adsp/norms.hpp"
#include "adsp/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace adsp {

namespace {

void check_dimension(int d) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("glassey: dimension must be 1, 2, or 3");
}

double anisotropic_weight(double xi1, double p) {
  return std::pow(1.0 + 3.0 * xi1 * xi1, -(p - 1.0) / 2.0);
}

} // namespace

bool glassey_diverges(double p, int d) {
  check_dimension(d);
  return p <= 1.0 + 2.0 / static_cast<double>(d);
}

double glassey_time_factor(double e, double s, double t) {
  if (!(0.0 < s && s < t))
    throw std::invalid_argument("glassey_time_factor: need 0 < s < t");
  if (e == 1.0) return std::log(t / s);
  return (std::pow(t, 1.0 - e) - std::pow(s, 1.0 - e)) / (1.0 - e);
}

double glassey_amplitude_integral(const AmplitudeFn& amp, double p, int d,
                                  const QuadSpec& quad) {
  check_dimension(d);
  if (!(p > 1.0))
    throw std::invalid_argument("glassey_amplitude_integral: need p > 1");
  const double q = p + 1.0;

  if (d == 1) {
    auto f = [&](double xi1) {
      return Complex(std::pow(std::abs(amp(xi1, 0.0)), q) *
                     anisotropic_weight(xi1, p));
    };
    return certified_line_integral(f, quad.radius1, quad).real();
  }

  // Transverse integrals per xi1 on their own tighter ladders. For d = 3 the
  // transverse profile is assumed radial and both transverse axes are
  // integrated in Cartesian form, amp(xi1, |(xi2, xi3)|): a radial smooth
  // profile stays smooth through the origin this way, so every ladder keeps
  // its spectral convergence (the polar weight |rho| would not).
  QuadSpec mid_quad = quad;
  mid_quad.tol = 0.1 * quad.tol;
  QuadSpec inner_quad = quad;
  inner_quad.tol = 0.01 * quad.tol;
  auto outer = [&](double xi1) {
    Complex inner;
    if (d == 3) {
      auto f2 = [&](double xi2) {
        auto f3 = [&](double xi3) {
          const double rho = std::hypot(xi2, xi3);
          return Complex(std::pow(std::abs(amp(xi1, rho)), q));
        };
        return certified_line_integral(f3, quad.radius2, inner_quad);
      };
      inner = certified_line_integral(f2, quad.radius2, mid_quad);
    } else {
      auto f2 = [&](double xi2) {
        return Complex(std::pow(std::abs(amp(xi1, xi2)), q));
      };
      inner = certified_line_integral(f2, quad.radius2, mid_quad);
    }
    return inner * anisotropic_weight(xi1, p);
  };
  return certified_line_integral(outer, quad.radius1, quad).real();
}

double glassey_amplitude_integral(const GaussianAmplitude& amp, double p,
                                  int d, const QuadSpec& quad) {
  check_dimension(d);
  if (!(p > 1.0))
    throw std::invalid_argument("glassey_amplitude_integral: need p > 1");
  const double q = p + 1.0;

  auto f = [&](double xi1) {
    return Complex(std::exp(-0.5 * q * xi1 * xi1 / (amp.s1 * amp.s1)) *
                   anisotropic_weight(xi1, p));
  };
  const double axial = certified_line_integral(f, quad.radius1, quad).real();
  const double transverse = amp.s2 * std::sqrt(2.0 * M_PI / q);
  return std::pow(std::abs(amp.a), q) * axial *
         std::pow(transverse, static_cast<double>(d - 1));
}

GlasseyReport glassey_diagnostic(const ProfileSpec& spec, double s_time,
                                 double t_time, const QuadSpec& quad) {
  if (!(spec.p > 1.0))
    throw std::invalid_argument("glassey_diagnostic: need p > 1");
  if (!(0.0 < s_time && s_time < t_time))
    throw std::invalid_argument("glassey_diagnostic: need 0 < s_time < t_time");
  check_dimension(spec.d);

  GlasseyReport report;
  report.amplitude_integral =
      glassey_amplitude_integral(spec.psi_plus_hat, spec.p, spec.d, quad);
  report.time_exponent = static_cast<double>(spec.d) * (spec.p - 1.0) / 2.0;
  report.diverges = glassey_diverges(spec.p, spec.d);
  report.s_time = s_time;
  report.t_time = t_time;
  report.time_factor = glassey_time_factor(report.time_exponent, s_time, t_time);
  report.i1_magnitude =
      std::abs(spec.lambda) * report.amplitude_integral * report.time_factor;
  return report;
}

std::vector<std::pair<double, Complex>> glassey_pairing_series(
    const TrajectoryRecord& traj, const ProfileSpec& spec) {
  if (traj.fields.empty() || traj.fields.size() != traj.samples.size())
    throw std::invalid_argument(
        "glassey_pairing_series: trajectory must store a field at every sample");
  const GridSpec grid = traj.fields.front().grid;
  for (const Field& f : traj.fields) {
    require_domain(f, Domain::Space, "glassey_pairing_series");
    if (f.grid != grid)
      throw std::invalid_argument("glassey_pairing_series: snapshots on mixed grids");
  }

  const Field psi_hat = frequency_field(grid, [&](double xi1, double xi2) {
    return spec.psi_plus_hat(xi1, xi2);
  });
  const double meas = cell_measure(grid, Domain::Frequency);

  // <W(-t) u(t), psi> = sum e^{+ i t w} uhat conj(psihat) dxi by unitarity.
  auto pairing = [&](const Field& u, double t) {
    const Field uhat = forward_transform(u);
    return ((uhat.values * propagation_multiplier(grid, -t)) *
            psi_hat.values.conjugate())
               .sum() *
           meas;
  };

  std::vector<std::pair<double, Complex>> series;
  series.reserve(traj.samples.size());
  const Complex base = pairing(traj.fields.front(), traj.samples.front().t);
  for (std::size_t k = 0; k < traj.samples.size(); ++k)
    series.emplace_back(traj.samples[k].t,
                        pairing(traj.fields[k], traj.samples[k].t) - base);
  return series;
}

} // namespace adsp
