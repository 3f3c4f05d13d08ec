#include "adsp/integrator.hpp"

#include "adsp/fit.hpp"
#include "adsp/norms.hpp"
#include "adsp/propagator.hpp"
#include "adsp/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace adsp {

namespace {

void check_solver_config(const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0))
    throw std::invalid_argument("SolverConfig: dt must be positive");
  if (!(cfg.p >= 1.0))
    throw std::invalid_argument("SolverConfig: nonlinearity power must be >= 1");
  if (!std::isfinite(cfg.t_start) || !std::isfinite(cfg.t_end))
    throw std::invalid_argument("SolverConfig: nonfinite time interval");
  if (!(cfg.tol_mass_drift > 0.0))
    throw std::invalid_argument("SolverConfig: mass-drift tolerance must be positive");
}

// |u|^{p-1} with the cheap special cases hit in practice.
RealArray modulus_power(const ComplexArray& u, double p) {
  if (p == 2.0) return u.abs();
  if (p == 3.0) return u.abs2();
  return u.abs().pow(p - 1.0);
}

void apply_nonlinear_phase(ComplexArray& u, double dt, double lambda, double p) {
  const RealArray theta = (-lambda * dt) * modulus_power(u, p);
  u *= theta.cos().cast<Complex>() +
       Complex(0.0, 1.0) * theta.sin().cast<Complex>();
}

// 2/3-rule mask in the centered mode ordering (1 keeps, 0 zeroes).
RealArray dealias_mask(const GridSpec& g) {
  RealArray mask = RealArray::Ones(g.n1, g.n2);
  const auto cut = [](Eigen::Index idx, Eigen::Index n) {
    const Eigen::Index m = idx - n / 2;
    return 3 * std::abs(m) > n;
  };
  for (Eigen::Index j = 0; j < g.n2; ++j)
    for (Eigen::Index i = 0; i < g.n1; ++i)
      if (cut(i, g.n1) || (g.d == 2 && cut(j, g.n2))) mask(i, j) = 0.0;
  return mask;
}

// Fixed-step split-step march on the frequency-side state. Owns the cached
// half-step multiplier and the mass watchdog; summaries/snapshots are
// emitted by the callers through record().
class StrangMarcher {
 public:
  StrangMarcher(Field uhat0, const SolverConfig& cfg, std::string context)
      : cfg_(cfg),
        uhat_(std::move(uhat0)),
        t_(cfg.t_start),
        context_(std::move(context)) {
    require_domain(uhat_, Domain::Frequency, "StrangMarcher");
    mass0_ = mass(uhat_);
    if (cfg_.dealias) mask_ = dealias_mask(uhat_.grid);
  }

  double t() const { return t_; }
  const Field& state_hat() const { return uhat_; }

  void advance_to(double target) {
    const double span = target - t_;
    if (span == 0.0) return;
    if (cfg_.lambda == 0.0) {
      // Free flow: one exact multiplier for the whole segment.
      uhat_.values *= propagation_multiplier(uhat_.grid, span);
      t_ = target;
      check_mass(t_);
      return;
    }
    const double dir = span > 0.0 ? 1.0 : -1.0;
    const double tiny = cfg_.dt * 1e-9;
    while (dir * (target - t_) > tiny) {
      const double h = dir * std::min(cfg_.dt, dir * (target - t_));
      step(h);
      t_ += h;
      if (++steps_since_check_ >= 64) check_mass(t_);
    }
    t_ = target; // snap away the accumulated roundoff in t
    check_mass(t_);
  }

 private:
  void step(double h) {
    if (h != cached_h_) {
      half_mult_ = propagation_multiplier(uhat_.grid, h / 2.0);
      cached_h_ = h;
    }
    uhat_.values *= half_mult_;
    Field u = inverse_transform(uhat_);
    apply_nonlinear_phase(u.values, h, cfg_.lambda, cfg_.p);
    uhat_ = forward_transform(u);
    uhat_.values *= half_mult_;
    if (cfg_.dealias) uhat_.values *= mask_.cast<Complex>();
  }

  void check_mass(double t) {
    steps_since_check_ = 0;
    const double m = mass(uhat_);
    const double scale = std::max(mass0_, 1e-300);
    const double drift = std::abs(m - mass0_) / scale;
    if (!std::isfinite(m) || (!cfg_.dealias && drift > cfg_.tol_mass_drift)) {
      std::ostringstream msg;
      msg << "integration aborted at t = " << t << ": "
          << (std::isfinite(m) ? "relative mass drift " : "nonfinite mass ");
      if (std::isfinite(m)) msg << drift;
      msg << " (initial mass " << mass0_ << ", lambda = " << cfg_.lambda;
      if (!context_.empty()) msg << ", " << context_;
      msg << ")";
      throw numerical_abort(msg.str());
    }
  }

  SolverConfig cfg_;
  Field uhat_;
  double t_;
  double mass0_ = 0.0;
  double cached_h_ = std::numeric_limits<double>::quiet_NaN();
  ComplexArray half_mult_;
  RealArray mask_;
  int steps_since_check_ = 0;
  std::string context_;
};

void check_record_times(const std::vector<double>& times, double t0, double t1) {
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  const double slack = 1e-9 * std::max(1.0, hi - lo);
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < lo - slack || times[i] > hi + slack)
      throw std::invalid_argument("record time " + std::to_string(times[i]) +
                                  " outside the integration interval");
    if (i > 0 && dir * (times[i] - times[i - 1]) <= 0.0)
      throw std::invalid_argument(
          "record times must be strictly monotone in the integration direction");
  }
}

TrajectoryRecord run_march(Field uhat0, const SolverConfig& cfg,
                           const std::vector<double>& record_times,
                           bool store_fields, const ProfileSpec* profile,
                           const RecordCallback& on_record,
                           const std::string& context) {
  check_solver_config(cfg);
  check_record_times(record_times, cfg.t_start, cfg.t_end);
  const GridSpec grid = uhat0.grid;

  StrangMarcher march(std::move(uhat0), cfg, context);
  TrajectoryRecord out;
  out.samples.reserve(record_times.size());

  const auto record = [&](double t) {
    Field u = inverse_transform(march.state_hat());
    TrajectorySample s;
    s.t = t;
    s.mass = mass(u);
    s.linf = u.values.abs().maxCoeff();
    if (profile != nullptr) {
      const Field up = modified_profile(t, *profile, grid);
      const Field vf = modified_free_field(t, *profile, grid);
      s.dist_profile = l2_norm(Field(grid, Domain::Space, u.values - up.values));
      s.dist_free = l2_norm(Field(grid, Domain::Space, u.values - vf.values));
    } else {
      s.dist_profile = std::numeric_limits<double>::quiet_NaN();
      s.dist_free = std::numeric_limits<double>::quiet_NaN();
    }
    out.samples.push_back(s);
    if (store_fields) out.fields.push_back(u);
    if (on_record) on_record(s, store_fields ? &out.fields.back() : &u);
  };

  for (double tr : record_times) {
    march.advance_to(tr);
    record(tr);
  }
  march.advance_to(cfg.t_end);
  if (record_times.empty()) record(cfg.t_end);
  return out;
}

} // namespace

Field nonlinear_phase_step(const Field& f, double dt, double lambda, double p) {
  require_domain(f, Domain::Space, "nonlinear_phase_step");
  if (!(p >= 1.0))
    throw std::invalid_argument("nonlinear_phase_step: power must be >= 1");
  Field out = f;
  apply_nonlinear_phase(out.values, dt, lambda, p);
  return out;
}

Field strang_step(const Field& f, double dt, const SolverConfig& cfg) {
  require_domain(f, Domain::Space, "strang_step");
  if (!(cfg.p >= 1.0))
    throw std::invalid_argument("strang_step: power must be >= 1");
  if (cfg.lambda == 0.0 || dt == 0.0) return propagate(f, dt);
  Field uhat = forward_transform(f);
  uhat.values *= propagation_multiplier(f.grid, dt / 2.0);
  Field u = inverse_transform(uhat);
  apply_nonlinear_phase(u.values, dt, cfg.lambda, cfg.p);
  uhat = forward_transform(u);
  uhat.values *= propagation_multiplier(f.grid, dt / 2.0);
  if (cfg.dealias) uhat.values *= dealias_mask(f.grid).cast<Complex>();
  return inverse_transform(uhat);
}

TrajectoryRecord solve_ivp(const Field& u0, const SolverConfig& cfg,
                           const std::vector<double>& record_times,
                           bool store_fields, const ProfileSpec* profile,
                           const RecordCallback& on_record) {
  Field uhat0 = (u0.domain == Domain::Space) ? forward_transform(u0) : u0;
  return run_march(std::move(uhat0), cfg, record_times, store_fields, profile,
                   on_record, {});
}

TrajectoryRecord solve_final_state(const ProfileSpec& spec,
                                   const GridSpec& grid, double T,
                                   double t_end, SolverConfig cfg,
                                   const std::vector<double>& record_times,
                                   bool store_fields, SeedKind seed,
                                   const RecordCallback& on_record) {
  if (!(T > t_end) || !(t_end > 0.0))
    throw std::invalid_argument(
        "solve_final_state: need seed time T > t_end > 0");
  cfg.t_start = T;
  cfg.t_end = t_end;
  cfg.lambda = spec.lambda;
  cfg.p = spec.p;

  Field uhat0(grid, Domain::Frequency);
  if (seed == SeedKind::FreeData) {
    // u(T) = W(T) F^{-1} w(T), i.e. seed uhat = e^{-i T omega} w(T).
    uhat0 = propagate(modified_free_data(T, spec, grid), T);
  } else {
    uhat0 = forward_transform(modified_profile(T, spec, grid));
  }

  std::ostringstream ctx;
  ctx << "|psi_plus|_L2 = " << std::sqrt(mass(uhat0));
  return run_march(std::move(uhat0), cfg, record_times, store_fields, &spec,
                   on_record, ctx.str());
}

PicardReport picard_refine(const TrajectoryRecord& traj,
                           const ProfileSpec& spec, const SolverConfig& cfg,
                           const std::vector<double>& eval_times) {
  if (spec.p != 2.0 || cfg.p != 2.0)
    throw std::invalid_argument(
        "picard_refine: the integral map is implemented for the quadratic "
        "nonlinearity (p = 2)");
  if (cfg.lambda != spec.lambda)
    throw std::invalid_argument(
        "picard_refine: solver and profile disagree on lambda");
  if (traj.fields.empty() || traj.fields.size() != traj.samples.size())
    throw std::invalid_argument(
        "picard_refine: trajectory must store a field at every sample");
  if (eval_times.empty())
    throw std::invalid_argument("picard_refine: no evaluation times");

  const GridSpec grid = traj.fields.front().grid;
  for (const Field& f : traj.fields) {
    require_domain(f, Domain::Space, "picard_refine");
    if (f.grid != grid)
      throw std::invalid_argument("picard_refine: snapshots on mixed grids");
  }

  // Snapshot times sorted ascending; the largest is the seed time T.
  std::vector<std::size_t> order(traj.samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return traj.samples[a].t < traj.samples[b].t;
  });
  std::vector<double> times(order.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    times[k] = traj.samples[order[k]].t;
  const double seed_time = times.back();

  const double lambda = spec.lambda;
  const Complex ilam(0.0, lambda);
  const Complex iunit(0.0, 1.0);

  // Decay fit of the residual-source norm on the upper half of the node
  // range, used to bound the tail of the time integral beyond the seed.
  std::vector<double> rs_t, rs_norm;
  double rs_peak = 0.0;
  for (double tau : times) {
    const double n = residual_source(tau, spec, grid).second;
    rs_peak = std::max(rs_peak, n);
    if (tau >= 0.5 * (times.front() + seed_time) && n > 0.0) {
      rs_t.push_back(tau);
      rs_norm.push_back(n);
    }
  }
  double tail_exponent = 0.0;
  double tail_bound = 0.0;
  if (rs_peak > 0.0) {
    if (rs_t.size() < 4)
      throw std::invalid_argument(
          "picard_refine: too few snapshots to bound the quadrature tail");
    const PowerLawFit fit = fit_power_law(rs_t, rs_norm);
    tail_exponent = fit.alpha;
    tail_bound = (fit.alpha > 1.0)
                     ? fit.c * std::pow(seed_time, 1.0 - fit.alpha) /
                           (fit.alpha - 1.0)
                     : std::numeric_limits<double>::infinity();
  }

  PicardReport report;
  report.tail_exponent = tail_exponent;
  report.tail_bound = tail_bound;

  for (double te : eval_times) {
    // Locate te among the snapshots; the quadrature nodes are all stored
    // times in [te, T].
    const double slack = 1e-9 * std::max(1.0, seed_time);
    const auto first = std::lower_bound(times.begin(), times.end(), te - slack);
    if (first == times.end() || std::abs(*first - te) > slack)
      throw std::invalid_argument("picard_refine: evaluation time " +
                                  std::to_string(te) +
                                  " is not a stored snapshot");
    const std::size_t k0 = static_cast<std::size_t>(first - times.begin());
    const std::size_t n_nodes = times.size() - k0;
    if (n_nodes < 4)
      throw std::invalid_argument(
          "picard_refine: fewer than 4 quadrature nodes above t = " +
          std::to_string(te));

    // Composite trapezoid of W(te - tau) h(tau) accumulated in frequency,
    // h = i lambda (|u|u - |v|v) - i R.
    ComplexArray acc = ComplexArray::Zero(grid.n1, grid.n2);
    for (std::size_t k = k0; k < times.size(); ++k) {
      const double tau = times[k];
      const double left = (k == k0) ? tau : times[k - 1];
      const double right = (k + 1 == times.size()) ? tau : times[k + 1];
      const double wt = 0.5 * (right - left);

      const ComplexArray& u = traj.fields[order[k]].values;
      const Field v = modified_free_field(tau, spec, grid);
      const Field r = residual_source(tau, spec, grid).first;
      Field h(grid, Domain::Space,
              ilam * (u.abs().cast<Complex>() * u -
                      v.values.abs().cast<Complex>() * v.values) -
                  iunit * r.values);
      acc += wt * propagation_multiplier(grid, te - tau) *
             forward_transform(h).values;
    }

    Field refined = inverse_transform(Field(grid, Domain::Frequency, acc));
    const Field vte = modified_free_field(te, spec, grid);
    const Field diff(grid, Domain::Space,
                     traj.fields[order[k0]].values - vte.values);
    const double den = l2_norm(diff);
    const double num =
        l2_norm(Field(grid, Domain::Space, refined.values - diff.values)) +
        tail_bound;
    const double ratio =
        (den > 0.0) ? num / den
                    : (num > 0.0 ? std::numeric_limits<double>::infinity()
                                 : 0.0);

    report.eval_times.push_back(te);
    report.ratios.push_back(ratio);
    report.refined.push_back(std::move(refined));
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  return report;
}

} // namespace adsp
