#include "adsp/transform.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace adsp {

namespace {

std::atomic<int> g_effort{0};      // 0 = Estimate, 1 = Measure
std::atomic<unsigned> g_threads{1};

// One cached plan pair per grid shape. Execution reuses the buffers the plans
// were created with, serialized by the per-entry mutex; distinct shapes run
// concurrently.
struct PlanEntry {
  std::mutex mutex;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  PlanEntry(Eigen::Index n1, Eigen::Index n2, int effort, unsigned threads) {
    in = fftw_alloc_complex(static_cast<size_t>(n1 * n2));
    out = fftw_alloc_complex(static_cast<size_t>(n1 * n2));
    const unsigned flags = effort == 1 ? FFTW_MEASURE : FFTW_ESTIMATE;
#ifdef ADSP_FFTW_THREADS
    fftw_plan_with_nthreads(static_cast<int>(threads));
#else
    (void)threads;
#endif
    // Our buffers are column-major with the x1 axis fastest, which FFTW reads
    // as a row-major (n2, n1) array.
    fwd = fftw_plan_dft_2d(static_cast<int>(n2), static_cast<int>(n1), in, out,
                           FFTW_FORWARD, flags);
    bwd = fftw_plan_dft_2d(static_cast<int>(n2), static_cast<int>(n1), in, out,
                           FFTW_BACKWARD, flags);
  }

  ~PlanEntry() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
  }
};

std::mutex g_cache_mutex;
std::map<std::pair<Eigen::Index, Eigen::Index>,
         std::unique_ptr<PlanEntry>>* g_cache;

PlanEntry& plan_for(const GridSpec& g) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  if (!g_cache)
    g_cache = new std::map<std::pair<Eigen::Index, Eigen::Index>,
                           std::unique_ptr<PlanEntry>>;
#ifdef ADSP_FFTW_THREADS
  static bool threads_ready = [] { return fftw_init_threads() != 0; }();
  (void)threads_ready;
#endif
  auto key = std::make_pair(g.n1, g.n2);
  auto it = g_cache->find(key);
  if (it == g_cache->end())
    it = g_cache
             ->emplace(key, std::make_unique<PlanEntry>(
                                g.n1, g.n2, g_effort.load(), g_threads.load()))
             .first;
  return *it->second;
}

// Copy between an Eigen array and an FFTW buffer while rotating both axes by
// half a period (fftshift; its own inverse for even sizes). Folding the shift
// into the copies realizes fftshift . FFT . ifftshift with no extra passes.
void copy_in_shifted(const ComplexArray& src, fftw_complex* dst) {
  const Eigen::Index n1 = src.rows(), n2 = src.cols();
  const Eigen::Index s1 = n1 / 2, s2 = n2 / 2;
  for (Eigen::Index j = 0; j < n2; ++j) {
    const Eigen::Index dj = j ^ s2; // (j + n2/2) % n2 for powers of two
    fftw_complex* col = dst + dj * n1;
    for (Eigen::Index i = 0; i < n1; ++i) {
      const Complex v = src(i, j);
      col[i ^ s1][0] = v.real();
      col[i ^ s1][1] = v.imag();
    }
  }
}

void copy_out_shifted(const fftw_complex* src, ComplexArray& dst,
                      double scale) {
  const Eigen::Index n1 = dst.rows(), n2 = dst.cols();
  const Eigen::Index s1 = n1 / 2, s2 = n2 / 2;
  for (Eigen::Index j = 0; j < n2; ++j) {
    const fftw_complex* col = src + (j ^ s2) * n1;
    for (Eigen::Index i = 0; i < n1; ++i) {
      const Eigen::Index si = i ^ s1;
      dst(i, j) = scale * Complex(col[si][0], col[si][1]);
    }
  }
}

Field execute(const Field& f, bool forward) {
  const GridSpec& g = f.grid;
  const double two_pi_pow =
      g.d == 2 ? 2.0 * M_PI : std::sqrt(2.0 * M_PI);
  const double scale = forward ? g.h1() * g.h2() / two_pi_pow
                               : g.dxi1() * g.dxi2() / two_pi_pow;
  Field result(g, forward ? Domain::Frequency : Domain::Space);
  PlanEntry& plan = plan_for(g);
  std::lock_guard<std::mutex> lock(plan.mutex);
  copy_in_shifted(f.values, plan.in);
  fftw_execute(forward ? plan.fwd : plan.bwd);
  copy_out_shifted(plan.out, result.values, scale);
  return result;
}

} // namespace

void set_transform_effort(PlanEffort effort) {
  g_effort.store(effort == PlanEffort::Measure ? 1 : 0);
}

void set_transform_threads(unsigned n) { g_threads.store(n == 0 ? 1 : n); }

Field forward_transform(const Field& f) {
  require_domain(f, Domain::Space, "forward_transform");
  return execute(f, true);
}

Field inverse_transform(const Field& f) {
  require_domain(f, Domain::Frequency, "inverse_transform");
  return execute(f, false);
}

Field conjugate_transform(const Field& f) {
  return f.domain == Domain::Space ? execute(f, true) : execute(f, false);
}

} // namespace adsp
