#pragma once

// Experiment drivers behind the CLI: each named experiment reads a flat
// config, owns one output directory, writes CSV series plus a line-oriented
// summary.txt and a human-readable report.txt, and declares pass/fail
// against the thresholds in the config. Partial CSV rows survive a
// numerical abort (rows are flushed as they are recorded).
//
// Experiments:
//   linear-decay        compensated sup-norm decay of the free propagator
//   remainder-fit       stationary-phase remainder decay exponent
//   residual-source-fit residual-source decay and compensated H^2 growth
//   scattering-fit      backward final-state solve, distance-to-profile fit,
//                       optional integral-map contraction check
//   glassey             forward IVP pairing growth vs the analytic rate
//   convergence-ladder  Strang step-doubling (Richardson) order check
//
// Every experiment reports the boundary-mass fraction of its initial field
// and fails when it exceeds 1e-8 (wrap-around guard).

#include "adsp/io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adsp {

inline constexpr double kBoundaryTolerance = 1e-8;

struct RunOptions {
  std::string out_override;          // overrides the config `out` key
  std::optional<std::uint64_t> seed; // overrides the config `seed` key
  std::string kind_override;         // forces the experiment kind (CLI verbs)
};

struct ExperimentResult {
  std::string kind;
  std::string out_dir;
  bool passed = false;
  Summary summary;
  std::vector<std::string> notes; // warnings and abort messages
};

// Dispatch on the config's `experiment` key; throws config_error on schema
// violations (unknown experiment, bad keys) and io_error on unwritable
// output. Numerical aborts are caught: the result is marked failed and the
// partial series stay on disk.
ExperimentResult run_experiment(const std::string& config_path,
                                const RunOptions& opts = {});

// Transform-vs-oracle cross validation (not one of the named experiments):
// compares the lattice propagator against the certified kernel quadrature
// at seeded random space points and several times, relative to the largest
// oracle value per time slice.
ExperimentResult run_kernel_validation(const std::string& config_path,
                                       const RunOptions& opts = {});

} // namespace adsp
