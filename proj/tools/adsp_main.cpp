// Command-line front end: each verb runs one experiment config and exits 0
// iff every declared threshold passed. See configs/ for annotated examples.

#include "CLI11.hpp"

#include "adsp/lab.hpp"
#include "adsp/transform.hpp"

#include <iostream>
#include <memory>

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;
};

int run_one(const CommonArgs& args, const std::string& kind_override,
            bool kernel_validate) {
  adsp::set_transform_effort(adsp::PlanEffort::Measure);
  if (args.threads > 0) adsp::set_transform_threads(args.threads);

  adsp::RunOptions opts;
  opts.out_override = args.out;
  opts.kind_override = kind_override;
  if (args.seed_option != nullptr && args.seed_option->count() > 0)
    opts.seed = args.seed;

  const adsp::ExperimentResult result =
      kernel_validate ? adsp::run_kernel_validation(args.config, opts)
                      : adsp::run_experiment(args.config, opts);

  for (const std::string& note : result.notes)
    std::cerr << "note: " << note << "\n";
  std::cout << result.kind << ": " << (result.passed ? "PASS" : "FAIL")
            << " (report in " << result.out_dir << ")\n";
  return result.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral laboratory for the anisotropic fourth-order "
               "Schrodinger flow"};
  app.require_subcommand(1);

  int rc = 0;
  const auto add_verb = [&](const std::string& verb, const std::string& desc,
                            const std::string& kind, bool kernel_validate) {
    CLI::App* sub = app.add_subcommand(verb, desc);
    auto args = std::make_shared<CommonArgs>();
    sub->add_option("--config", args->config, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args->out,
                    "output directory (overrides the config `out` key)");
    sub->add_option("--threads", args->threads, "transform threads");
    args->seed_option =
        sub->add_option("--seed", args->seed, "seed override for any "
                                              "synthetic randomness");
    sub->callback(
        [args, kind, kernel_validate, &rc]() {
          rc = run_one(*args, kind, kernel_validate);
        });
  };

  add_verb("simulate", "run the experiment named in the config", "", false);
  add_verb("scatter-fit",
           "backward final-state solve and distance-to-profile fit",
           "scattering-fit", false);
  add_verb("remainder-fit", "stationary-phase remainder decay fit",
           "remainder-fit", false);
  add_verb("glassey", "pairing-growth nonexistence diagnostic", "glassey",
           false);
  add_verb("convergence", "Strang step-doubling order ladder",
           "convergence-ladder", false);
  add_verb("kernel-validate",
           "lattice propagator vs certified kernel quadrature", "", true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
