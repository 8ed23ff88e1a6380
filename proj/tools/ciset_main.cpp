#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "ciset/pipeline.hpp"

namespace {

struct CliArgs {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;
};

void add_common(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config, "problem description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "artifact directory");
  cmd->add_option("--seed", args.seed, "override the config seed")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--workers", args.workers,
                  "worker threads (0 = machine core count)");
}

ciset::RunConfig make_config(const CliArgs& args) {
  ciset::RunConfig cfg = ciset::load_config(args.config);
  cfg.out_dir = args.out;
  if (args.seed_given) cfg.seed = args.seed;
  cfg.workers = args.workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyhedral control invariant set approximation"};
  app.require_subcommand(1);

  CliArgs args;
  auto* run = app.add_subcommand("run", "full pipeline with all artifacts");
  auto* sample = app.add_subcommand("sample", "sample convergent trajectories");
  auto* prune = app.add_subcommand("prune", "drop redundant sample points");
  auto* fitcmd = app.add_subcommand("fit", "convex piecewise-linear fit");
  auto* assemble = app.add_subcommand("assemble", "build the H-representation");
  auto* certify = app.add_subcommand("certify", "vertex-wise invariance check");
  auto* oracle = app.add_subcommand("oracle", "backward-recursion exact set");
  auto* plot = app.add_subcommand("plot", "projection and SVG exports");
  for (auto* cmd : {run, sample, prune, fitcmd, assemble, certify, oracle, plot})
    add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    const ciset::RunConfig cfg = make_config(args);
    if (run->parsed()) {
      ciset::PipelineResult res = ciset::run_pipeline(cfg);
      std::cout << "pipeline complete: " << res.symmetrized_count << " samples, "
                << res.pruned_count << " after pruning, M="
                << res.fit_report.chosen_m << ", " << res.rows_after
                << " inequalities, containment " << res.sample_containment
                << "\n";
    } else if (sample->parsed()) {
      ciset::stage_sample(cfg);
    } else if (prune->parsed()) {
      ciset::stage_prune(cfg);
    } else if (fitcmd->parsed()) {
      ciset::stage_fit(cfg);
    } else if (assemble->parsed()) {
      ciset::stage_assemble(cfg);
    } else if (certify->parsed()) {
      ciset::stage_certify(cfg);
    } else if (oracle->parsed()) {
      ciset::stage_oracle(cfg);
    } else if (plot->parsed()) {
      ciset::stage_plot(cfg);
    }
  } catch (const ciset::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ciset::GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 4;
  } catch (const ciset::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
