// cinesim command line: one subcommand per pipeline stage plus run-all.

#include "cinesim/error.hpp"
#include "cinesim/fixture.hpp"
#include "cinesim/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonArgs {
  std::string manifest;
  std::string config;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool json = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--manifest", args.manifest, "dataset manifest JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--config", args.config, "pipeline config JSON")->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", args.out_dir, "artifact directory")->required();
  cmd->add_option("--set", args.overrides, "config override section.key=value (repeatable)");
  cmd->add_flag("--json", args.json, "print stage summaries as JSON on stdout");
  cmd->add_flag("-q,--quiet", args.quiet, "no progress log");
}

// Stage-specific shortcuts translated to config overrides.
void add_shortcut(CLI::App* cmd, std::vector<std::pair<std::string, std::string>>& shortcuts, const std::string& flag,
                  const std::string& key, const std::string& help) {
  auto& slot = shortcuts.emplace_back(key, std::string{});
  cmd->add_option(flag, slot.second, help);
}

int run(const CommonArgs& args, const std::vector<cinesim::Stage>& stages,
        const std::vector<std::pair<std::string, std::string>>& shortcuts) {
  auto config = args.config.empty() ? cinesim::PipelineConfig{} : cinesim::PipelineConfig::load(args.config);
  for (const auto& o : args.overrides) config.apply_override(o);
  for (const auto& [key, value] : shortcuts) {
    if (!value.empty()) config.apply_override(key + "=" + value);
  }
  cinesim::Logger log;
  if (!args.quiet) log = [](std::string_view line) { std::cerr << line << '\n'; };
  cinesim::Pipeline pipeline(cinesim::DatasetManifest::load(args.manifest), std::move(config), args.out_dir, log);
  std::vector<std::string> lines;
  for (auto stage : stages) {
    const auto summary = pipeline.run_stage(stage);
    if (!args.quiet) {
      std::cerr << summary.stage << ": " << summary.status << " (" << summary.outputs.size() << " outputs, "
                << summary.seconds << " s)\n";
    }
    lines.push_back(summary.to_json());
  }
  if (args.json) {
    if (lines.size() == 1) {
      std::cout << lines.front() << '\n';
    } else {
      std::cout << '[';
      for (std::size_t i = 0; i < lines.size(); ++i) std::cout << (i ? "," : "") << lines[i];
      std::cout << "]\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cinesim: content-based movie similarity"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<std::pair<std::string, std::string>> shortcuts;
  shortcuts.reserve(32);
  std::vector<cinesim::Stage> stages;

  for (auto stage : cinesim::all_stages()) {
    const std::string name(cinesim::to_string(stage));
    auto* cmd = app.add_subcommand(name, "run the " + name + " stage");
    add_common(cmd, args);
    switch (stage) {
      case cinesim::Stage::kTrainLsi:
        add_shortcut(cmd, shortcuts, "--concepts", "text.lsi_concepts", "number of LSI concepts");
        break;
      case cinesim::Stage::kTrainLda:
        add_shortcut(cmd, shortcuts, "--topics", "text.lda_topics", "number of topics");
        add_shortcut(cmd, shortcuts, "--sweeps", "text.lda_sweeps", "Gibbs sweeps");
        add_shortcut(cmd, shortcuts, "--burn-in", "text.lda_burn_in", "burn-in sweeps");
        break;
      case cinesim::Stage::kFitWeights:
        add_shortcut(cmd, shortcuts, "--method", "fusion.method", "auto, grid or random_simplex");
        add_shortcut(cmd, shortcuts, "--holdout", "fusion.holdout_fraction", "held-out query fraction");
        break;
      case cinesim::Stage::kEvaluate:
        add_shortcut(cmd, shortcuts, "--n-recs", "evaluation.n_recs", "recommendations per query for group ratios");
        add_shortcut(cmd, shortcuts, "--baseline", "evaluation.baseline", "model compared against");
        break;
      case cinesim::Stage::kGraph:
        add_shortcut(cmd, shortcuts, "--k", "graph.k", "neighbours per node");
        add_shortcut(cmd, shortcuts, "--min-weight", "graph.min_weight", "minimum edge weight");
        add_shortcut(cmd, shortcuts, "--resolution", "graph.resolution", "Louvain resolution");
        break;
      default:
        break;
    }
    cmd->callback([&stages, stage] { stages = {stage}; });
  }

  auto* all = app.add_subcommand("run-all", "run every stage in dependency order");
  add_common(all, args);
  all->callback([&stages] { stages.assign(cinesim::all_stages().begin(), cinesim::all_stages().end()); });

  std::string kind = "clusters";
  std::string fixture_dir;
  std::uint64_t seed = 42;
  std::size_t movies = 20;
  auto* fixture = app.add_subcommand("make-fixture", "write a synthetic dataset");
  fixture->add_option("--kind", kind, "clusters (12 movies, every modality) or boost")
      ->check(CLI::IsMember({"clusters", "boost"}));
  fixture->add_option("--out-dir", fixture_dir, "dataset directory")->required();
  fixture->add_option("--seed", seed, "generator seed");
  fixture->add_option("--movies", movies, "movie count (boost only)");

  std::string show_config;
  std::vector<std::string> show_overrides;
  auto* config_cmd = app.add_subcommand("show-config", "print the effective config and its hash");
  config_cmd->add_option("--config", show_config, "pipeline config JSON")->check(CLI::ExistingFile);
  config_cmd->add_option("--set", show_overrides, "config override section.key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (fixture->parsed()) {
      const auto manifest = kind == "boost" ? cinesim::fixture::write_boost_dataset(fixture_dir, seed, movies)
                                            : cinesim::fixture::write_cluster_dataset(fixture_dir, seed);
      std::cout << manifest.string() << '\n';
      return 0;
    }
    if (config_cmd->parsed()) {
      auto config = show_config.empty() ? cinesim::PipelineConfig{} : cinesim::PipelineConfig::load(show_config);
      for (const auto& o : show_overrides) config.apply_override(o);
      std::cout << config.to_json();
      std::cerr << "config hash " << config.hash() << '\n';
      return 0;
    }
    return run(args, stages, shortcuts);
  } catch (const cinesim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == cinesim::ErrorCode::kMissingDependency ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
