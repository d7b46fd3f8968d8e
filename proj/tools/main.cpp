#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reckit/corpus.hpp"
#include "reckit/experiment.hpp"
#include "reckit/version.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

struct CommonOpts {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
  CLI::Option* out_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  bool has_out() const { return out_opt != nullptr && out_opt->count() > 0; }
  bool has_seed() const { return seed_opt != nullptr && seed_opt->count() > 0; }
};

void add_common(CLI::App& cmd, CommonOpts& opts) {
  cmd.add_option("--config", opts.config, "JSON config file")->required();
  opts.out_opt = cmd.add_option("--out", opts.out, "Output directory (overrides config)");
  opts.seed_opt = cmd.add_option("--seed", opts.seed, "Seed (overrides config)");
  cmd.add_option("--threads", opts.threads, "Worker threads");
}

int cmd_ingest(const std::string& path, double min, double max) {
  reckit::corpus::IngestSchema schema;
  schema.rating_range = {min, max};
  const auto result = reckit::corpus::ingest_interactions(path, schema);
  std::cout << "events: " << result.log.events().size() << '\n'
            << "users: " << result.log.users().size() << '\n'
            << "items: " << result.log.items().size() << '\n'
            << "malformed_rows: " << result.malformed_rows << '\n';
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  return kOk;
}

int cmd_split(const std::string& path, double fraction, const std::string& out_dir) {
  reckit::corpus::IngestSchema schema;
  const auto result = reckit::corpus::ingest_interactions(path, schema);
  const auto split = reckit::corpus::chronological_split(result.log, fraction);
  const auto dump = [](const reckit::corpus::InteractionLog& log,
                       const std::string& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file);
    out << "user,item,value,ts\n";
    for (const auto& e : log.events())
      out << e.user << ',' << e.item << ',' << e.value << ',' << e.timestamp << '\n';
  };
  dump(split.train, out_dir + "/train.csv");
  dump(split.test, out_dir + "/test.csv");
  std::cout << "train events: " << split.train.events().size() << '\n'
            << "test events: " << split.test.events().size() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recommender experimentation toolkit"};
  app.set_version_flag("--version", std::string(reckit::kVersion));
  app.require_subcommand(1);

  // ingest: dataset sanity summary
  std::string ingest_path;
  double ingest_min = 1.0, ingest_max = 5.0;
  auto* ingest = app.add_subcommand("ingest", "Validate and summarize an interaction CSV");
  ingest->add_option("--config", ingest_path, "Interaction CSV path")->required();
  ingest->add_option("--rating-min", ingest_min, "Lowest valid rating");
  ingest->add_option("--rating-max", ingest_max, "Highest valid rating");

  // split: write chronological train/test CSVs
  std::string split_path, split_out = ".";
  double split_fraction = 0.8;
  auto* split = app.add_subcommand("split", "Chronological per-user train/test split");
  split->add_option("--config", split_path, "Interaction CSV path")->required();
  split->add_option("--fraction", split_fraction, "Train fraction")->default_val(0.8);
  split->add_option("--out", split_out, "Output directory")->default_val(".");

  CommonOpts run_opts;
  auto* run = app.add_subcommand("run", "Run a recommendation experiment");
  add_common(*run, run_opts);

  CommonOpts sim_opts;
  std::vector<std::uint64_t> sim_seeds;
  auto* simulate = app.add_subcommand("simulate", "Run the fairness simulation");
  add_common(*simulate, sim_opts);
  simulate->add_option("--seeds", sim_seeds, "Fan out one run per seed");

  CommonOpts attr_opts;
  auto* attribute =
      app.add_subcommand("attribute", "Per-recommendation component attribution");
  add_common(*attribute, attr_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest(ingest_path, ingest_min, ingest_max);
    if (split->parsed()) return cmd_split(split_path, split_fraction, split_out);
    if (run->parsed() || attribute->parsed()) {
      const auto& opts = run->parsed() ? run_opts : attr_opts;
      auto cfg = reckit::experiment::load_experiment_config(opts.config);
      if (opts.has_out()) cfg.out = opts.out;
      if (opts.has_seed()) cfg.seed = opts.seed;
      if (attribute->parsed() && cfg.algorithm != "act" && cfg.algorithm != "bll")
        throw reckit::experiment::ConfigError(
            "config field 'algorithm' must be 'act' or 'bll' for attribute");
      const auto outputs = reckit::experiment::run_experiment(cfg);
      for (const auto& f : outputs) std::cout << f << '\n';
      return kOk;
    }
    if (simulate->parsed()) {
      auto cfg = reckit::experiment::load_simulate_config(sim_opts.config);
      if (sim_opts.has_out()) cfg.out = sim_opts.out;
      if (sim_opts.has_seed()) cfg.sim.seed = sim_opts.seed;
      const auto outputs = reckit::experiment::simulate_fairness(cfg, sim_seeds);
      for (const auto& f : outputs) std::cout << f << '\n';
      return kOk;
    }
  } catch (const reckit::experiment::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
