// Copyright 2026 The SwarmDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swarmdp/bench.hpp"
#include "swarmdp/dataset_io.hpp"
#include "swarmdp/errors.hpp"
#include "swarmdp/text.hpp"
#include "swarmdp/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace swarmdp;

struct CommonArgs {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::string out_dir;
  std::string mode;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config file");
  cmd->add_option("--seed", args.seed, "Master seed override");
  cmd->add_option("--out", args.out_dir, "Output directory override");
  cmd->add_option("--mode", args.mode,
                  "Privacy mode override (DDP|IDP|KDP|DIDP|IKDP|DIKDP|PDP|auto)");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
  ExperimentConfig config = args.config_path.empty()
                                ? default_experiment_config()
                                : load_experiment_config(args.config_path);
  if (args.seed) config.master_seed = static_cast<std::uint64_t>(*args.seed);
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  if (!args.mode.empty()) {
    if (to_lower(args.mode) == "auto")
      config.mode = std::nullopt;
    else
      config.mode = parse_mode(args.mode);
  }
  config.validate();
  return config;
}

MaskPlan load_mask_file(const std::string& path, const DikwDataset& dataset) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::vector<bool> selected(static_cast<std::size_t>(dataset.item_count()), false);
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (header) {  // "item_id,selected"
      header = false;
      continue;
    }
    const auto fields = split(t, ',');
    if (fields.size() != 2)
      throw ValidationError(path + ":" + fmt_int(line_no) + ": want 'item_id,selected'");
    const int idx = dataset.item_index(trim(fields[0]));
    if (idx < 0)
      throw ValidationError(path + ":" + fmt_int(line_no) + ": unknown item '" +
                            std::string(trim(fields[0])) + "'");
    selected[static_cast<std::size_t>(idx)] = parse_bool(fields[1], "selected");
  }
  return MaskPlan(dataset, std::move(selected));
}

void write_mask_file(const std::string& path, const MaskPlan& mask) {
  std::ofstream out(path);
  out << "item_id,selected\n";
  for (int i = 0; i < mask.size(); ++i)
    out << mask.item_ids()[static_cast<std::size_t>(i)] << ","
        << (mask.selected(i) ? 1 : 0) << "\n";
}

int cmd_generate(const CommonArgs& args) {
  ExperimentConfig config = resolve_config(args);
  GenSpec spec = config.source.gen;
  if (args.seed) spec.seed = static_cast<std::uint64_t>(*args.seed);
  const DikwDataset dataset = generate_iris_dikw(spec);
  const ValidationReport report = validate_generated(dataset);
  for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
  if (!report.ok()) return 1;
  fs::create_directories(config.output_dir);
  const std::string data_path = config.output_dir + "/iris_dikw.csv";
  const std::string schema_path = config.output_dir + "/iris_dikw.schema";
  save_dataset(dataset, data_path, schema_path);
  std::cout << "wrote " << data_path << " (" << dataset.record_count() << " records, "
            << dataset.item_count() << " items)\n"
            << "wrote " << schema_path << "\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const ExperimentConfig config = resolve_config(args);
  const SweepResult result = run_sweep(config);
  std::cout << "mode " << mode_name(result.mode) << ", baseline accuracy "
            << fmt_double(result.baseline_accuracy) << "\n";
  for (const auto& row : result.rows) {
    if (row.present)
      std::cout << "eps " << fmt_double(row.epsilon) << " fraction "
                << fmt_double(row.retained_fraction) << ": accuracy "
                << fmt_double(row.mean_accuracy) << " +/- "
                << fmt_double(row.accuracy_stddev) << "\n";
    else
      std::cout << "eps " << fmt_double(row.epsilon) << " fraction "
                << fmt_double(row.retained_fraction) << ": absent (" << row.note << ")\n";
  }
  std::cout << "results under " << config.output_dir << "\n";
  return 0;
}

int cmd_verify(const CommonArgs& args) {
  const ExperimentConfig config = resolve_config(args);
  const auto rows = run_verify(config);
  bool all_ok = true;
  for (const auto& row : rows) {
    const std::string verdict =
        !row.conclusive ? "INCONCLUSIVE" : (row.passed ? "PASS" : "FAIL");
    std::cout << verdict << " " << row.name << ": empirical "
              << fmt_double(row.empirical_epsilon) << ", claimed "
              << fmt_double(row.claimed_epsilon) << ", slack " << fmt_double(row.slack)
              << "\n";
    all_ok = all_ok && (!row.conclusive || row.passed);
  }
  std::cout << "report under " << config.output_dir << "\n";
  return all_ok ? 0 : 1;
}

int cmd_optimize(const CommonArgs& args) {
  const ExperimentConfig config = resolve_config(args);
  const DikwDataset dataset = resolve_dataset(config);
  const PrivacyMode mode = resolve_mode(config, dataset);
  const int support_size = static_cast<int>(mode_support(dataset, mode).size());
  SwarmConfig sc = config.swarm;
  sc.seed = derive_seed(config.master_seed, "optimize");
  const SplitSpec split{config.split.train_fraction,
                        derive_seed(config.master_seed, "optimize-split")};
  const auto fit = [&](const MaskPlan& mask) {
    return fitness(mask, dataset, config.dp, config.weights, split,
                   derive_seed(config.master_seed, "optimize-fitness"), support_size);
  };
  const OptimizeResult result = optimize_mask(dataset, mode, fit, sc);

  fs::create_directories(config.output_dir);
  write_mask_file(config.output_dir + "/best_mask.csv", result.best_mask);
  {
    std::ofstream out(config.output_dir + "/trace.csv");
    out << "iteration,global_best_fitness,retained_fraction,masked_variance\n";
    for (const auto& row : result.trace.rows)
      out << row.iteration << "," << fmt_double(row.global_best_fitness) << ","
          << fmt_double(row.retained_fraction) << "," << fmt_double(row.masked_variance)
          << "\n";
  }
  std::cout << "mode " << mode_name(mode) << ": best fitness "
            << fmt_double(result.best_fitness) << ", " << result.best_mask.selected_count()
            << " of " << support_size << " items selected\n"
            << "mask and trace under " << config.output_dir << "\n";
  return 0;
}

int cmd_decide_mode(const CommonArgs& args, const std::string& mask_path) {
  const ExperimentConfig config = resolve_config(args);
  const DikwDataset dataset = resolve_dataset(config);
  MaskPlan mask;
  if (!mask_path.empty()) {
    mask = load_mask_file(mask_path, dataset);
  } else {
    const auto order = mode_order_suggestion(dataset);
    if (order.empty())
      throw ValidationError("decide-mode: no privacy mode has a non-empty mask here");
    const PrivacyMode first = config.mode.value_or(order.front());
    const int support_size = static_cast<int>(mode_support(dataset, first).size());
    SwarmConfig sc = config.swarm;
    sc.seed = derive_seed(config.master_seed, "decide-probe");
    const SplitSpec split{config.split.train_fraction,
                          derive_seed(config.master_seed, "decide-split")};
    const auto fit = [&](const MaskPlan& m) {
      return fitness(m, dataset, config.dp, config.weights, split,
                     derive_seed(config.master_seed, "decide-fitness"), support_size);
    };
    mask = optimize_mask(dataset, first, fit, sc).best_mask;
  }
  const PrivacyMode decided = decide_mode(dataset, mask, config.tau);
  std::cout << mode_name(decided) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective differential privacy for DIKW-tagged datasets"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonArgs generate_args, sweep_args, verify_args, optimize_args, decide_args;
  std::string mask_path;

  add_common(app.add_subcommand("generate", "Synthesize the extended-Iris DIKW dataset"),
             generate_args);
  add_common(app.add_subcommand("sweep", "Run the accuracy-vs-epsilon sweep"), sweep_args);
  add_common(app.add_subcommand("verify", "Audit mechanisms against their declared epsilon"),
             verify_args);
  add_common(app.add_subcommand("optimize", "Run one swarm mask optimization"),
             optimize_args);
  CLI::App* decide =
      app.add_subcommand("decide-mode", "Chain modal associations into a privacy mode");
  add_common(decide, decide_args);
  decide->add_option("--mask", mask_path, "Mask file (item_id,selected) to chain from");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("generate")) return cmd_generate(generate_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args);
    if (app.got_subcommand("verify")) return cmd_verify(verify_args);
    if (app.got_subcommand("optimize")) return cmd_optimize(optimize_args);
    if (app.got_subcommand("decide-mode")) return cmd_decide_mode(decide_args, mask_path);
  } catch (const swarmdp::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
