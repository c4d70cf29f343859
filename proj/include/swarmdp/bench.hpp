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

#ifndef SWARMDP_BENCH_HPP
#define SWARMDP_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swarmdp/dikw.hpp"
#include "swarmdp/dp.hpp"
#include "swarmdp/generate.hpp"
#include "swarmdp/swarm.hpp"
#include "swarmdp/utility.hpp"

namespace swarmdp {

struct DatasetSource {
  enum class Kind { kGenerated, kFiles };
  Kind kind = Kind::kGenerated;
  GenSpec gen;              // kGenerated
  std::string data_path;    // kFiles
  std::string schema_path;  // kFiles
};

struct VerifyCase {
  Mechanism mechanism = Mechanism::kLaplace;
  double actual_epsilon = 1.0;   // what the mechanism really spends
  double claimed_epsilon = 1.0;  // what it is audited against
  int label_count = 2;           // randomized response only
};

struct VerifyConfig {
  std::vector<VerifyCase> cases;  // empty: honest laplace@1 and rr@ln(3)
  std::int64_t draw_count = 100000;
  int bin_count = 40;
  double sensitivity = 1.0;
};

struct ExperimentConfig {
  DatasetSource source;
  std::optional<PrivacyMode> mode;  // nullopt = auto
  std::vector<double> epsilon_grid{0.1, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> fraction_targets{0.25, 0.5, 0.75, 1.0};
  SwarmConfig swarm;
  DpParams dp;
  FitnessWeights weights;
  SplitSpec split;
  double tau = 0.5;
  int repetitions = 10;
  std::uint64_t master_seed = 42;
  std::string output_dir = "out";
  VerifyConfig verify;

  void validate() const;
};

ExperimentConfig default_experiment_config();
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(std::istream& in, std::string_view name);
void save_experiment_config(std::ostream& out, const ExperimentConfig& config);

struct SweepRow {
  double epsilon = 0.0;
  double retained_fraction = 0.0;
  double mean_accuracy = 0.0;
  double accuracy_stddev = 0.0;
  int repetitions = 0;
  std::uint64_t seed = 0;
  bool present = true;
  std::string note;  // why a cell is absent
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double baseline_accuracy = 0.0;
  PrivacyMode mode = PrivacyMode::kDikdp;
};

// Builds or loads the dataset named by the config.
DikwDataset resolve_dataset(const ExperimentConfig& config);

// config.mode, or the auto pipeline: first suggested mode, one swarm run,
// then decide_mode on the retained mask.
PrivacyMode resolve_mode(const ExperimentConfig& config, const DikwDataset& dataset);

// Per (epsilon, fraction) cell: swarm-select a mask whose retained count
// lands within one item of the target (bisection over the coverage weight;
// fraction 1 takes the full mode mask), noise the training split, score on
// the clean holdout, repeated with derived seeds. Outputs land under
// config.output_dir.
SweepResult run_sweep(const ExperimentConfig& config);

struct VerifyReportRow {
  std::string name;
  double actual_epsilon = 0.0;
  double claimed_epsilon = 0.0;
  double empirical_epsilon = 0.0;
  double slack = 0.0;
  bool conclusive = false;
  bool passed = false;
};

std::vector<VerifyReportRow> run_verify(const ExperimentConfig& config);

// One curve file per retained fraction (epsilon, mean, stddev; sorted by
// epsilon) plus the machine-readable summary of all rows.
void emit_curves(const SweepResult& result, const std::string& output_dir);

}  // namespace swarmdp

#endif  // SWARMDP_BENCH_HPP
