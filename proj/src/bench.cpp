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

#include "swarmdp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "swarmdp/dataset_io.hpp"
#include "swarmdp/errors.hpp"
#include "swarmdp/kv.hpp"
#include "swarmdp/random.hpp"
#include "swarmdp/text.hpp"
#include "swarmdp/version.hpp"

namespace swarmdp {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (epsilon_grid.empty()) throw ValidationError("config: empty epsilon grid");
  for (const double e : epsilon_grid)
    if (!(e > 0.0)) throw ValidationError("config: epsilons must be positive");
  if (fraction_targets.empty()) throw ValidationError("config: empty fraction grid");
  for (const double f : fraction_targets)
    if (!(f > 0.0 && f <= 1.0))
      throw ValidationError("config: fractions must lie in (0, 1]");
  if (repetitions < 1) throw ValidationError("config: repetitions must be >= 1");
  if (!(dp.epsilon > 0.0)) throw ValidationError("config: dp epsilon must be positive");
  if (weights.lambda_utility < 0 || weights.lambda_privacy_coverage < 0)
    throw ValidationError("config: fitness weights must be non-negative");
  if (weights.lambda_utility == 0 && weights.lambda_privacy_coverage == 0)
    throw ValidationError("config: fitness weights must not both be zero");
  if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0))
    throw ValidationError("config: train_fraction must lie in (0, 1)");
  if (!(tau > 0.0 && tau < 1.0)) throw ValidationError("config: tau must lie in (0, 1)");
  if (output_dir.empty()) throw ValidationError("config: empty output dir");
  if (verify.draw_count < 10000)
    throw ValidationError("config: verifier needs at least 10^4 draws");
  if (verify.bin_count < 2) throw ValidationError("config: verifier needs >= 2 bins");
  swarm.validate();
  if (source.kind == DatasetSource::Kind::kFiles &&
      (source.data_path.empty() || source.schema_path.empty()))
    throw ValidationError("config: file source needs data and schema paths");
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig config;
  config.source.gen = default_gen_spec();
  config.mode = PrivacyMode::kDikdp;
  config.verify.cases = {
      {Mechanism::kLaplace, 1.0, 1.0, 2},
      {Mechanism::kRandomizedResponse, std::log(3.0), std::log(3.0), 2},
  };
  return config;
}

namespace {

std::vector<double> parse_double_list(const std::string& text, std::string_view what) {
  std::vector<double> out;
  for (const auto& part : split_list(text)) out.push_back(parse_double(part, what));
  return out;
}

VerifyCase parse_verify_case(const std::string& text) {
  // "laplace actual=1.0 claimed=0.5" / "rr actual=1.1 claimed=1.1 labels=3"
  std::istringstream in(text);
  std::string word;
  if (!(in >> word)) throw ValidationError("verify case: empty");
  VerifyCase vc;
  vc.mechanism = parse_mechanism(word);
  while (in >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos)
      throw ValidationError("verify case: expected key=value, got '" + word + "'");
    const auto key = word.substr(0, eq);
    const auto value = word.substr(eq + 1);
    if (key == "actual")
      vc.actual_epsilon = parse_double(value, "verify actual");
    else if (key == "claimed")
      vc.claimed_epsilon = parse_double(value, "verify claimed");
    else if (key == "labels")
      vc.label_count = static_cast<int>(parse_int(value, "verify labels"));
    else
      throw ValidationError("verify case: unknown key '" + key + "'");
  }
  return vc;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, std::string_view name) {
  const KvFile file = parse_kv(in, name);
  ExperimentConfig config = default_experiment_config();

  if (const KvBlock* b = file.find_block("dataset")) {
    const auto source = to_lower(b->get_or("source", "generated"));
    if (source == "generated") {
      config.source.kind = DatasetSource::Kind::kGenerated;
      config.source.gen.source_file = b->get_or("gen_source", config.source.gen.source_file);
      if (const auto v = b->find("gen_seed"))
        config.source.gen.seed = static_cast<std::uint64_t>(parse_int(*v, "gen_seed"));
      if (const auto v = b->find("spatial_jitter"))
        config.source.gen.spatial_jitter = parse_double(*v, "spatial_jitter");
      if (const auto v = b->find("time_span"))
        config.source.gen.time_span = parse_int(*v, "time_span");
    } else if (source == "files") {
      config.source.kind = DatasetSource::Kind::kFiles;
      config.source.data_path = b->get("data");
      config.source.schema_path = b->get("schema");
    } else {
      throw ValidationError("config: unknown dataset source '" + source + "'");
    }
  }
  if (const KvBlock* b = file.find_block("sweep")) {
    if (const auto v = b->find("mode")) {
      if (to_lower(*v) == "auto")
        config.mode = std::nullopt;
      else
        config.mode = parse_mode(*v);
    }
    if (const auto v = b->find("epsilons"))
      config.epsilon_grid = parse_double_list(*v, "epsilons");
    if (const auto v = b->find("fractions"))
      config.fraction_targets = parse_double_list(*v, "fractions");
    if (const auto v = b->find("repetitions"))
      config.repetitions = static_cast<int>(parse_int(*v, "repetitions"));
    if (const auto v = b->find("seed"))
      config.master_seed = static_cast<std::uint64_t>(parse_int(*v, "seed"));
    if (const auto v = b->find("output")) config.output_dir = *v;
  }
  if (const KvBlock* b = file.find_block("swarm")) {
    if (const auto v = b->find("particles"))
      config.swarm.particle_count = static_cast<int>(parse_int(*v, "particles"));
    if (const auto v = b->find("c1")) config.swarm.c1 = parse_double(*v, "c1");
    if (const auto v = b->find("c2")) config.swarm.c2 = parse_double(*v, "c2");
    if (const auto v = b->find("max_iterations"))
      config.swarm.max_iterations = static_cast<int>(parse_int(*v, "max_iterations"));
    if (const auto v = b->find("neighborhood_radius"))
      config.swarm.neighborhood_radius =
          static_cast<int>(parse_int(*v, "neighborhood_radius"));
    if (const auto v = b->find("variance_blowup"))
      config.swarm.variance_blowup_factor = parse_double(*v, "variance_blowup");
    const auto a_s = b->find("alpha_spatial");
    const auto a_t = b->find("alpha_temporal");
    if (a_s || a_t) {
      StWeights w;
      if (a_s) w.alpha_spatial = parse_double(*a_s, "alpha_spatial");
      if (a_t) w.alpha_temporal = parse_double(*a_t, "alpha_temporal");
      config.swarm.st_weights = w;
    }
  }
  if (const KvBlock* b = file.find_block("dp")) {
    if (const auto v = b->find("epsilon")) config.dp.epsilon = parse_double(*v, "epsilon");
    if (const auto v = b->find("mechanism")) config.dp.mechanism = parse_mechanism(*v);
    if (const auto v = b->find("sensitivity")) {
      for (const auto& pair : split_list(*v)) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos)
          throw ValidationError("config: sensitivity wants item=value pairs");
        config.dp.sensitivity[std::string(trim(pair.substr(0, eq)))] =
            parse_double(pair.substr(eq + 1), "sensitivity");
      }
    }
  }
  if (const KvBlock* b = file.find_block("fitness")) {
    if (const auto v = b->find("lambda_utility"))
      config.weights.lambda_utility = parse_double(*v, "lambda_utility");
    if (const auto v = b->find("lambda_coverage"))
      config.weights.lambda_privacy_coverage = parse_double(*v, "lambda_coverage");
    if (const auto v = b->find("train_fraction"))
      config.split.train_fraction = parse_double(*v, "train_fraction");
    if (const auto v = b->find("tau")) config.tau = parse_double(*v, "tau");
  }
  if (const KvBlock* b = file.find_block("verify")) {
    if (const auto v = b->find("draws")) config.verify.draw_count = parse_int(*v, "draws");
    if (const auto v = b->find("bins"))
      config.verify.bin_count = static_cast<int>(parse_int(*v, "bins"));
    if (const auto v = b->find("sensitivity"))
      config.verify.sensitivity = parse_double(*v, "verify sensitivity");
    const auto cases = b->get_all("case");
    if (!cases.empty()) {
      config.verify.cases.clear();
      for (const auto& c : cases) config.verify.cases.push_back(parse_verify_case(c));
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return parse_experiment_config(in, path);
}

void save_experiment_config(std::ostream& out, const ExperimentConfig& config) {
  KvFile file;
  KvBlock dataset{"dataset", "", {}, 0};
  if (config.source.kind == DatasetSource::Kind::kGenerated) {
    dataset.entries = {{"source", "generated"},
                       {"gen_source", config.source.gen.source_file},
                       {"gen_seed", fmt_int(static_cast<std::int64_t>(config.source.gen.seed))},
                       {"spatial_jitter", fmt_double(config.source.gen.spatial_jitter)},
                       {"time_span", fmt_int(config.source.gen.time_span)}};
  } else {
    dataset.entries = {{"source", "files"},
                       {"data", config.source.data_path},
                       {"schema", config.source.schema_path}};
  }
  file.blocks.push_back(dataset);

  KvBlock sweep{"sweep", "", {}, 0};
  sweep.entries.emplace_back("mode",
                             config.mode ? std::string(mode_name(*config.mode)) : "auto");
  std::string eps, fracs;
  for (const double e : config.epsilon_grid) eps += (eps.empty() ? "" : ", ") + fmt_double(e);
  for (const double f : config.fraction_targets)
    fracs += (fracs.empty() ? "" : ", ") + fmt_double(f);
  sweep.entries.emplace_back("epsilons", eps);
  sweep.entries.emplace_back("fractions", fracs);
  sweep.entries.emplace_back("repetitions", fmt_int(config.repetitions));
  sweep.entries.emplace_back("seed", fmt_int(static_cast<std::int64_t>(config.master_seed)));
  sweep.entries.emplace_back("output", config.output_dir);
  file.blocks.push_back(sweep);

  KvBlock swarm{"swarm", "", {}, 0};
  swarm.entries = {{"particles", fmt_int(config.swarm.particle_count)},
                   {"c1", fmt_double(config.swarm.c1)},
                   {"c2", fmt_double(config.swarm.c2)},
                   {"max_iterations", fmt_int(config.swarm.max_iterations)},
                   {"neighborhood_radius", fmt_int(config.swarm.neighborhood_radius)},
                   {"variance_blowup", fmt_double(config.swarm.variance_blowup_factor)}};
  if (config.swarm.st_weights) {
    swarm.entries.emplace_back("alpha_spatial",
                               fmt_double(config.swarm.st_weights->alpha_spatial));
    swarm.entries.emplace_back("alpha_temporal",
                               fmt_double(config.swarm.st_weights->alpha_temporal));
  }
  file.blocks.push_back(swarm);

  KvBlock dp{"dp", "", {}, 0};
  dp.entries = {{"epsilon", fmt_double(config.dp.epsilon)},
                {"mechanism", std::string(mechanism_name(config.dp.mechanism))}};
  if (!config.dp.sensitivity.empty()) {
    std::string pairs;
    for (const auto& [id, v] : config.dp.sensitivity)
      pairs += (pairs.empty() ? "" : ", ") + id + "=" + fmt_double(v);
    dp.entries.emplace_back("sensitivity", pairs);
  }
  file.blocks.push_back(dp);

  KvBlock fit{"fitness", "", {}, 0};
  fit.entries = {{"lambda_utility", fmt_double(config.weights.lambda_utility)},
                 {"lambda_coverage", fmt_double(config.weights.lambda_privacy_coverage)},
                 {"train_fraction", fmt_double(config.split.train_fraction)},
                 {"tau", fmt_double(config.tau)}};
  file.blocks.push_back(fit);

  KvBlock verify{"verify", "", {}, 0};
  verify.entries = {{"draws", fmt_int(config.verify.draw_count)},
                    {"bins", fmt_int(config.verify.bin_count)},
                    {"sensitivity", fmt_double(config.verify.sensitivity)}};
  for (const auto& vc : config.verify.cases) {
    std::string line = std::string(mechanism_name(vc.mechanism)) +
                       " actual=" + fmt_double(vc.actual_epsilon) +
                       " claimed=" + fmt_double(vc.claimed_epsilon);
    if (vc.mechanism == Mechanism::kRandomizedResponse)
      line += " labels=" + fmt_int(vc.label_count);
    verify.entries.emplace_back("case", line);
  }
  file.blocks.push_back(verify);
  write_kv(out, file);
}

DikwDataset resolve_dataset(const ExperimentConfig& config) {
  if (config.source.kind == DatasetSource::Kind::kGenerated)
    return generate_iris_dikw(config.source.gen);
  return load_dataset(config.source.data_path, config.source.schema_path);
}

PrivacyMode resolve_mode(const ExperimentConfig& config, const DikwDataset& dataset) {
  if (config.mode) return *config.mode;
  const auto order = mode_order_suggestion(dataset);
  if (order.empty())
    throw ValidationError("auto mode: no privacy mode has a non-empty mask here");
  const PrivacyMode first = order.front();
  SwarmConfig sc = config.swarm;
  sc.seed = derive_seed(config.master_seed, "auto-probe");
  const int support_size = static_cast<int>(mode_support(dataset, first).size());
  const SplitSpec split{config.split.train_fraction,
                        derive_seed(config.master_seed, "auto-split")};
  const auto fit = [&](const MaskPlan& mask) {
    return fitness(mask, dataset, config.dp, config.weights, split,
                   derive_seed(config.master_seed, "auto-fitness"), support_size);
  };
  const OptimizeResult probe = optimize_mask(dataset, first, fit, sc);
  if (probe.best_mask.selected_count() == 0) return first;
  return decide_mode(dataset, probe.best_mask, config.tau);
}

namespace {

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

void write_trace(const std::string& path, const OptimizationTrace& trace) {
  std::ofstream out(path);
  out << "iteration,global_best_fitness,retained_fraction,masked_variance\n";
  for (const auto& row : trace.rows)
    out << row.iteration << "," << fmt_double(row.global_best_fitness) << ","
        << fmt_double(row.retained_fraction) << "," << fmt_double(row.masked_variance)
        << "\n";
}

// One repetition's working state: paired clean split plus memoized noisy
// accuracy per mask, shared across every bisection probe of a cell.
class RepContext {
 public:
  RepContext(const DikwDataset& dataset, const DikwDataset& train,
             const DikwDataset& holdout, const DpParams& params, double train_fraction,
             std::uint64_t split_seed, std::uint64_t rep_seed, int support_size)
      : dataset_(dataset),
        train_(train),
        holdout_(holdout),
        params_(params),
        train_fraction_(train_fraction),
        split_seed_(split_seed),
        rep_seed_(rep_seed),
        support_size_(support_size) {}

  double accuracy(const MaskPlan& mask) {
    const auto it = accuracy_cache_.find(mask.flags());
    if (it != accuracy_cache_.end()) return it->second;
    const DikwDataset masked =
        apply_dp(train_, mask, params_, derive_seed(rep_seed_, "fitness-noise"));
    const double acc =
        evaluate_utility(masked, holdout_, train_fraction_, split_seed_).accuracy;
    accuracy_cache_.emplace(mask.flags(), acc);
    return acc;
  }

  FitnessFn fitness_with(double lambda_utility, double lambda_coverage) {
    return [this, lambda_utility, lambda_coverage](const MaskPlan& mask) {
      const double cov =
          static_cast<double>(mask.selected_count()) / static_cast<double>(support_size_);
      const double acc = lambda_utility != 0.0 ? accuracy(mask) : 0.0;
      return lambda_utility * acc + lambda_coverage * cov;
    };
  }

  MaskStatFn variance_fn() {
    return [this](const MaskPlan& mask) {
      bool any_numeric = false;
      for (int c = 0; c < dataset_.item_count(); ++c)
        if (mask.selected(c) &&
            dataset_.items[static_cast<std::size_t>(c)].kind == ValueKind::kNumeric)
          any_numeric = true;
      if (!any_numeric) return 1.0;
      const auto it = variance_cache_.find(mask.flags());
      if (it != variance_cache_.end()) return it->second;
      const DikwDataset masked =
          apply_dp(train_, mask, params_, derive_seed(rep_seed_, "fitness-noise"));
      const double ratio = masked_variance_ratio(train_, masked, mask);
      variance_cache_.emplace(mask.flags(), ratio);
      return ratio;
    };
  }

  // Fresh noise, independent of the draws the fitness saw.
  double reported_accuracy(const MaskPlan& mask, std::vector<NoiseReport>* reports) {
    const DikwDataset masked =
        apply_dp(train_, mask, params_, derive_seed(rep_seed_, "apply-noise"), reports);
    return evaluate_utility(masked, holdout_, train_fraction_, split_seed_).accuracy;
  }

 private:
  const DikwDataset& dataset_;
  const DikwDataset& train_;
  const DikwDataset& holdout_;
  DpParams params_;
  double train_fraction_;
  std::uint64_t split_seed_;
  std::uint64_t rep_seed_;
  int support_size_;
  std::map<std::vector<bool>, double> accuracy_cache_;
  std::map<std::vector<bool>, double> variance_cache_;
};

struct ProbeResult {
  MaskPlan mask;
  OptimizationTrace trace;
  int count = 0;
};

constexpr int kMaxBisectionRounds = 12;

// Tunes the coverage weight until the swarm retains the target item count
// (within one item). The bracket extends into negative weights: when the
// accuracy-optimal mask already selects more than the target, selection has
// to be penalized, not rewarded. Every probe reuses one swarm seed so the
// count responds to the weight alone. Returns nullopt when the bracket
// never lands.
std::optional<ProbeResult> bisect_to_target(const DikwDataset& dataset, PrivacyMode mode,
                                            RepContext& rep, const ExperimentConfig& config,
                                            std::uint64_t rep_seed, int target) {
  const std::uint64_t probe_seed = derive_seed(rep_seed, "pso");
  const auto probe = [&](double lambda_coverage) {
    SwarmConfig sc = config.swarm;
    sc.seed = probe_seed;
    OptimizeResult res =
        optimize_mask(dataset, mode,
                      rep.fitness_with(config.weights.lambda_utility, lambda_coverage), sc,
                      rep.variance_fn());
    const int count = res.best_mask.selected_count();
    return ProbeResult{std::move(res.best_mask), std::move(res.trace), count};
  };
  const auto close_enough = [&](int count) { return std::abs(count - target) <= 1; };

  ProbeResult best = probe(config.weights.lambda_privacy_coverage);
  if (close_enough(best.count)) return best;
  const auto keep_best = [&](ProbeResult& candidate) {
    if (std::abs(candidate.count - target) < std::abs(best.count - target))
      best = std::move(candidate);
  };

  double hi = std::max(1.0, 2.0 * std::abs(config.weights.lambda_privacy_coverage));
  double lo = -hi;
  ProbeResult at_hi = probe(hi);
  if (close_enough(at_hi.count)) return at_hi;
  for (int expansions = 0; at_hi.count < target && expansions < 6; ++expansions) {
    hi *= 4.0;
    at_hi = probe(hi);
    if (close_enough(at_hi.count)) return at_hi;
  }
  keep_best(at_hi);
  ProbeResult at_lo = probe(lo);
  if (close_enough(at_lo.count)) return at_lo;
  for (int expansions = 0; at_lo.count > target && expansions < 6; ++expansions) {
    lo *= 4.0;
    at_lo = probe(lo);
    if (close_enough(at_lo.count)) return at_lo;
  }
  keep_best(at_lo);

  for (int round = 0; round < kMaxBisectionRounds; ++round) {
    const double mid = 0.5 * (lo + hi);
    ProbeResult at_mid = probe(mid);
    if (close_enough(at_mid.count)) return at_mid;
    if (at_mid.count < target)
      lo = mid;
    else
      hi = mid;
    keep_best(at_mid);
  }
  if (close_enough(best.count)) return best;
  return std::nullopt;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const DikwDataset dataset = resolve_dataset(config);
  const PrivacyMode mode = resolve_mode(config, dataset);
  const std::vector<int> support = mode_support(dataset, mode);
  if (support.empty())
    throw ValidationError("sweep: mode " + std::string(mode_name(mode)) +
                          " masks nothing on this dataset");
  const int support_size = static_cast<int>(support.size());

  fs::create_directories(config.output_dir);
  fs::create_directories(config.output_dir + "/traces");

  // The baseline and every cell share per-repetition splits, so cell-vs-
  // baseline differences reflect noise, not fold luck.
  std::vector<DikwDataset> trains, holdouts;
  std::vector<std::uint64_t> split_seeds;
  double baseline = 0.0;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t split_seed =
        derive_seed(config.master_seed, "split", static_cast<std::uint64_t>(rep));
    split_seeds.push_back(split_seed);
    const SplitIndices idx =
        stratified_split(dataset, SplitSpec{config.split.train_fraction, split_seed});
    trains.push_back(subset_dataset(dataset, idx.train));
    holdouts.push_back(subset_dataset(dataset, idx.holdout));
    baseline +=
        evaluate_utility(trains.back(), holdouts.back(), config.split.train_fraction,
                         split_seed)
            .accuracy;
  }
  baseline /= static_cast<double>(config.repetitions);

  SweepResult result;
  result.baseline_accuracy = baseline;
  result.mode = mode;

  std::ofstream noise_log(config.output_dir + "/noise_reports.csv");
  noise_log << "epsilon,retained_fraction,item_id,draw_count,empirical_mean,empirical_variance\n";

  for (std::size_t ei = 0; ei < config.epsilon_grid.size(); ++ei) {
    const double epsilon = config.epsilon_grid[ei];
    DpParams cell_params = config.dp;
    cell_params.epsilon = epsilon;
    for (std::size_t fi = 0; fi < config.fraction_targets.size(); ++fi) {
      const double fraction = config.fraction_targets[fi];
      const bool full_mask = fraction >= 1.0 - 1e-12;
      const int target =
          static_cast<int>(std::llround(fraction * static_cast<double>(support_size)));

      SweepRow row;
      row.epsilon = epsilon;
      row.retained_fraction = fraction;
      row.repetitions = config.repetitions;
      row.seed = config.master_seed;

      std::vector<double> accuracies;
      for (int rep = 0; rep < config.repetitions; ++rep) {
        const std::uint64_t rep_seed = hash_combine(
            hash_combine(hash_combine(config.master_seed, static_cast<std::uint64_t>(ei)),
                         static_cast<std::uint64_t>(fi)),
            static_cast<std::uint64_t>(rep));
        RepContext context(dataset, trains[static_cast<std::size_t>(rep)],
                           holdouts[static_cast<std::size_t>(rep)], cell_params,
                           config.split.train_fraction,
                           split_seeds[static_cast<std::size_t>(rep)], rep_seed,
                           support_size);
        MaskPlan mask;
        if (full_mask) {
          mask = mode_mask(dataset, mode);
        } else {
          auto probe =
              bisect_to_target(dataset, mode, context, config, rep_seed, target);
          if (!probe) {
            row.present = false;
            row.note = "no coverage weight reached " + fmt_int(target) + " of " +
                       fmt_int(support_size) + " items";
            break;
          }
          mask = std::move(probe->mask);
          write_trace(config.output_dir + "/traces/trace_e" + fmt_int(ei) + "_f" +
                          fmt_int(fi) + "_r" + fmt_int(rep) + ".csv",
                      probe->trace);
        }
        std::vector<NoiseReport> reports;
        accuracies.push_back(
            context.reported_accuracy(mask, rep == 0 ? &reports : nullptr));
        for (const auto& nr : reports)
          noise_log << fmt_double(epsilon) << "," << fmt_double(fraction) << ","
                    << nr.item_id << "," << nr.draw_count << ","
                    << fmt_double(nr.empirical_mean) << ","
                    << fmt_double(nr.empirical_variance) << "\n";
      }
      if (row.present) {
        double mean = 0.0;
        for (const double a : accuracies) mean += a;
        row.mean_accuracy = mean / static_cast<double>(accuracies.size());
        row.accuracy_stddev = sample_stddev(accuracies);
      }
      result.rows.push_back(std::move(row));
    }
  }

  {
    std::ofstream out(config.output_dir + "/config_resolved.kv");
    save_experiment_config(out, config);
  }
  {
    std::ofstream out(config.output_dir + "/run_manifest.kv");
    KvFile manifest;
    KvBlock run{"run", "", {}, 0};
    run.entries = {
        {"tool_version", kVersion},
        {"master_seed", fmt_int(static_cast<std::int64_t>(config.master_seed))},
        {"mode", std::string(mode_name(mode))},
        {"baseline_accuracy", fmt_double(baseline)},
        {"budget_accounting",
         "per-item parallel composition across disjoint columns; total = epsilon"},
    };
    for (const auto& row : result.rows)
      if (!row.present)
        run.entries.emplace_back("absent_cell",
                                 "epsilon=" + fmt_double(row.epsilon) + " fraction=" +
                                     fmt_double(row.retained_fraction) + ": " + row.note);
    manifest.blocks.push_back(run);
    write_kv(out, manifest);
  }
  emit_curves(result, config.output_dir);
  return result;
}

std::vector<VerifyReportRow> run_verify(const ExperimentConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);
  std::vector<VerifyReportRow> rows;
  std::size_t case_index = 0;
  for (const VerifyCase& vc : config.verify.cases) {
    const std::uint64_t seed =
        derive_seed(config.master_seed, "verify", static_cast<std::uint64_t>(case_index++));
    VerifyReportRow row;
    row.actual_epsilon = vc.actual_epsilon;
    row.claimed_epsilon = vc.claimed_epsilon;
    VerifyResult res;
    if (vc.mechanism == Mechanism::kLaplace) {
      row.name = "laplace_actual_" + fmt_double(vc.actual_epsilon) + "_claimed_" +
                 fmt_double(vc.claimed_epsilon);
      const double sensitivity = config.verify.sensitivity;
      const double actual = vc.actual_epsilon;
      const NumericMechanism mech = [sensitivity, actual](double value, Rng& rng) {
        return laplace_noise(value, sensitivity, actual, rng);
      };
      res = verify_epsilon_numeric(mech, 0.0, sensitivity, vc.claimed_epsilon,
                                   config.verify.draw_count, config.verify.bin_count,
                                   seed);
    } else {
      row.name = "randomized_response_actual_" + fmt_double(vc.actual_epsilon) +
                 "_claimed_" + fmt_double(vc.claimed_epsilon);
      const int labels = vc.label_count;
      const double actual = vc.actual_epsilon;
      const CategoricalMechanism mech = [labels, actual](int label, Rng& rng) {
        return randomized_response(label, labels, actual, rng);
      };
      res = verify_epsilon_categorical(mech, 0, 1, labels, vc.claimed_epsilon,
                                       config.verify.draw_count, seed);
    }
    row.empirical_epsilon = res.empirical_epsilon;
    row.slack = res.slack;
    row.conclusive = res.conclusive;
    row.passed = res.conclusive && !res.violates;
    rows.push_back(std::move(row));
  }

  std::ofstream out(config.output_dir + "/verify_report.csv");
  out << "case,actual_epsilon,claimed_epsilon,empirical_epsilon,slack,conclusive,result\n";
  for (const auto& row : rows)
    out << row.name << "," << fmt_double(row.actual_epsilon) << ","
        << fmt_double(row.claimed_epsilon) << "," << fmt_double(row.empirical_epsilon)
        << "," << fmt_double(row.slack) << "," << (row.conclusive ? "yes" : "no") << ","
        << (!row.conclusive ? "inconclusive" : (row.passed ? "pass" : "fail")) << "\n";
  return rows;
}

void emit_curves(const SweepResult& result, const std::string& output_dir) {
  if (result.rows.empty()) throw ValidationError("emit_curves: empty result");
  fs::create_directories(output_dir);

  std::map<double, std::vector<const SweepRow*>> by_fraction;
  for (const auto& row : result.rows)
    if (row.present) by_fraction[row.retained_fraction].push_back(&row);

  for (auto& [fraction, rows] : by_fraction) {
    std::sort(rows.begin(), rows.end(),
              [](const SweepRow* a, const SweepRow* b) { return a->epsilon < b->epsilon; });
    std::ofstream out(output_dir + "/curve_fraction_" + fmt_double(fraction) + ".csv");
    out << "epsilon,mean_accuracy,accuracy_stddev\n";
    for (const SweepRow* row : rows)
      out << fmt_double(row->epsilon) << "," << fmt_double(row->mean_accuracy) << ","
          << fmt_double(row->accuracy_stddev) << "\n";
  }

  std::ofstream out(output_dir + "/sweep_result.csv");
  out << "epsilon,retained_fraction,mean_accuracy,accuracy_stddev,repetitions,seed\n";
  for (const auto& [fraction, rows] : by_fraction) {
    for (const SweepRow* row : rows)
      out << fmt_double(row->epsilon) << "," << fmt_double(row->retained_fraction) << ","
          << fmt_double(row->mean_accuracy) << "," << fmt_double(row->accuracy_stddev)
          << "," << row->repetitions << ","
          << fmt_int(static_cast<std::int64_t>(row->seed)) << "\n";
  }
}

}  // namespace swarmdp
