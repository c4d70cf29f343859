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
//
// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the binary exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "swarmdp/bench.hpp"
#include "swarmdp/dikw.hpp"
#include "swarmdp/dp.hpp"
#include "swarmdp/generate.hpp"
#include "swarmdp/random.hpp"
#include "swarmdp/swarm.hpp"
#include "swarmdp/text.hpp"
#include "swarmdp/utility.hpp"

namespace fs = std::filesystem;
using namespace swarmdp;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const std::string& line) { notes.push_back(line); }

void criterion(int number, const std::string& name, const std::function<bool()>& body) {
  notes.clear();
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream line;
  line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << name << " ("
       << fmt_double(std::round(seconds * 1000.0) / 1000.0) << "s)";
  std::cout << line.str() << "\n";
  for (const auto& n : notes) std::cout << "       " << n << "\n";
  if (!error.empty()) std::cout << "       exception: " << error << "\n";
  if (!ok) ++failures;
}

GenSpec data_spec() {
  GenSpec spec = default_gen_spec();
  spec.source_file = std::string(SWARMDP_DATA_DIR) + "/iris.csv";
  return spec;
}

// --- criterion 1 -----------------------------------------------------------

bool mode_table_and_identities() {
  const Category categories[7] = {Category::kWho,   Category::kWhat, Category::kWhen,
                                  Category::kWhere, Category::kWhy,  Category::kHow,
                                  Category::kPurposeTag};
  const std::map<PrivacyMode, std::set<Category>> table = {
      {PrivacyMode::kDdp, {Category::kWho, Category::kWhen, Category::kWhere}},
      {PrivacyMode::kIdp, {Category::kWhat}},
      {PrivacyMode::kKdp, {Category::kHow}},
      {PrivacyMode::kDidp,
       {Category::kWho, Category::kWhen, Category::kWhere, Category::kWhat}},
      {PrivacyMode::kIkdp, {Category::kHow, Category::kWhat}},
      {PrivacyMode::kDikdp,
       {Category::kWho, Category::kWhat, Category::kWhen, Category::kWhere, Category::kWhy,
        Category::kHow}},
      {PrivacyMode::kPdp, {}},  // incidence-based; empty without edges
  };

  DikwDataset ds;
  for (const Category c : categories) {
    DikwItem item;
    item.id = std::string(category_name(c)) + "_item";
    item.name = item.id;
    item.modal = Modal::kData;
    item.category = c;
    item.kind = ValueKind::kNumeric;
    ds.items.push_back(item);
  }
  ds.records.resize(2, 7);
  ds.records << 1, 2, 3, 4, 5, 6, 7, 2, 3, 4, 5, 6, 7, 8;

  int checked = 0;
  for (const auto& [mode, selected_set] : table) {
    const MaskPlan mask = mode_mask(ds, mode);
    for (int i = 0; i < ds.item_count(); ++i) {
      const Category c = ds.items[static_cast<std::size_t>(i)].category;
      if (mask.selected(i) != (selected_set.count(c) > 0)) {
        note(std::string("mismatch at ") + std::string(mode_name(mode)) + " x " +
             std::string(category_name(c)));
        return false;
      }
      ++checked;
    }
  }
  if (checked != 49) return false;

  const DikwDataset iris = generate_iris_dikw(data_spec());
  const MaskPlan ddp = mode_mask(iris, PrivacyMode::kDdp);
  const MaskPlan idp = mode_mask(iris, PrivacyMode::kIdp);
  const MaskPlan kdp = mode_mask(iris, PrivacyMode::kKdp);
  const MaskPlan didp = mode_mask(iris, PrivacyMode::kDidp);
  const MaskPlan ikdp = mode_mask(iris, PrivacyMode::kIkdp);
  for (int i = 0; i < iris.item_count(); ++i) {
    if (didp.selected(i) != (ddp.selected(i) || idp.selected(i))) return false;
    if (ikdp.selected(i) != (idp.selected(i) || kdp.selected(i))) return false;
  }
  note("49 mode/category cases and both union identities hold");
  return true;
}

// --- criterion 2 -----------------------------------------------------------

bool laplace_moments() {
  const int n = 100000;
  Rng rng(4242);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double noise = laplace_noise(0.0, 1.0, 1.0, rng);
    sum += noise;
    sum_sq += noise * noise;
  }
  const double mean = sum / n;
  const double variance = (sum_sq - n * mean * mean) / (n - 1);
  const double mean_tolerance = 3.0 * std::sqrt(2.0 / n);  // 3 standard errors
  note("mean " + fmt_double(mean) + " (|.| <= " + fmt_double(mean_tolerance) +
       "), variance " + fmt_double(variance) + " (2.0 +/- 5%)");
  return std::abs(mean) <= mean_tolerance && std::abs(variance - 2.0) <= 0.05 * 2.0;
}

// --- criterion 3 -----------------------------------------------------------

bool empirical_epsilon_verifier() {
  const double ln3 = std::log(3.0);
  const CategoricalMechanism rr = [ln3](int label, Rng& rng) {
    return randomized_response(label, 2, ln3, rng);
  };
  const VerifyResult honest = verify_epsilon_categorical(rr, 0, 1, 2, ln3, 100000, 20260);
  note("randomized response: empirical " + fmt_double(honest.empirical_epsilon) +
       " vs ln 3 = " + fmt_double(ln3));
  if (!honest.conclusive || std::abs(honest.empirical_epsilon - ln3) > 0.05) return false;
  if (honest.violates) return false;

  // Spends epsilon 1 but claims 0.5: the audit must fail it.
  const NumericMechanism misdeclared = [](double value, Rng& rng) {
    return laplace_noise(value, 1.0, 1.0, rng);
  };
  const VerifyResult audit = verify_epsilon_numeric(misdeclared, 0.0, 1.0, 0.5, 100000, 40, 20261);
  note("misdeclared laplace: empirical " + fmt_double(audit.empirical_epsilon) +
       ", claimed 0.5, violation " + (audit.violates ? "detected" : "missed"));
  return audit.conclusive && audit.violates;
}

// --- criterion 4 -----------------------------------------------------------

bool sign_closure_and_determinism() {
  SwarmConfig config;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng setup(derive_seed(seed, "case"));
    const auto n = static_cast<Eigen::Index>(1 + setup.uniform_int(24));
    Particle start;
    start.position = Eigen::ArrayXi(n);
    start.sign_velocity = Eigen::ArrayXi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      start.position[i] = setup.sign();
      start.sign_velocity[i] = setup.sign();
    }
    start.real_velocity = Eigen::ArrayXd::Zero(n);
    start.best_position = start.position;
    Eigen::ArrayXi local(n), global(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      local[i] = setup.sign();
      global[i] = setup.sign();
    }

    Particle a = start, b = start;
    Rng rng_a(seed), rng_b(seed);
    for (int t = 0; t < 8; ++t) {
      a = binary_pso_step(a, local, global, config, rng_a);
      b = binary_pso_step(b, local, global, config, rng_b);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (a.position[i] != 1 && a.position[i] != -1) return false;
        if (a.sign_velocity[i] != 1 && a.sign_velocity[i] != -1) return false;
      }
      if (!(a.position == b.position).all()) return false;
      if (!(a.sign_velocity == b.sign_velocity).all()) return false;
      if (!(a.real_velocity == b.real_velocity).all()) return false;
    }
  }
  note("1000 seeded runs, 8 steps each: closure and bit-identical repeats");
  return true;
}

// --- criterion 5 (feeds criterion 6) ----------------------------------------

std::vector<OptimizationTrace> collected_traces;

bool brute_force_equivalence() {
  // Ten eligible items; the fitness is a seeded additive weight sum shifted
  // to stay positive, so the exhaustive 2^10 sweep is a clean oracle.
  std::vector<DikwItem> items;
  for (int i = 0; i < 10; ++i) {
    DikwItem item;
    item.id = "w" + std::to_string(i);
    item.name = item.id;
    item.modal = Modal::kInformation;
    item.category = Category::kWhat;
    item.kind = ValueKind::kNumeric;
    items.push_back(item);
  }
  DikwDataset ds;
  ds.items = std::move(items);
  ds.records.resize(2, 10);
  for (int c = 0; c < 10; ++c) {
    ds.records(0, c) = c;
    ds.records(1, c) = c + 1;
  }

  int exact = 0;
  collected_traces.clear();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng wrng(derive_seed(seed, "weights"));
    std::vector<double> weights(10);
    double base = 0.0;
    for (auto& w : weights) {
      w = wrng.uniform(-1.0, 1.0);
      base += std::abs(w);
    }
    const auto fitness_fn = [&](const MaskPlan& mask) {
      double f = base;
      for (int i = 0; i < 10; ++i)
        if (mask.selected(i)) f += weights[static_cast<std::size_t>(i)];
      return f;
    };

    double best_exhaustive = -1.0;
    for (int bits = 0; bits < 1024; ++bits) {
      std::vector<bool> sel(10);
      for (int k = 0; k < 10; ++k) sel[static_cast<std::size_t>(k)] = (bits >> k) & 1;
      best_exhaustive = std::max(best_exhaustive, fitness_fn(MaskPlan(ds, sel)));
    }

    SwarmConfig config;
    config.particle_count = 16;
    config.max_iterations = 40;
    config.seed = seed;
    const OptimizeResult res =
        optimize_mask(ds, PrivacyMode::kIdp, fitness_fn, config);
    collected_traces.push_back(res.trace);

    if (res.best_fitness < 0.95 * best_exhaustive) {
      note("seed " + fmt_int(static_cast<std::int64_t>(seed)) + ": " +
           fmt_double(res.best_fitness) + " < 95% of " + fmt_double(best_exhaustive));
      return false;
    }
    if (res.best_fitness >= best_exhaustive - 1e-12) ++exact;
  }
  note("all 20 seeds >= 95% of the exhaustive optimum; exact in " + fmt_int(exact) +
       "/20");
  return exact >= 16;  // >= 80% of 20 seeds
}

// --- criterion 6 -----------------------------------------------------------

bool trace_monotonicity(const std::string& sweep_trace_dir) {
  int traces_checked = 0;
  const auto check = [&](const OptimizationTrace& trace) {
    for (std::size_t i = 1; i < trace.rows.size(); ++i)
      if (trace.rows[i].global_best_fitness < trace.rows[i - 1].global_best_fitness)
        return false;
    ++traces_checked;
    return true;
  };
  for (const auto& trace : collected_traces)
    if (!check(trace)) return false;

  // Traces written by the sweep (criterion 7) must be monotone too.
  if (fs::exists(sweep_trace_dir)) {
    for (const auto& entry : fs::directory_iterator(sweep_trace_dir)) {
      std::ifstream in(entry.path());
      std::string line;
      std::getline(in, line);  // header
      double previous = -1e300;
      while (std::getline(in, line)) {
        const auto fields = split(trim(line), ',');
        if (fields.size() != 4) return false;
        const double fitness_value = parse_double(fields[1], "trace fitness");
        if (fitness_value < previous) {
          note("regression inside " + entry.path().string());
          return false;
        }
        previous = fitness_value;
      }
      ++traces_checked;
    }
  }
  note(fmt_int(traces_checked) + " traces checked, all non-decreasing");
  return traces_checked > 0;
}

// --- criterion 7 -----------------------------------------------------------

SweepResult sweep_result;

bool case_study_sweep(const std::string& out_dir) {
  ExperimentConfig config = default_experiment_config();
  config.source.gen = data_spec();
  config.output_dir = out_dir;
  fs::remove_all(out_dir);
  sweep_result = run_sweep(config);

  std::map<double, std::vector<const SweepRow*>> curves;
  for (const auto& row : sweep_result.rows) {
    if (!row.present) {
      note("absent cell at epsilon " + fmt_double(row.epsilon) + ", fraction " +
           fmt_double(row.retained_fraction));
      return false;
    }
    curves[row.retained_fraction].push_back(&row);
  }
  for (auto& [fraction, rows] : curves)
    std::sort(rows.begin(), rows.end(),
              [](const SweepRow* a, const SweepRow* b) { return a->epsilon < b->epsilon; });

  const double baseline = sweep_result.baseline_accuracy;
  note("baseline accuracy " + fmt_double(baseline));
  bool ok = true;

  // (a) per fraction: accuracy non-decreasing in epsilon, allowing at most
  // one inversion and only within one standard deviation.
  for (const auto& [fraction, rows] : curves) {
    int inversions = 0;
    bool within = true;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (rows[k]->mean_accuracy < rows[k - 1]->mean_accuracy) {
        ++inversions;
        const double depth = rows[k - 1]->mean_accuracy - rows[k]->mean_accuracy;
        const double sd = std::max(rows[k - 1]->accuracy_stddev, rows[k]->accuracy_stddev);
        if (depth > sd) within = false;
      }
    }
    const bool curve_ok = inversions <= 1 && within;
    note("(a) fraction " + fmt_double(fraction) + ": " + fmt_int(inversions) +
         " inversion(s)" + (curve_ok ? "" : " beyond 1 stddev") +
         (curve_ok ? " - ok" : " - FAIL"));
    ok = ok && curve_ok;
  }

  // (b) the swarm-selected half mask never trails the full mask by more than
  // one standard deviation.
  for (std::size_t k = 0; k < curves.at(1.0).size(); ++k) {
    const SweepRow* half = curves.at(0.5)[k];
    const SweepRow* full = curves.at(1.0)[k];
    const bool cell_ok =
        half->mean_accuracy >= full->mean_accuracy - full->accuracy_stddev;
    if (!cell_ok) {
      note("(b) epsilon " + fmt_double(full->epsilon) + ": half " +
           fmt_double(half->mean_accuracy) + " < full " + fmt_double(full->mean_accuracy) +
           " - " + fmt_double(full->accuracy_stddev) + " - FAIL");
      ok = false;
    }
  }
  if (ok) note("(b) 50% curve never trails the 100% curve beyond 1 stddev");

  // (c) at the largest epsilon every curve sits within 0.02 of the baseline.
  for (const auto& [fraction, rows] : curves) {
    const SweepRow* last = rows.back();
    const double gap = std::abs(last->mean_accuracy - baseline);
    const bool cell_ok = gap <= 0.02;
    note("(c) fraction " + fmt_double(fraction) + " at epsilon " +
         fmt_double(last->epsilon) + ": accuracy " + fmt_double(last->mean_accuracy) +
         ", |gap| " + fmt_double(gap) + (cell_ok ? " - ok" : " - FAIL"));
    ok = ok && cell_ok;
  }
  return ok;
}

// --- criterion 8 -----------------------------------------------------------

bool decide_mode_fixtures() {
  const auto fixture = [](const std::vector<double>& d, const std::vector<double>& i,
                          const std::vector<double>& k) {
    DikwDataset ds;
    DikwItem d1, i1, k1;
    d1.id = "d1";
    d1.name = "d1";
    d1.modal = Modal::kData;
    d1.category = Category::kWho;
    i1.id = "i1";
    i1.name = "i1";
    i1.modal = Modal::kInformation;
    i1.category = Category::kWhat;
    k1.id = "k1";
    k1.name = "k1";
    k1.modal = Modal::kKnowledge;
    k1.category = Category::kHow;
    ds.items = {d1, i1, k1};
    ds.records.resize(static_cast<Eigen::Index>(d.size()), 3);
    for (std::size_t r = 0; r < d.size(); ++r) {
      ds.records(static_cast<Eigen::Index>(r), 0) = d[r];
      ds.records(static_cast<Eigen::Index>(r), 1) = i[r];
      ds.records(static_cast<Eigen::Index>(r), 2) = k[r];
    }
    return ds;
  };

  const DikwDataset independent = fixture({1, 2, 3, 4}, {1, -1, -1, 1}, {1, -1, 1, -1});
  const PrivacyMode independent_mode =
      decide_mode(independent, MaskPlan(independent, {true, false, false}), 0.5);
  note(std::string("independent columns -> ") + std::string(mode_name(independent_mode)));
  if (independent_mode != PrivacyMode::kDdp) return false;

  const DikwDataset linear = fixture({1, 2, 3, 4}, {2, 4, 6, 8}, {1, -1, -1, 1});
  const PrivacyMode linear_mode =
      decide_mode(linear, MaskPlan(linear, {true, false, false}), 0.5);
  note(std::string("exact-linear information -> ") + std::string(mode_name(linear_mode)));
  if (linear_mode != PrivacyMode::kDidp && linear_mode != PrivacyMode::kDikdp) return false;

  const DikwDataset chain = fixture({1, 2, 3, 4}, {2, 4, 6, 8}, {-6, -12, -18, -24});
  const PrivacyMode chain_mode = decide_mode(chain, MaskPlan(chain, {true, false, false}), 0.5);
  note(std::string("full chain -> ") + std::string(mode_name(chain_mode)));
  return chain_mode == PrivacyMode::kDikdp;
}

// --- criterion 9 -----------------------------------------------------------

bool spatiotemporal_reduction() {
  DikwDataset ds = generate_iris_dikw(data_spec());
  const auto support = mode_support(ds, PrivacyMode::kDikdp);
  const StContext zero(ds, support, StWeights{0.0, 0.0});
  SwarmConfig config;
  config.neighborhood_radius = 1;

  Rng rng(909);
  for (int trial = 0; trial < 100; ++trial) {
    const int count = 2 + static_cast<int>(rng.uniform_int(6));
    std::vector<Particle> swarm(static_cast<std::size_t>(count));
    for (auto& p : swarm) {
      p.position = Eigen::ArrayXi(static_cast<Eigen::Index>(support.size()));
      for (Eigen::Index i = 0; i < p.position.size(); ++i) p.position[i] = rng.sign();
      p.sign_velocity = Eigen::ArrayXi::Constant(p.position.size(), 1);
      p.real_velocity = Eigen::ArrayXd::Zero(p.position.size());
      p.best_position = p.position;
      p.best_fitness = rng.uniform(0.0, 1.0);
    }
    for (int i = 0; i < count; ++i) {
      const auto [local, global] = spatiotemporal_bests(swarm, i, zero, config);
      if (!(local == plain_local_best(swarm, i, config.neighborhood_radius)).all())
        return false;
      if (!(global == plain_global_best(swarm)).all()) return false;
    }
  }
  note("100 random swarms: zero-weight bests identical to plain bests");
  return true;
}

}  // namespace

int main() {
  const std::string out_dir = "acceptance_out";

  criterion(1, "mode-mask table and set identities", mode_table_and_identities);
  criterion(2, "laplace mechanism moments at 1e5 draws", laplace_moments);
  criterion(3, "empirical epsilon verification", empirical_epsilon_verifier);
  criterion(4, "sign closure and determinism over 1000 seeds",
            sign_closure_and_determinism);
  criterion(5, "brute-force equivalence on 10-item supports", brute_force_equivalence);
  criterion(7, "case-study sweep reproduction",
            [&] { return case_study_sweep(out_dir + "/sweep"); });
  criterion(6, "global-best monotonicity across all collected traces",
            [&] { return trace_monotonicity(out_dir + "/sweep/traces"); });
  criterion(8, "mode decision on constructed fixtures", decide_mode_fixtures);
  criterion(9, "spatial-temporal zero-weight reduction", spatiotemporal_reduction);

  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
