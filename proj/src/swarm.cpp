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

#include "swarmdp/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "swarmdp/errors.hpp"
#include "swarmdp/text.hpp"

namespace swarmdp {

namespace {

void check_sign_vector(const Eigen::ArrayXi& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] != 1 && v[i] != -1)
      throw ValidationError(std::string(what) + ": entry " + fmt_int(i) +
                            " is " + fmt_int(v[i]) + ", want -1 or +1");
}

}  // namespace

void SwarmConfig::validate() const {
  if (particle_count < 2) throw ValidationError("swarm: particle_count must be >= 2");
  if (c1 < 0 || c2 < 0) throw ValidationError("swarm: c1 and c2 must be non-negative");
  if (max_iterations < 1) throw ValidationError("swarm: max_iterations must be >= 1");
  if (neighborhood_radius < 0)
    throw ValidationError("swarm: neighborhood_radius must be >= 0");
  if (!(variance_blowup_factor > 1.0))
    throw ValidationError("swarm: variance_blowup_factor must be > 1");
  if (st_weights && (st_weights->alpha_spatial < 0 || st_weights->alpha_temporal < 0))
    throw ValidationError("swarm: spatial-temporal weights must be non-negative");
}

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> continuous_pso_step(
    const Eigen::ArrayXd& position, const Eigen::ArrayXd& velocity,
    const Eigen::ArrayXd& personal_best, const Eigen::ArrayXd& global_best,
    const SwarmConfig& config, Rng& rng) {
  const Eigen::Index n = position.size();
  if (velocity.size() != n || personal_best.size() != n || global_best.size() != n)
    throw ValidationError("continuous_pso_step: vector length mismatch");
  Eigen::ArrayXd new_velocity(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r1 = rng.next_double();
    const double r2 = rng.next_double();
    new_velocity[i] = velocity[i] + config.c1 * r1 * (personal_best[i] - position[i]) +
                      config.c2 * r2 * (global_best[i] - position[i]);
  }
  return {position + new_velocity, std::move(new_velocity)};
}

Particle binary_pso_step(const Particle& particle, const Eigen::ArrayXi& local_best,
                         const Eigen::ArrayXi& global_best, const SwarmConfig& config,
                         Rng& rng) {
  const Eigen::Index n = particle.position.size();
  if (particle.sign_velocity.size() != n || particle.real_velocity.size() != n ||
      local_best.size() != n || global_best.size() != n)
    throw ValidationError("binary_pso_step: vector length mismatch");
  check_sign_vector(particle.position, "binary_pso_step: position");
  check_sign_vector(particle.sign_velocity, "binary_pso_step: sign_velocity");
  check_sign_vector(local_best, "binary_pso_step: local_best");
  check_sign_vector(global_best, "binary_pso_step: global_best");

  Particle out = particle;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r1 = rng.next_double();
    const double r2 = rng.next_double();
    const double x = static_cast<double>(particle.position[i]);
    const double vpp = particle.real_velocity[i] +
                       config.c1 * r1 * (static_cast<double>(local_best[i]) - x) +
                       config.c2 * r2 * (static_cast<double>(global_best[i]) - x);
    const int vp = vpp < 0.0 ? -1 : 1;  // v'' = 0 keeps v' = +1
    const int sv = vp * particle.position[i];
    out.real_velocity[i] = vpp;
    out.sign_velocity[i] = sv;
    out.position[i] = particle.position[i] * sv;
  }
  return out;
}

std::vector<int> ring_neighborhood(int index, int radius, int particle_count) {
  std::vector<int> out;
  std::vector<bool> seen(static_cast<std::size_t>(particle_count), false);
  for (int off = -radius; off <= radius; ++off) {
    int j = (index + off) % particle_count;
    if (j < 0) j += particle_count;
    if (!seen[static_cast<std::size_t>(j)]) {
      seen[static_cast<std::size_t>(j)] = true;
      out.push_back(j);
    }
  }
  return out;
}

Eigen::ArrayXi plain_local_best(const std::vector<Particle>& swarm, int index,
                                int radius) {
  const auto hood = ring_neighborhood(index, radius, static_cast<int>(swarm.size()));
  const Particle* best = &swarm[static_cast<std::size_t>(hood.front())];
  for (const int j : hood) {
    const Particle& p = swarm[static_cast<std::size_t>(j)];
    if (p.best_fitness > best->best_fitness) best = &p;
  }
  return best->best_position;
}

Eigen::ArrayXi plain_global_best(const std::vector<Particle>& swarm) {
  const Particle* best = &swarm.front();
  for (const Particle& p : swarm)
    if (p.best_fitness > best->best_fitness) best = &p;
  return best->best_position;
}

StContext::StContext(const DikwDataset& dataset, const std::vector<int>& support_items,
                     const StWeights& weights)
    : weights_(weights) {
  const std::size_t n = support_items.size();
  norm_distance_.assign(n, std::numeric_limits<double>::quiet_NaN());
  norm_age_.assign(n, std::numeric_limits<double>::quiet_NaN());
  if (!active()) return;

  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  int with_spatial = 0;
  std::int64_t t_min = 0, t_max = 0;
  int with_time = 0;
  for (const int idx : support_items) {
    const auto& item = dataset.items[static_cast<std::size_t>(idx)];
    if (item.spatial) {
      centroid += *item.spatial;
      ++with_spatial;
    }
    if (item.timestamp) {
      if (with_time == 0) {
        t_min = t_max = *item.timestamp;
      } else {
        t_min = std::min(t_min, *item.timestamp);
        t_max = std::max(t_max, *item.timestamp);
      }
      ++with_time;
    }
  }
  if (weights_.alpha_spatial > 0 && with_spatial == 0)
    throw ValidationError("spatial weighting requested but no item has coordinates");
  if (weights_.alpha_temporal > 0 && with_time == 0)
    throw ValidationError("temporal weighting requested but no item has a timestamp");

  double dist_scale = 0.0;
  if (with_spatial > 0) {
    centroid /= static_cast<double>(with_spatial);
    for (const int idx : support_items) {
      const auto& item = dataset.items[static_cast<std::size_t>(idx)];
      if (item.spatial) dist_scale = std::max(dist_scale, (*item.spatial - centroid).norm());
    }
  }
  const double time_span = static_cast<double>(t_max - t_min);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& item = dataset.items[static_cast<std::size_t>(support_items[k])];
    if (item.spatial)
      norm_distance_[k] =
          dist_scale > 0 ? (*item.spatial - centroid).norm() / dist_scale : 0.0;
    if (item.timestamp)
      norm_age_[k] = time_span > 0
                         ? static_cast<double>(t_max - *item.timestamp) / time_span
                         : 0.0;
  }
}

double StContext::weight(const Eigen::ArrayXi& position) const {
  if (!active()) return 1.0;
  double dist_sum = 0.0, age_sum = 0.0;
  int dist_n = 0, age_n = 0;
  for (Eigen::Index i = 0; i < position.size(); ++i) {
    if (position[i] != 1) continue;
    const auto k = static_cast<std::size_t>(i);
    if (k < norm_distance_.size() && !std::isnan(norm_distance_[k])) {
      dist_sum += norm_distance_[k];
      ++dist_n;
    }
    if (k < norm_age_.size() && !std::isnan(norm_age_[k])) {
      age_sum += norm_age_[k];
      ++age_n;
    }
  }
  const double dist = dist_n > 0 ? dist_sum / dist_n : 0.0;
  const double age = age_n > 0 ? age_sum / age_n : 0.0;
  return 1.0 / (1.0 + weights_.alpha_spatial * dist + weights_.alpha_temporal * age);
}

std::pair<Eigen::ArrayXi, Eigen::ArrayXi> spatiotemporal_bests(
    const std::vector<Particle>& swarm, int particle_index, const StContext& context,
    const SwarmConfig& config) {
  const auto score = [&](const Particle& p) {
    return p.best_fitness * context.weight(p.best_position);
  };
  const auto hood =
      ring_neighborhood(particle_index, config.neighborhood_radius,
                        static_cast<int>(swarm.size()));
  const Particle* local = &swarm[static_cast<std::size_t>(hood.front())];
  double local_score = score(*local);
  for (const int j : hood) {
    const Particle& p = swarm[static_cast<std::size_t>(j)];
    const double s = score(p);
    if (s > local_score) {
      local = &p;
      local_score = s;
    }
  }
  const Particle* global = &swarm.front();
  double global_score = score(*global);
  for (const Particle& p : swarm) {
    const double s = score(p);
    if (s > global_score) {
      global = &p;
      global_score = s;
    }
  }
  return {local->best_position, global->best_position};
}

std::vector<int> mode_support(const DikwDataset& dataset, PrivacyMode mode) {
  const MaskPlan plan = mode_mask(dataset, mode);
  std::vector<int> out;
  for (int i = 0; i < plan.size(); ++i)
    if (plan.selected(i)) out.push_back(i);
  return out;
}

MaskPlan mask_from_support_position(const DikwDataset& dataset,
                                    const std::vector<int>& support,
                                    const Eigen::ArrayXi& position) {
  if (static_cast<std::size_t>(position.size()) != support.size())
    throw ValidationError("mask_from_support_position: length mismatch");
  std::vector<bool> sel(static_cast<std::size_t>(dataset.item_count()), false);
  for (std::size_t k = 0; k < support.size(); ++k)
    sel[static_cast<std::size_t>(support[k])] = position[static_cast<Eigen::Index>(k)] == 1;
  return MaskPlan(dataset, std::move(sel));
}

bool converged(const OptimizationTrace& trace, const SwarmConfig& config) {
  if (trace.rows.size() < 2) return false;
  const TraceRow& last = trace.rows.back();
  const TraceRow& prev = trace.rows[trace.rows.size() - 2];
  return last.retained_fraction < prev.retained_fraction &&
         last.masked_variance > config.variance_blowup_factor * prev.masked_variance;
}

OptimizeResult optimize_mask(const DikwDataset& dataset, PrivacyMode mode,
                             const FitnessFn& fitness, const SwarmConfig& config,
                             const MaskStatFn& masked_variance) {
  config.validate();
  const std::vector<int> support = mode_support(dataset, mode);
  if (support.empty())
    throw ValidationError("optimize_mask: mode " + std::string(mode_name(mode)) +
                          " masks nothing on this dataset");
  const auto n = static_cast<Eigen::Index>(support.size());

  StContext st_context;
  if (config.st_weights)
    st_context = StContext(dataset, support, *config.st_weights);

  Rng init_rng(derive_seed(config.seed, "init"));
  std::vector<Particle> swarm(static_cast<std::size_t>(config.particle_count));
  for (auto& p : swarm) {
    p.position = Eigen::ArrayXi(n);
    for (Eigen::Index i = 0; i < n; ++i) p.position[i] = init_rng.sign();
    p.sign_velocity = Eigen::ArrayXi::Constant(n, 1);
    p.real_velocity = Eigen::ArrayXd::Zero(n);
    p.best_position = p.position;
    p.best_fitness = fitness(mask_from_support_position(dataset, support, p.position));
  }

  OptimizeResult result;
  OptimizationTrace& trace = result.trace;
  const auto record = [&](int iteration) {
    const Eigen::ArrayXi best = plain_global_best(swarm);
    TraceRow row;
    row.iteration = iteration;
    double best_fitness = swarm.front().best_fitness;
    for (const auto& p : swarm) best_fitness = std::max(best_fitness, p.best_fitness);
    row.global_best_fitness = best_fitness;
    row.retained_fraction =
        static_cast<double>((best == 1).count()) / static_cast<double>(n);
    row.masked_variance =
        masked_variance ? masked_variance(mask_from_support_position(dataset, support, best))
                        : 1.0;
    trace.rows.push_back(row);
  };
  record(0);

  Rng step_rng(derive_seed(config.seed, "steps"));
  for (int t = 1; t <= config.max_iterations; ++t) {
    // Bests are resolved for every particle before any particle moves, so
    // the iteration is independent of update order.
    std::vector<std::pair<Eigen::ArrayXi, Eigen::ArrayXi>> bests;
    bests.reserve(swarm.size());
    for (int i = 0; i < config.particle_count; ++i) {
      if (st_context.active())
        bests.push_back(spatiotemporal_bests(swarm, i, st_context, config));
      else
        bests.emplace_back(plain_local_best(swarm, i, config.neighborhood_radius),
                           plain_global_best(swarm));
    }
    for (int i = 0; i < config.particle_count; ++i) {
      auto& p = swarm[static_cast<std::size_t>(i)];
      p = binary_pso_step(p, bests[static_cast<std::size_t>(i)].first,
                          bests[static_cast<std::size_t>(i)].second, config, step_rng);
      const double f = fitness(mask_from_support_position(dataset, support, p.position));
      if (f > p.best_fitness) {
        p.best_fitness = f;
        p.best_position = p.position;
      }
    }
    record(t);
    if (converged(trace, config)) break;
  }

  const Eigen::ArrayXi best = plain_global_best(swarm);
  result.best_mask = mask_from_support_position(dataset, support, best);
  result.best_fitness = trace.rows.back().global_best_fitness;
  return result;
}

namespace {

// Categorical columns enter correlations as label frequency ranks: the most
// frequent label maps to rank 0, ties broken by label index.
Eigen::VectorXd encoded_column(const DikwDataset& dataset, int item_index) {
  const auto& item = dataset.items[static_cast<std::size_t>(item_index)];
  const auto col = dataset.records.col(item_index);
  if (item.kind == ValueKind::kNumeric) return col;
  const auto k = item.labels.size();
  std::vector<std::int64_t> counts(k, 0);
  for (Eigen::Index r = 0; r < col.size(); ++r)
    ++counts[static_cast<std::size_t>(static_cast<int>(col[r]))];
  std::vector<int> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)];
  });
  std::vector<double> rank(k, 0.0);
  for (std::size_t pos = 0; pos < k; ++pos)
    rank[static_cast<std::size_t>(order[pos])] = static_cast<double>(pos);
  Eigen::VectorXd out(col.size());
  for (Eigen::Index r = 0; r < col.size(); ++r)
    out[r] = rank[static_cast<std::size_t>(static_cast<int>(col[r]))];
  return out;
}

// Pearson correlation; NaN when either side has zero variance.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto n = static_cast<double>(x.size());
  const Eigen::VectorXd xc = x.array() - x.mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double sx = xc.squaredNorm();
  const double sy = yc.squaredNorm();
  if (sx <= 0.0 || sy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  (void)n;
  return xc.dot(yc) / std::sqrt(sx * sy);
}

std::vector<int> modal_items(const DikwDataset& dataset, Modal modal) {
  std::vector<int> out;
  for (int i = 0; i < dataset.item_count(); ++i)
    if (dataset.items[static_cast<std::size_t>(i)].modal == modal &&
        !dataset.is_class_label(i))
      out.push_back(i);
  return out;
}

}  // namespace

double modal_association(const DikwDataset& dataset, const std::vector<int>& from_items,
                         Modal to_modal) {
  const std::vector<int> to_items = modal_items(dataset, to_modal);
  double sum = 0.0;
  int pairs = 0;
  for (const int a : from_items) {
    const Eigen::VectorXd xa = encoded_column(dataset, a);
    for (const int b : to_items) {
      const double r = pearson(xa, encoded_column(dataset, b));
      if (std::isnan(r)) continue;
      sum += std::abs(r);
      ++pairs;
    }
  }
  return pairs > 0 ? sum / pairs : 0.0;
}

PrivacyMode decide_mode(const DikwDataset& dataset, const MaskPlan& retained_mask,
                        double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw ValidationError("decide_mode: tau must lie in (0, 1)");
  if (!retained_mask.covers(dataset))
    throw ValidationError("decide_mode: mask does not cover this dataset");
  if (dataset.record_count() < 3)
    throw ValidationError("decide_mode: need at least 3 records for correlations");
  if (retained_mask.selected_count() == 0)
    throw ValidationError("decide_mode: retained mask is empty");

  const auto retained_of = [&](Modal m) {
    std::vector<int> out;
    for (const int i : modal_items(dataset, m))
      if (retained_mask.selected(i)) out.push_back(i);
    return out;
  };
  const std::vector<int> data_retained = retained_of(Modal::kData);
  const std::vector<int> info_retained = retained_of(Modal::kInformation);
  const std::vector<int> know_retained = retained_of(Modal::kKnowledge);

  bool has_data = !data_retained.empty();
  bool has_info = !info_retained.empty();
  bool has_know = !know_retained.empty();
  if (!has_data && !has_info && !has_know)
    throw ValidationError(
        "decide_mode: retained mask holds no data/information/knowledge items");

  if (has_data &&
      modal_association(dataset, data_retained, Modal::kInformation) >= tau)
    has_info = true;
  if (has_info) {
    // When Information joined by chaining only, associate from the whole
    // Information modal.
    const std::vector<int> source =
        !info_retained.empty() ? info_retained : modal_items(dataset, Modal::kInformation);
    if (!source.empty() &&
        modal_association(dataset, source, Modal::kKnowledge) >= tau)
      has_know = true;
  }

  if (has_data && has_info && has_know) return PrivacyMode::kDikdp;
  if (has_data && has_know) return PrivacyMode::kDikdp;  // no narrower mode covers both
  if (has_data && has_info) return PrivacyMode::kDidp;
  if (has_info && has_know) return PrivacyMode::kIkdp;
  if (has_data) return PrivacyMode::kDdp;
  if (has_info) return PrivacyMode::kIdp;
  return PrivacyMode::kKdp;
}

}  // namespace swarmdp
