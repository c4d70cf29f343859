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

#ifndef SWARMDP_SWARM_HPP
#define SWARMDP_SWARM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "swarmdp/dikw.hpp"
#include "swarmdp/random.hpp"

namespace swarmdp {

// Spatial-temporal weighting strength for best selection; zero weights
// reduce to the plain bests exactly.
struct StWeights {
  double alpha_spatial = 0.0;
  double alpha_temporal = 0.0;
};

struct SwarmConfig {
  int particle_count = 12;
  double c1 = 1.5;
  double c2 = 1.5;
  int max_iterations = 30;
  int neighborhood_radius = 1;  // ring topology
  std::uint64_t seed = 0;
  double variance_blowup_factor = 1.5;
  std::optional<StWeights> st_weights;

  void validate() const;
};

// Sign-valued search state. position(+1) selects the item for noising;
// sign_velocity flips (-1) or keeps (+1) a coordinate; real_velocity carries
// the accumulated real-valued update between steps.
struct Particle {
  Eigen::ArrayXi position;
  Eigen::ArrayXi sign_velocity;
  Eigen::ArrayXd real_velocity;
  Eigen::ArrayXi best_position;
  double best_fitness = 0.0;
};

struct TraceRow {
  int iteration = 0;
  double global_best_fitness = 0.0;
  double retained_fraction = 0.0;  // share of +1 entries in the global best
  double masked_variance = 1.0;
};

struct OptimizationTrace {
  std::vector<TraceRow> rows;
};

// Reference real-valued update, kept for self-tests of the sign-valued
// variant's accumulator term:
//   v' = v + c1 r1 (pbest - x) + c2 r2 (gbest - x),  x' = x + v'
// with r1, r2 fresh uniform [0,1) per coordinate.
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> continuous_pso_step(
    const Eigen::ArrayXd& position, const Eigen::ArrayXd& velocity,
    const Eigen::ArrayXd& personal_best, const Eigen::ArrayXd& global_best,
    const SwarmConfig& config, Rng& rng);

// One sign-valued update. Per coordinate:
//   v'' = real_velocity + c1 r1 (local - x) + c2 r2 (global - x)
//   v'  = sign(v'')            (v'' = 0 resolves to +1)
//   sign_velocity = v' * x,  new position = x * sign_velocity
// r1 is drawn before r2 for each coordinate in order.
Particle binary_pso_step(const Particle& particle, const Eigen::ArrayXi& local_best,
                         const Eigen::ArrayXi& global_best, const SwarmConfig& config,
                         Rng& rng);

// Ring indices around `index`, in offset order -radius..+radius, deduplicated.
// Best reductions iterate this order with strictly-greater replacement, so
// ties resolve deterministically.
std::vector<int> ring_neighborhood(int index, int radius, int particle_count);

Eigen::ArrayXi plain_local_best(const std::vector<Particle>& swarm, int index,
                                int radius);
Eigen::ArrayXi plain_global_best(const std::vector<Particle>& swarm);

// Per-candidate weight from item metadata: candidates are ranked by
// fitness * w with w = 1 / (1 + a_s * spatial_distance + a_t * age), where
// the distance and age are normalized means over the items a candidate
// position selects. Items without metadata drop out of the mean.
class StContext {
 public:
  StContext() = default;
  StContext(const DikwDataset& dataset, const std::vector<int>& support_items,
            const StWeights& weights);

  double weight(const Eigen::ArrayXi& position) const;
  bool active() const { return weights_.alpha_spatial > 0 || weights_.alpha_temporal > 0; }

 private:
  StWeights weights_;
  std::vector<double> norm_distance_;  // per support coordinate; NaN = no metadata
  std::vector<double> norm_age_;
};

std::pair<Eigen::ArrayXi, Eigen::ArrayXi> spatiotemporal_bests(
    const std::vector<Particle>& swarm, int particle_index, const StContext& context,
    const SwarmConfig& config);

// Item indices eligible under a mode, in dataset order.
std::vector<int> mode_support(const DikwDataset& dataset, PrivacyMode mode);

// Expands a support-local sign vector to a full mask; coordinates outside
// the support stay unselected.
MaskPlan mask_from_support_position(const DikwDataset& dataset,
                                    const std::vector<int>& support,
                                    const Eigen::ArrayXi& position);

using FitnessFn = std::function<double(const MaskPlan&)>;
using MaskStatFn = std::function<double(const MaskPlan&)>;

struct OptimizeResult {
  MaskPlan best_mask;
  double best_fitness = 0.0;
  OptimizationTrace trace;
};

// Runs the sign-valued swarm over the mode's support and returns the best
// mask encountered plus the per-iteration trace. `masked_variance` feeds the
// trace column the convergence rule watches; without it the column stays at
// 1 and only max_iterations stops the run.
OptimizeResult optimize_mask(const DikwDataset& dataset, PrivacyMode mode,
                             const FitnessFn& fitness, const SwarmConfig& config,
                             const MaskStatFn& masked_variance = {});

// True when the retained share shrank over the last step while the masked
// data variance blew past variance_blowup_factor times its previous value.
bool converged(const OptimizationTrace& trace, const SwarmConfig& config);

// Mean absolute Pearson correlation between the given columns and every
// column of the target modal (class label excluded). Categorical columns
// enter as label frequency ranks.
double modal_association(const DikwDataset& dataset, const std::vector<int>& from_items,
                         Modal to_modal);

// Chains modals by association strength: Data pulls in Information at
// association >= tau, Information pulls in Knowledge likewise; answers the
// smallest mode covering the included modals.
PrivacyMode decide_mode(const DikwDataset& dataset, const MaskPlan& retained_mask,
                        double tau);

}  // namespace swarmdp

#endif  // SWARMDP_SWARM_HPP
