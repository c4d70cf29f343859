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

#ifndef SWARMDP_DP_HPP
#define SWARMDP_DP_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "swarmdp/dikw.hpp"
#include "swarmdp/random.hpp"

namespace swarmdp {

enum class Mechanism { kLaplace, kRandomizedResponse };

std::string_view mechanism_name(Mechanism m);
Mechanism parse_mechanism(std::string_view s);

// Privacy budget and per-item sensitivity. The budget is spent per selected
// item independently (parallel composition across disjoint columns), so the
// reported total stays `epsilon`. Items without an explicit sensitivity fall
// back to their empirical range (max - min over records).
struct DpParams {
  double epsilon = 1.0;
  std::map<std::string, double> sensitivity;
  Mechanism mechanism = Mechanism::kLaplace;  // numeric mechanism selector
};

// value + Laplace(0, sensitivity / epsilon).
double laplace_noise(double value, double sensitivity, double epsilon, Rng& rng);

// Keeps the true label with probability e^eps / (e^eps + k - 1), otherwise
// answers a uniformly random other label. epsilon = 0 gives the uniform
// response.
int randomized_response(int label_index, int label_count, double epsilon, Rng& rng);
std::string randomized_response(const std::string& label,
                                const std::vector<std::string>& label_set,
                                double epsilon, Rng& rng);

double randomized_response_keep_probability(double epsilon, int label_count);

// Noise statistics for one item, for the run log. For Laplace: moments of
// the injected noise. For randomized response: mean = flip rate, variance =
// sample variance of the flip indicator.
struct NoiseReport {
  std::string item_id;
  std::int64_t draw_count = 0;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
};

double default_sensitivity(const DikwDataset& dataset, int item_index);

// Noises every value of every selected item; unselected items bit-identical.
// Each value draws from a sub-stream keyed by (seed, item id, record index),
// so results are independent of evaluation order and of what else the mask
// selects.
DikwDataset apply_dp(const DikwDataset& dataset, const MaskPlan& mask,
                     const DpParams& params, std::uint64_t seed,
                     std::vector<NoiseReport>* reports = nullptr);

using NumericMechanism = std::function<double(double value, Rng& rng)>;
using CategoricalMechanism = std::function<int(int label_index, Rng& rng)>;

struct VerifyBin {
  double abs_log_ratio = 0.0;  // |ln(pA / pB)|
  double p_min = 0.0;          // smaller of the two bin probability estimates
};

// Histogram comparison of a mechanism on two neighboring inputs.
// empirical_epsilon is the max |ln(pA/pB)| over bins populated on both
// sides; slack = 3 * sqrt(2 / (n * p_min)) at that bin. `violates` is true
// when some bin exceeds the claimed epsilon beyond its own slack. Degenerate
// histograms (no shared bin) come back inconclusive.
struct VerifyResult {
  bool conclusive = false;
  bool violates = false;
  double empirical_epsilon = 0.0;
  double slack = 0.0;
  std::int64_t draw_count = 0;
  std::vector<VerifyBin> bins;
};

VerifyResult verify_epsilon_numeric(const NumericMechanism& mechanism, double value_a,
                                    double value_b, double claimed_epsilon,
                                    std::int64_t draw_count, int bin_count,
                                    std::uint64_t seed);
VerifyResult verify_epsilon_categorical(const CategoricalMechanism& mechanism,
                                        int label_a, int label_b, int label_count,
                                        double claimed_epsilon, std::int64_t draw_count,
                                        std::uint64_t seed);

// Cost-ordered preference [IDP, KDP, DDP, DIDP, IKDP, DIKDP] filtered to
// modes with a non-empty mask on this dataset; PDP appended when purpose
// edges exist.
std::vector<PrivacyMode> mode_order_suggestion(const DikwDataset& dataset);

}  // namespace swarmdp

#endif  // SWARMDP_DP_HPP
