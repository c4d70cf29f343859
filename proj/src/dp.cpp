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

#include "swarmdp/dp.hpp"

#include <algorithm>
#include <cmath>

#include "swarmdp/errors.hpp"
#include "swarmdp/text.hpp"

namespace swarmdp {

std::string_view mechanism_name(Mechanism m) {
  return m == Mechanism::kLaplace ? "laplace" : "randomized_response";
}

Mechanism parse_mechanism(std::string_view s) {
  const auto t = to_lower(trim(s));
  if (t == "laplace") return Mechanism::kLaplace;
  if (t == "randomized_response" || t == "rr") return Mechanism::kRandomizedResponse;
  throw ValidationError("unknown mechanism '" + std::string(s) + "'");
}

double laplace_noise(double value, double sensitivity, double epsilon, Rng& rng) {
  if (!std::isfinite(value)) throw ValidationError("laplace_noise: non-finite value");
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity))
    throw ValidationError("laplace_noise: sensitivity must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ValidationError("laplace_noise: epsilon must be positive");
  return value + rng.laplace(sensitivity / epsilon);
}

double randomized_response_keep_probability(double epsilon, int label_count) {
  const double e = std::exp(epsilon);
  return e / (e + static_cast<double>(label_count - 1));
}

int randomized_response(int label_index, int label_count, double epsilon, Rng& rng) {
  if (label_count < 2)
    throw ValidationError("randomized_response: label set must have at least 2 labels");
  if (label_index < 0 || label_index >= label_count)
    throw ValidationError("randomized_response: label outside the label set");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ValidationError("randomized_response: epsilon must be non-negative");
  const double keep = randomized_response_keep_probability(epsilon, label_count);
  if (rng.next_double() < keep) return label_index;
  const auto other = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(label_count - 1)));
  return other < label_index ? other : other + 1;
}

std::string randomized_response(const std::string& label,
                                const std::vector<std::string>& label_set,
                                double epsilon, Rng& rng) {
  int index = -1;
  for (std::size_t i = 0; i < label_set.size(); ++i)
    if (label_set[i] == label) index = static_cast<int>(i);
  if (index < 0)
    throw ValidationError("randomized_response: label '" + label + "' outside the label set");
  const int out =
      randomized_response(index, static_cast<int>(label_set.size()), epsilon, rng);
  return label_set[static_cast<std::size_t>(out)];
}

double default_sensitivity(const DikwDataset& dataset, int item_index) {
  if (dataset.record_count() == 0) return 0.0;
  const auto col = dataset.records.col(item_index);
  return col.maxCoeff() - col.minCoeff();
}

DikwDataset apply_dp(const DikwDataset& dataset, const MaskPlan& mask,
                     const DpParams& params, std::uint64_t seed,
                     std::vector<NoiseReport>* reports) {
  if (!mask.covers(dataset))
    throw ValidationError("apply_dp: mask does not cover this dataset");
  if (!(params.epsilon > 0.0))
    throw ValidationError("apply_dp: epsilon must be positive");

  DikwDataset out = dataset;
  const int rows = dataset.record_count();
  for (int c = 0; c < dataset.item_count(); ++c) {
    if (!mask.selected(c)) continue;
    const auto& item = dataset.items[static_cast<std::size_t>(c)];
    const std::uint64_t item_key = fnv1a(item.id);
    double mean = 0.0, m2 = 0.0;  // Welford over the noise / flip indicator
    std::int64_t n = 0;
    if (item.kind == ValueKind::kNumeric) {
      const auto it = params.sensitivity.find(item.id);
      const double sens = it != params.sensitivity.end()
                              ? it->second
                              : default_sensitivity(dataset, c);
      if (!(sens > 0.0))
        throw ValidationError("apply_dp: no usable sensitivity for selected item '" +
                              item.id + "'");
      for (int r = 0; r < rows; ++r) {
        Rng rng(derive_seed(derive_seed(seed, item_key), static_cast<std::uint64_t>(r)));
        const double noisy = laplace_noise(dataset.records(r, c), sens, params.epsilon, rng);
        out.records(r, c) = noisy;
        const double d = (noisy - dataset.records(r, c)) - mean;
        ++n;
        mean += d / static_cast<double>(n);
        m2 += d * ((noisy - dataset.records(r, c)) - mean);
      }
    } else {
      const int k = static_cast<int>(item.labels.size());
      for (int r = 0; r < rows; ++r) {
        Rng rng(derive_seed(derive_seed(seed, item_key), static_cast<std::uint64_t>(r)));
        const int noisy = randomized_response(static_cast<int>(dataset.records(r, c)), k,
                                              params.epsilon, rng);
        out.records(r, c) = static_cast<double>(noisy);
        const double flip = noisy != static_cast<int>(dataset.records(r, c)) ? 1.0 : 0.0;
        const double d = flip - mean;
        ++n;
        mean += d / static_cast<double>(n);
        m2 += d * (flip - mean);
      }
    }
    if (reports && n > 0)
      reports->push_back(NoiseReport{item.id, n, mean,
                                     n > 1 ? m2 / static_cast<double>(n - 1) : 0.0});
  }
  return out;
}

namespace {

VerifyResult compare_histograms(const std::vector<std::int64_t>& count_a,
                                const std::vector<std::int64_t>& count_b,
                                std::int64_t draws, double claimed_epsilon) {
  VerifyResult result;
  result.draw_count = draws;
  const double n = static_cast<double>(draws);
  for (std::size_t i = 0; i < count_a.size(); ++i) {
    if (count_a[i] <= 0 || count_b[i] <= 0) continue;
    const double pa = static_cast<double>(count_a[i]) / n;
    const double pb = static_cast<double>(count_b[i]) / n;
    VerifyBin bin;
    bin.abs_log_ratio = std::abs(std::log(pa / pb));
    bin.p_min = std::min(pa, pb);
    result.bins.push_back(bin);
  }
  if (result.bins.empty()) return result;  // inconclusive: no shared support
  result.conclusive = true;
  const VerifyBin* arg_max = &result.bins.front();
  for (const auto& bin : result.bins) {
    if (bin.abs_log_ratio > arg_max->abs_log_ratio) arg_max = &bin;
    const double slack = 3.0 * std::sqrt(2.0 / (n * bin.p_min));
    if (bin.abs_log_ratio > claimed_epsilon + slack) result.violates = true;
  }
  result.empirical_epsilon = arg_max->abs_log_ratio;
  result.slack = 3.0 * std::sqrt(2.0 / (n * arg_max->p_min));
  return result;
}

}  // namespace

VerifyResult verify_epsilon_numeric(const NumericMechanism& mechanism, double value_a,
                                    double value_b, double claimed_epsilon,
                                    std::int64_t draw_count, int bin_count,
                                    std::uint64_t seed) {
  if (draw_count < 10000)
    throw ValidationError("verify_epsilon: need at least 10^4 draws");
  if (bin_count < 2) throw ValidationError("verify_epsilon: need at least 2 bins");

  std::vector<double> draws_a(static_cast<std::size_t>(draw_count));
  std::vector<double> draws_b(static_cast<std::size_t>(draw_count));
  Rng rng_a(derive_seed(seed, "verify-a"));
  Rng rng_b(derive_seed(seed, "verify-b"));
  for (auto& v : draws_a) v = mechanism(value_a, rng_a);
  for (auto& v : draws_b) v = mechanism(value_b, rng_b);

  double lo = draws_a.front(), hi = draws_a.front();
  for (const double v : draws_a) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (const double v : draws_b) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    // All outcomes identical on both sides: one shared bin, ratio 1.
    std::vector<std::int64_t> ca{draw_count}, cb{draw_count};
    return compare_histograms(ca, cb, draw_count, claimed_epsilon);
  }
  const double width = (hi - lo) / bin_count;
  std::vector<std::int64_t> count_a(static_cast<std::size_t>(bin_count), 0);
  std::vector<std::int64_t> count_b(static_cast<std::size_t>(bin_count), 0);
  const auto bin_of = [&](double v) {
    auto b = static_cast<std::int64_t>((v - lo) / width);
    return static_cast<std::size_t>(std::clamp<std::int64_t>(b, 0, bin_count - 1));
  };
  for (const double v : draws_a) ++count_a[bin_of(v)];
  for (const double v : draws_b) ++count_b[bin_of(v)];
  return compare_histograms(count_a, count_b, draw_count, claimed_epsilon);
}

VerifyResult verify_epsilon_categorical(const CategoricalMechanism& mechanism,
                                        int label_a, int label_b, int label_count,
                                        double claimed_epsilon, std::int64_t draw_count,
                                        std::uint64_t seed) {
  if (draw_count < 10000)
    throw ValidationError("verify_epsilon: need at least 10^4 draws");
  if (label_count < 2)
    throw ValidationError("verify_epsilon: need at least 2 labels");

  std::vector<std::int64_t> count_a(static_cast<std::size_t>(label_count), 0);
  std::vector<std::int64_t> count_b(static_cast<std::size_t>(label_count), 0);
  Rng rng_a(derive_seed(seed, "verify-a"));
  Rng rng_b(derive_seed(seed, "verify-b"));
  for (std::int64_t i = 0; i < draw_count; ++i) {
    const int oa = mechanism(label_a, rng_a);
    const int ob = mechanism(label_b, rng_b);
    if (oa < 0 || oa >= label_count || ob < 0 || ob >= label_count)
      throw ValidationError("verify_epsilon: mechanism answered outside the label set");
    ++count_a[static_cast<std::size_t>(oa)];
    ++count_b[static_cast<std::size_t>(ob)];
  }
  return compare_histograms(count_a, count_b, draw_count, claimed_epsilon);
}

std::vector<PrivacyMode> mode_order_suggestion(const DikwDataset& dataset) {
  static const PrivacyMode preference[] = {PrivacyMode::kIdp,  PrivacyMode::kKdp,
                                           PrivacyMode::kDdp,  PrivacyMode::kDidp,
                                           PrivacyMode::kIkdp, PrivacyMode::kDikdp};
  std::vector<PrivacyMode> out;
  for (const PrivacyMode m : preference)
    if (mode_mask(dataset, m).selected_count() > 0) out.push_back(m);
  if (!dataset.purpose_edges.empty()) out.push_back(PrivacyMode::kPdp);
  return out;
}

}  // namespace swarmdp
