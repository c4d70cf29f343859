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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "swarmdp/errors.hpp"
#include "swarmdp/generate.hpp"
#include "swarmdp/utility.hpp"
#include "test_support.hpp"

using namespace swarmdp;
using namespace swarmdp::test;

namespace {

// One numeric feature, two classes at means +/- 5 with unit variance.
DikwDataset gaussian_pair(std::uint64_t seed, int per_class, double separation = 5.0) {
  std::vector<DikwItem> items = {
      numeric_item("x", Modal::kData, Category::kWho),
      categorical_item("label", Modal::kData, Category::kWho, {"neg", "pos"}),
  };
  std::vector<std::vector<double>> rows;
  Rng rng(seed);
  for (int i = 0; i < per_class; ++i) {
    rows.push_back({normal_draw(rng, -separation, 1.0), 0.0});
    rows.push_back({normal_draw(rng, separation, 1.0), 1.0});
  }
  DikwDataset ds = make_dataset(std::move(items), rows);
  ds.class_label = "label";
  return ds;
}

std::vector<int> all_records(const DikwDataset& ds) {
  std::vector<int> out(static_cast<std::size_t>(ds.record_count()));
  for (int i = 0; i < ds.record_count(); ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

}  // namespace

TEST_CASE("stratified split keeps class shares and stays deterministic") {
  const DikwDataset ds = generate_iris_dikw(iris_gen_spec());
  const SplitSpec spec{0.7, 9};
  const SplitIndices a = stratified_split(ds, spec);
  const SplitIndices b = stratified_split(ds, spec);
  CHECK(a.train == b.train);
  CHECK(a.holdout == b.holdout);
  CHECK(a.train.size() == 105);
  CHECK(a.holdout.size() == 45);
  // 35 training records per species.
  const int label = ds.class_label_index();
  std::vector<int> per_class(3, 0);
  for (const int r : a.train) ++per_class[static_cast<int>(ds.records(r, label))];
  CHECK(per_class == std::vector<int>{35, 35, 35});
  // Disjoint and exhaustive.
  std::vector<bool> seen(150, false);
  for (const int r : a.train) seen[static_cast<std::size_t>(r)] = true;
  for (const int r : a.holdout) {
    CHECK_FALSE(seen[static_cast<std::size_t>(r)]);
    seen[static_cast<std::size_t>(r)] = true;
  }
  for (const bool s : seen) CHECK(s);
}

TEST_CASE("well-separated gaussians classify nearly perfectly") {
  // Bayes error for classes at +/-5 with unit variance is Phi(-5) ~ 3e-7,
  // so 0.99 leaves generous room.
  const DikwDataset ds = gaussian_pair(100, 100);
  const SplitIndices split = stratified_split(ds, SplitSpec{0.7, 1});
  const GnbModel model = train_gnb(ds, split.train);
  int correct = 0;
  const int label = ds.class_label_index();
  for (const int r : split.holdout)
    correct += gnb_predict(model, ds, r) == static_cast<int>(ds.records(r, label)) ? 1 : 0;
  CHECK(static_cast<double>(correct) / split.holdout.size() >= 0.99);
}

TEST_CASE("posterior argmax matches a hand-computed case") {
  // Two classes, one feature. Training: class 0 holds {0, 2}, class 1 holds
  // {10, 14}. Means 1 and 12, variances 2 and 8, priors 1/2.
  //   score0(x) = ln(1/2) - ln(2 pi 2)/2 - (x-1)^2/4
  //   score1(x) = ln(1/2) - ln(2 pi 8)/2 - (x-12)^2/16
  // Equality at 3x^2 + 16x - 151.07 = 0, i.e. x ~ 4.914. At x = 4:
  // score0 ~ -4.21 beats score1 ~ -6.65; at x = 7 score1 ~ -4.21 beats
  // score0 ~ -10.96.
  std::vector<DikwItem> items = {
      numeric_item("x", Modal::kData, Category::kWho),
      categorical_item("label", Modal::kData, Category::kWho, {"a", "b"}),
  };
  DikwDataset ds = make_dataset(std::move(items),
                                {{0, 0}, {2, 0}, {10, 1}, {14, 1}, {4, 0}, {7, 0}});
  ds.class_label = "label";
  const GnbModel model = train_gnb(ds, {0, 1, 2, 3});
  CHECK(model.mean(0, 0) == 1.0);
  CHECK(model.mean(1, 0) == 12.0);
  CHECK(model.variance(0, 0) == 2.0);
  CHECK(model.variance(1, 0) == 8.0);
  CHECK(gnb_predict(model, ds, 4) == 0);
  CHECK(gnb_predict(model, ds, 5) == 1);
}

TEST_CASE("full-fit accuracy on the extended iris table stays above 0.90") {
  const DikwDataset ds = generate_iris_dikw(iris_gen_spec());
  const GnbModel model = train_gnb(ds, all_records(ds));
  const int label = ds.class_label_index();
  int correct = 0;
  for (int r = 0; r < ds.record_count(); ++r)
    correct += gnb_predict(model, ds, r) == static_cast<int>(ds.records(r, label)) ? 1 : 0;
  CHECK(static_cast<double>(correct) / ds.record_count() >= 0.90);
}

TEST_CASE("permuted labels score at chance level") {
  const DikwDataset ds = generate_iris_dikw(iris_gen_spec());
  const int label = ds.class_label_index();
  double mean_accuracy = 0.0;
  const int runs = 20;
  for (std::uint64_t seed = 0; seed < runs; ++seed) {
    DikwDataset shuffled = ds;
    Rng rng(derive_seed(seed, "permute"));
    for (int r = ds.record_count() - 1; r > 0; --r) {
      const auto j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(r + 1)));
      std::swap(shuffled.records(r, label), shuffled.records(j, label));
    }
    const SplitIndices split = stratified_split(shuffled, SplitSpec{0.7, seed});
    const GnbModel model = train_gnb(shuffled, split.train);
    int correct = 0;
    for (const int r : split.holdout)
      correct += gnb_predict(model, shuffled, r) ==
                         static_cast<int>(shuffled.records(r, label))
                     ? 1
                     : 0;
    mean_accuracy += static_cast<double>(correct) / split.holdout.size();
  }
  mean_accuracy /= runs;
  CHECK(std::abs(mean_accuracy - 1.0 / 3.0) < 0.1);
}

TEST_CASE("prediction is invariant under class renaming") {
  const DikwDataset ds = generate_iris_dikw(iris_gen_spec());
  DikwDataset renamed = ds;
  renamed.items[static_cast<std::size_t>(ds.class_label_index())].labels = {
      "z_first", "z_second", "z_third"};
  const GnbModel a = train_gnb(ds, all_records(ds));
  const GnbModel b = train_gnb(renamed, all_records(renamed));
  for (int r = 0; r < ds.record_count(); ++r)
    CHECK(gnb_predict(a, ds, r) == gnb_predict(b, renamed, r));
}

TEST_CASE("degenerate training sets are rejected or floored") {
  DikwDataset ds = gaussian_pair(5, 10);
  // Single-class training set.
  std::vector<int> one_class;
  const int label = ds.class_label_index();
  for (int r = 0; r < ds.record_count(); ++r)
    if (static_cast<int>(ds.records(r, label)) == 0) one_class.push_back(r);
  CHECK_THROWS_AS(train_gnb(ds, one_class), ValidationError);

  // A zero-variance feature trains fine through the variance floor.
  ds.records.col(0).setConstant(1.0);
  CHECK_NOTHROW(train_gnb(ds, all_records(ds)));
  const GnbModel model = train_gnb(ds, all_records(ds));
  CHECK(model.variance(0, 0) > 0.0);
}

TEST_CASE("evaluate_utility reports the clean baseline and degrades under noise") {
  const DikwDataset ds = generate_iris_dikw(iris_gen_spec());
  const SplitIndices split = stratified_split(ds, SplitSpec{0.7, 21});
  const DikwDataset train = subset_dataset(ds, split.train);
  const DikwDataset holdout = subset_dataset(ds, split.holdout);

  const double baseline = evaluate_utility(train, holdout).accuracy;
  CHECK(baseline >= 0.85);

  const MaskPlan full = mode_mask(ds, PrivacyMode::kDikdp);

  SUBCASE("near-zero noise keeps the baseline") {
    DpParams params;
    params.epsilon = 1e6;
    const DikwDataset masked = apply_dp(train, full, params, 3);
    CHECK(std::abs(evaluate_utility(masked, holdout).accuracy - baseline) <= 0.02);
  }
  SUBCASE("heavy noise cannot beat the baseline on average") {
    DpParams params;
    params.epsilon = 0.01;
    double mean = 0.0;
    const int runs = 20;
    for (std::uint64_t seed = 0; seed < runs; ++seed)
      mean += evaluate_utility(apply_dp(train, full, params, seed), holdout).accuracy;
    mean /= runs;
    CHECK(mean <= baseline);
  }
  SUBCASE("accuracy is the class-share weighted mean of per-class accuracies") {
    const UtilityReport report = evaluate_utility(train, holdout);
    const int label = holdout.class_label_index();
    double weighted = 0.0;
    for (const auto& [name, acc] : report.per_class_accuracy) {
      int count = 0;
      const int li = holdout.items[static_cast<std::size_t>(label)].label_index(name);
      for (int r = 0; r < holdout.record_count(); ++r)
        count += static_cast<int>(holdout.records(r, label)) == li ? 1 : 0;
      weighted += acc * count;
      CHECK(acc >= 0.0);
      CHECK(acc <= 1.0);
    }
    CHECK(weighted / holdout.record_count() == doctest::Approx(report.accuracy));
  }
  SUBCASE("schema mismatch is rejected") {
    DikwDataset other = holdout;
    other.items[0].category = Category::kWhy;
    CHECK_THROWS_AS(evaluate_utility(train, other), ValidationError);
  }
}

TEST_CASE("fitness composes utility and coverage as configured") {
  const DikwDataset ds = generate_iris_dikw(iris_gen_spec());
  const MaskPlan full = mode_mask(ds, PrivacyMode::kDikdp);
  const MaskPlan empty = MaskPlan::none(ds);
  const SplitSpec split{0.7, 4};
  DpParams params;
  params.epsilon = 2.0;

  SUBCASE("coverage weight zero leaves exactly the accuracy") {
    const FitnessWeights weights{1.0, 0.0};
    const double f = fitness(full, ds, params, weights, split, 8, 7);
    const SplitIndices idx = stratified_split(ds, split);
    const DikwDataset masked = apply_dp(subset_dataset(ds, idx.train), full, params,
                                        derive_seed(8, "fitness-noise"));
    const double acc =
        evaluate_utility(masked, subset_dataset(ds, idx.holdout)).accuracy;
    CHECK(f == acc);
  }
  SUBCASE("utility weight zero leaves pure coverage") {
    const FitnessWeights weights{0.0, 1.0};
    CHECK(fitness(empty, ds, params, weights, split, 8, 7) == 0.0);
    CHECK(fitness(full, ds, params, weights, split, 8, 7) == 1.0);
  }
  SUBCASE("coverage term is monotone with the utility term stubbed") {
    const FitnessWeights weights{0.0, 0.5};
    double previous = -1.0;
    for (int count = 0; count <= 7; ++count) {
      std::vector<bool> sel(8, false);
      for (int k = 0; k < count; ++k) sel[static_cast<std::size_t>(k)] = true;
      const double f = fitness(MaskPlan(ds, sel), ds, params, weights, split, 8, 7);
      CHECK(f > previous);
      previous = f;
    }
  }
  SUBCASE("deterministic given mask and seed") {
    const FitnessWeights weights{1.0, 0.5};
    CHECK(fitness(full, ds, params, weights, split, 8, 7) ==
          fitness(full, ds, params, weights, split, 8, 7));
  }
  SUBCASE("both weights zero is rejected") {
    CHECK_THROWS_AS(fitness(full, ds, params, FitnessWeights{0.0, 0.0}, split, 8, 7),
                    ValidationError);
  }
}

TEST_CASE("masked variance ratio tracks the added noise variance") {
  std::vector<DikwItem> items = {numeric_item("x", Modal::kData, Category::kWho)};
  std::vector<std::vector<double>> rows;
  Rng rng(41);
  const int n = 10000;
  for (int i = 0; i < n; ++i) rows.push_back({normal_draw(rng, 0.0, 2.0)});
  const DikwDataset clean = make_dataset(std::move(items), rows);
  const MaskPlan mask(clean, {true});

  SUBCASE("identity is exactly one") {
    CHECK(masked_variance_ratio(clean, clean, mask) == 1.0);
  }
  SUBCASE("laplace noise adds 2 b^2 variance") {
    const double b = 1.5;  // scale = sensitivity / epsilon
    DikwDataset noisy = clean;
    Rng noise(42);
    for (int r = 0; r < n; ++r) noisy.records(r, 0) += noise.laplace(b);
    const double clean_var =
        (clean.records.col(0).array() - clean.records.col(0).mean()).square().sum() /
        (n - 1);
    const double expected = (clean_var + 2.0 * b * b) / clean_var;
    CHECK(masked_variance_ratio(clean, noisy, mask) ==
          doctest::Approx(expected).epsilon(0.10));
  }
  SUBCASE("no numeric selection is an error") {
    CHECK_THROWS_AS(masked_variance_ratio(clean, clean, MaskPlan::none(clean)),
                    ValidationError);
  }
  SUBCASE("zero-variance columns are skipped with a warning") {
    std::vector<DikwItem> two = {numeric_item("flat", Modal::kData, Category::kWho),
                                 numeric_item("x", Modal::kData, Category::kWho)};
    DikwDataset ds = make_dataset(std::move(two), {{1, 0.5}, {1, 2.5}, {1, 4.5}});
    std::vector<std::string> skipped;
    const double ratio =
        masked_variance_ratio(ds, ds, MaskPlan(ds, {true, true}), &skipped);
    CHECK(ratio == 1.0);
    CHECK(skipped == std::vector<std::string>{"flat"});
    // All-flat selection cannot produce a ratio at all.
    DikwDataset flat_only = make_dataset(
        {numeric_item("flat", Modal::kData, Category::kWho)}, {{1}, {1}, {1}});
    CHECK_THROWS_AS(
        masked_variance_ratio(flat_only, flat_only, MaskPlan(flat_only, {true})),
        ValidationError);
  }
}
