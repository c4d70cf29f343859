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

#include "swarmdp/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmdp/errors.hpp"
#include "swarmdp/random.hpp"
#include "swarmdp/text.hpp"

namespace swarmdp {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;

bool same_schema(const DikwDataset& a, const DikwDataset& b) {
  if (a.item_count() != b.item_count()) return false;
  for (int i = 0; i < a.item_count(); ++i) {
    const auto& x = a.items[static_cast<std::size_t>(i)];
    const auto& y = b.items[static_cast<std::size_t>(i)];
    if (x.id != y.id || x.kind != y.kind || x.modal != y.modal ||
        x.category != y.category || x.labels != y.labels)
      return false;
  }
  return a.class_label == b.class_label;
}

double sample_variance(const Eigen::VectorXd& col) {
  const auto n = col.size();
  if (n < 2) return 0.0;
  const double mean = col.mean();
  return (col.array() - mean).square().sum() / static_cast<double>(n - 1);
}

}  // namespace

SplitIndices stratified_split(const DikwDataset& dataset, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw ValidationError("stratified_split: train_fraction must lie in (0, 1)");
  const int label = dataset.class_label_index();
  if (label < 0) throw ValidationError("stratified_split: dataset has no class label");
  const auto& item = dataset.items[static_cast<std::size_t>(label)];

  std::vector<std::vector<int>> by_class(item.labels.size());
  for (int r = 0; r < dataset.record_count(); ++r)
    by_class[static_cast<std::size_t>(static_cast<int>(dataset.records(r, label)))]
        .push_back(r);

  SplitIndices out;
  Rng rng(derive_seed(spec.seed, "stratified-split"));
  for (auto& members : by_class) {
    // Fisher-Yates within the class, then cut at the train fraction.
    for (std::size_t i = members.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(i));
      std::swap(members[i - 1], members[j]);
    }
    const auto take = static_cast<std::size_t>(
        std::llround(spec.train_fraction * static_cast<double>(members.size())));
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < take ? out.train : out.holdout).push_back(members[i]);
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.holdout.begin(), out.holdout.end());
  return out;
}

DikwDataset subset_dataset(const DikwDataset& dataset, const std::vector<int>& records) {
  DikwDataset out = dataset;
  out.records.resize(static_cast<Eigen::Index>(records.size()), dataset.records.cols());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const int r = records[i];
    if (r < 0 || r >= dataset.record_count())
      throw ValidationError("subset_dataset: record index " + fmt_int(r) + " out of range");
    out.records.row(static_cast<Eigen::Index>(i)) = dataset.records.row(r);
  }
  return out;
}

GnbModel train_gnb(const DikwDataset& dataset, const std::vector<int>& train_indices) {
  const int label = dataset.class_label_index();
  if (label < 0) throw ValidationError("train_gnb: dataset has no class label");
  if (train_indices.empty()) throw ValidationError("train_gnb: empty training set");

  GnbModel model;
  model.label_column = label;
  model.classes = dataset.items[static_cast<std::size_t>(label)].labels;
  const auto n_classes = static_cast<int>(model.classes.size());

  std::vector<std::vector<int>> members(static_cast<std::size_t>(n_classes));
  for (const int r : train_indices) {
    if (r < 0 || r >= dataset.record_count())
      throw ValidationError("train_gnb: record index " + fmt_int(r) + " out of range");
    members[static_cast<std::size_t>(static_cast<int>(dataset.records(r, label)))]
        .push_back(r);
  }
  int present = 0;
  for (const auto& m : members) present += m.empty() ? 0 : 1;
  if (present < 2) throw ValidationError("train_gnb: training set holds a single class");

  model.log_prior.resize(n_classes);
  const auto n_train = static_cast<double>(train_indices.size());
  for (int c = 0; c < n_classes; ++c) {
    const auto count = members[static_cast<std::size_t>(c)].size();
    model.log_prior[c] = count > 0 ? std::log(static_cast<double>(count) / n_train)
                                   : -std::numeric_limits<double>::infinity();
  }

  for (int col = 0; col < dataset.item_count(); ++col) {
    if (col == label) continue;
    if (dataset.items[static_cast<std::size_t>(col)].kind == ValueKind::kNumeric)
      model.numeric_columns.push_back(col);
    else
      model.categorical_columns.push_back(col);
  }

  const auto n_num = static_cast<int>(model.numeric_columns.size());
  model.mean.setZero(n_classes, n_num);
  model.variance.setOnes(n_classes, n_num);
  for (int f = 0; f < n_num; ++f) {
    const int col = model.numeric_columns[static_cast<std::size_t>(f)];
    // Global variance over the training records sets the variance floor.
    Eigen::VectorXd train_col(train_indices.size());
    for (std::size_t i = 0; i < train_indices.size(); ++i)
      train_col[static_cast<Eigen::Index>(i)] = dataset.records(train_indices[i], col);
    const double global_var = sample_variance(train_col);
    const double floor = global_var > 0 ? 1e-9 * global_var : 1e-9;
    for (int c = 0; c < n_classes; ++c) {
      const auto& rows = members[static_cast<std::size_t>(c)];
      if (rows.empty()) continue;
      double mean = 0.0;
      for (const int r : rows) mean += dataset.records(r, col);
      mean /= static_cast<double>(rows.size());
      double var = 0.0;
      for (const int r : rows) {
        const double d = dataset.records(r, col) - mean;
        var += d * d;
      }
      var = rows.size() > 1 ? var / static_cast<double>(rows.size() - 1) : 0.0;
      model.mean(c, f) = mean;
      model.variance(c, f) = std::max(var, floor);
    }
  }

  for (const int col : model.categorical_columns) {
    const auto n_labels =
        static_cast<int>(dataset.items[static_cast<std::size_t>(col)].labels.size());
    Eigen::MatrixXd log_prob(n_classes, n_labels);
    for (int c = 0; c < n_classes; ++c) {
      const auto& rows = members[static_cast<std::size_t>(c)];
      Eigen::VectorXd counts = Eigen::VectorXd::Ones(n_labels);  // add-one smoothing
      for (const int r : rows) counts[static_cast<int>(dataset.records(r, col))] += 1.0;
      const double total = counts.sum();
      for (int l = 0; l < n_labels; ++l) log_prob(c, l) = std::log(counts[l] / total);
    }
    model.cat_log_prob.push_back(std::move(log_prob));
  }
  return model;
}

int gnb_predict(const GnbModel& model, const DikwDataset& dataset, int record) {
  const auto n_classes = static_cast<int>(model.classes.size());
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < n_classes; ++c) {
    double score = model.log_prior[c];
    if (!std::isfinite(score)) continue;  // class absent from training
    for (std::size_t f = 0; f < model.numeric_columns.size(); ++f) {
      const double x = dataset.records(record, model.numeric_columns[f]);
      const double var = model.variance(c, static_cast<int>(f));
      const double d = x - model.mean(c, static_cast<int>(f));
      score -= 0.5 * (kLogTwoPi + std::log(var) + d * d / var);
    }
    for (std::size_t f = 0; f < model.categorical_columns.size(); ++f) {
      const int l = static_cast<int>(dataset.records(record, model.categorical_columns[f]));
      score += model.cat_log_prob[f](c, l);
    }
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

UtilityReport evaluate_utility(const DikwDataset& masked_train,
                               const DikwDataset& clean_holdout,
                               double train_fraction, std::uint64_t fold_seed) {
  if (!same_schema(masked_train, clean_holdout))
    throw ValidationError("evaluate_utility: train and holdout schemas differ");
  std::vector<int> all_train(static_cast<std::size_t>(masked_train.record_count()));
  for (int i = 0; i < masked_train.record_count(); ++i)
    all_train[static_cast<std::size_t>(i)] = i;
  const GnbModel model = train_gnb(masked_train, all_train);

  const int label = clean_holdout.class_label_index();
  std::map<std::string, std::pair<int, int>> per_class;  // correct, total
  int correct = 0;
  for (int r = 0; r < clean_holdout.record_count(); ++r) {
    const int truth = static_cast<int>(clean_holdout.records(r, label));
    const int predicted = gnb_predict(model, clean_holdout, r);
    auto& [ok, total] = per_class[model.classes[static_cast<std::size_t>(truth)]];
    ++total;
    if (predicted == truth) {
      ++ok;
      ++correct;
    }
  }
  UtilityReport report;
  report.accuracy = clean_holdout.record_count() > 0
                        ? static_cast<double>(correct) /
                              static_cast<double>(clean_holdout.record_count())
                        : 0.0;
  for (const auto& [name, counts] : per_class)
    report.per_class_accuracy[name] =
        static_cast<double>(counts.first) / static_cast<double>(counts.second);
  report.train_fraction = train_fraction;
  report.fold_seed = fold_seed;
  return report;
}

double fitness(const MaskPlan& mask, const DikwDataset& dataset, const DpParams& params,
               const FitnessWeights& weights, const SplitSpec& split, std::uint64_t seed,
               std::optional<int> mode_support_size) {
  if (weights.lambda_utility == 0.0 && weights.lambda_privacy_coverage == 0.0)
    throw ValidationError("fitness: weights must not both be zero");
  if (!mask.covers(dataset)) throw ValidationError("fitness: mask does not cover dataset");

  double utility = 0.0;
  if (weights.lambda_utility != 0.0) {
    const SplitIndices indices = stratified_split(dataset, split);
    const DikwDataset train = subset_dataset(dataset, indices.train);
    const DikwDataset holdout = subset_dataset(dataset, indices.holdout);
    const DikwDataset masked =
        apply_dp(train, mask, params, derive_seed(seed, "fitness-noise"));
    utility =
        evaluate_utility(masked, holdout, split.train_fraction, split.seed).accuracy;
  }

  int support = 0;
  if (mode_support_size) {
    support = *mode_support_size;
  } else {
    support = dataset.item_count() - (dataset.class_label_index() >= 0 ? 1 : 0);
  }
  const double coverage =
      support > 0 ? static_cast<double>(mask.selected_count()) / support : 0.0;
  return weights.lambda_utility * utility + weights.lambda_privacy_coverage * coverage;
}

double masked_variance_ratio(const DikwDataset& clean, const DikwDataset& masked,
                             const MaskPlan& mask, std::vector<std::string>* skipped) {
  if (!same_schema(clean, masked))
    throw ValidationError("masked_variance_ratio: schemas differ");
  if (clean.record_count() != masked.record_count())
    throw ValidationError("masked_variance_ratio: record counts differ");
  if (!mask.covers(clean))
    throw ValidationError("masked_variance_ratio: mask does not cover dataset");

  double sum = 0.0;
  int used = 0;
  bool any_numeric_selected = false;
  for (int c = 0; c < clean.item_count(); ++c) {
    if (!mask.selected(c)) continue;
    if (clean.items[static_cast<std::size_t>(c)].kind != ValueKind::kNumeric) continue;
    any_numeric_selected = true;
    const double clean_var = sample_variance(clean.records.col(c));
    if (clean_var <= 0.0) {
      if (skipped) skipped->push_back(clean.items[static_cast<std::size_t>(c)].id);
      continue;
    }
    sum += sample_variance(masked.records.col(c)) / clean_var;
    ++used;
  }
  if (!any_numeric_selected)
    throw ValidationError("masked_variance_ratio: mask selects no numeric item");
  if (used == 0)
    throw ValidationError(
        "masked_variance_ratio: every selected numeric column has zero variance");
  return sum / used;
}

}  // namespace swarmdp
