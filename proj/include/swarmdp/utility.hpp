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

#ifndef SWARMDP_UTILITY_HPP
#define SWARMDP_UTILITY_HPP

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swarmdp/dikw.hpp"
#include "swarmdp/dp.hpp"

namespace swarmdp {

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> holdout;
};

// Stratified by class label; each class contributes round(fraction * count)
// records to the training side.
SplitIndices stratified_split(const DikwDataset& dataset, const SplitSpec& spec);

DikwDataset subset_dataset(const DikwDataset& dataset, const std::vector<int>& records);

// Gaussian naive Bayes over numeric items, per-class label frequencies with
// add-one smoothing over categorical items. Class variances are floored at
// 1e-9 of the feature's global variance (absolute 1e-9 when that is zero).
struct GnbModel {
  int label_column = -1;
  std::vector<std::string> classes;
  Eigen::VectorXd log_prior;  // -inf for classes absent from training
  std::vector<int> numeric_columns;
  Eigen::MatrixXd mean;      // classes x numeric features
  Eigen::MatrixXd variance;
  std::vector<int> categorical_columns;
  std::vector<Eigen::MatrixXd> cat_log_prob;  // per feature: classes x labels
};

GnbModel train_gnb(const DikwDataset& dataset, const std::vector<int>& train_indices);

// Predicted class label index for one record; ties resolve to the lowest
// class index.
int gnb_predict(const GnbModel& model, const DikwDataset& dataset, int record);

struct UtilityReport {
  double accuracy = 0.0;
  std::map<std::string, double> per_class_accuracy;
  double train_fraction = 0.0;
  std::uint64_t fold_seed = 0;
};

// Trains on the (possibly noised) training set and scores accuracy on the
// clean holdout. The split metadata is echoed into the report.
UtilityReport evaluate_utility(const DikwDataset& masked_train,
                               const DikwDataset& clean_holdout,
                               double train_fraction = 0.7, std::uint64_t fold_seed = 0);

struct FitnessWeights {
  double lambda_utility = 1.0;
  double lambda_privacy_coverage = 0.5;
};

// lambda_utility * holdout accuracy after noising the training split under
// `mask`, plus lambda_privacy_coverage * (selected / support size).
// Deterministic given (mask, seed): noise draws come from per-item
// sub-streams of a seed derived here.
double fitness(const MaskPlan& mask, const DikwDataset& dataset, const DpParams& params,
               const FitnessWeights& weights, const SplitSpec& split, std::uint64_t seed,
               std::optional<int> mode_support_size = std::nullopt);

// Mean over selected numeric items of var(masked column) / var(clean
// column). Columns with zero clean variance are skipped (reported through
// `skipped`); all skipped is an error.
double masked_variance_ratio(const DikwDataset& clean, const DikwDataset& masked,
                             const MaskPlan& mask,
                             std::vector<std::string>* skipped = nullptr);

}  // namespace swarmdp

#endif  // SWARMDP_UTILITY_HPP
