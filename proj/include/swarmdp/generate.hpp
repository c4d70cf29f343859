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

#ifndef SWARMDP_GENERATE_HPP
#define SWARMDP_GENERATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "swarmdp/dikw.hpp"

namespace swarmdp {

// Declarative derived column. Formulas reference source columns (or earlier
// derived columns) by id:
//   "<col> / <col>"   (also +, -, *)
//   "nearest_centroid_distance(<col>, ...)"  — Euclidean distance to the
//   nearest class centroid, centroids fitted on a seeded 50% subsample.
struct DerivedColumn {
  std::string name;
  std::string formula;
  Modal modal = Modal::kInformation;
  Category category = Category::kWhat;
};

struct GenSpec {
  std::string source_file = "data/iris.csv";
  std::uint64_t seed = 0;
  std::vector<DerivedColumn> derived;  // see default_derived_columns()
  double spatial_jitter = 0.25;
  std::int64_t time_span = 31536000;  // seconds of synthetic history
};

// Ratio columns as the Information layer, a centroid-distance discriminant
// as the Knowledge layer.
std::vector<DerivedColumn> default_derived_columns();

GenSpec default_gen_spec();

// Wraps a 4-numeric-columns-plus-class table into the DIKW model: the raw
// measurements become Data items (first two tagged Where, last two When,
// all four carrying synthetic coordinates and timestamps), derived columns
// add Information and Knowledge items, and purpose edges link each
// Information column to its sources. Deterministic given (file bytes, spec).
DikwDataset generate_iris_dikw(const GenSpec& spec);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Structural invariants plus generation-specific expectations: Data,
// Information and Knowledge all non-empty; DDP, IDP and KDP each mask at
// least one item; purpose edges well-formed.
ValidationReport validate_generated(const DikwDataset& dataset);

}  // namespace swarmdp

#endif  // SWARMDP_GENERATE_HPP
