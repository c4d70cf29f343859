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

#ifndef SWARMDP_DIKW_HPP
#define SWARMDP_DIKW_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace swarmdp {

// DIKW layer of an item. Purpose is the relation layer; items carrying it
// are rare but representable.
enum class Modal { kData, kInformation, kKnowledge, kPurpose };

// Semantic category routing an item to privacy modes. Mixed tagging
// (e.g. an Information item tagged Who) is allowed; selection goes by
// category alone.
enum class Category { kWho, kWhat, kWhen, kWhere, kWhy, kHow, kPurposeTag };

enum class ValueKind { kNumeric, kCategorical };

// Which DIKW slice receives noise. The first six select by category set;
// PDP selects items incident to purpose edges.
enum class PrivacyMode { kDdp, kIdp, kKdp, kDidp, kIkdp, kDikdp, kPdp };

std::string_view modal_name(Modal m);
std::string_view category_name(Category c);
std::string_view kind_name(ValueKind k);
std::string_view mode_name(PrivacyMode m);
Modal parse_modal(std::string_view s);
Category parse_category(std::string_view s);
ValueKind parse_kind(std::string_view s);
PrivacyMode parse_mode(std::string_view s);

// One dataset column. Categorical items hold indices into `labels`;
// numeric items hold finite reals. `spatial` and `timestamp` are optional
// metadata consumed by the spatial-temporal best weighting.
struct DikwItem {
  std::string id;
  std::string name;
  Modal modal = Modal::kData;
  Category category = Category::kWhat;
  ValueKind kind = ValueKind::kNumeric;
  std::vector<std::string> labels;
  std::optional<Eigen::Vector2d> spatial;
  std::optional<std::int64_t> timestamp;

  int label_index(std::string_view label) const;  // -1 if absent
};

// Directed relation between two items. Endpoints must exist and differ.
struct PurposeEdge {
  std::string from;
  std::string to;
  std::string label;
};

// Records-by-items matrix plus schema. Immutable after load by convention:
// every transformation returns a new dataset.
struct DikwDataset {
  std::vector<DikwItem> items;
  Eigen::MatrixXd records;  // records(r, c): column c of record r
  std::vector<PurposeEdge> purpose_edges;
  std::optional<std::string> class_label;

  int item_count() const { return static_cast<int>(items.size()); }
  int record_count() const { return static_cast<int>(records.rows()); }
  int item_index(std::string_view id) const;  // -1 if absent
  const DikwItem& item(std::string_view id) const;
  bool is_class_label(int index) const;
  int class_label_index() const;  // -1 when no label designated

  // Structural invariants as a list of human-readable violations.
  std::vector<std::string> collect_violations() const;
  // Throws ValidationError on the first violation.
  void validate() const;
};

// Boolean selection over the items of one dataset; selected items receive
// noise. The class label is never selectable.
class MaskPlan {
 public:
  MaskPlan() = default;
  MaskPlan(const DikwDataset& dataset, std::vector<bool> selected);

  static MaskPlan none(const DikwDataset& dataset);

  int size() const { return static_cast<int>(selected_.size()); }
  bool selected(int index) const { return selected_.at(index); }
  bool selected(std::string_view id) const;
  int selected_count() const;
  const std::vector<bool>& flags() const { return selected_; }
  const std::vector<std::string>& item_ids() const { return item_ids_; }
  bool covers(const DikwDataset& dataset) const;

  friend bool operator==(const MaskPlan&, const MaskPlan&) = default;

 private:
  std::vector<std::string> item_ids_;
  std::vector<bool> selected_;
};

// True when `mode` selects items of category `c`. PDP is incidence-based
// and always answers false here.
bool mode_selects_category(PrivacyMode mode, Category c);

// Category-set (or purpose-incidence) selection for one mode; the class
// label is forced unselected.
MaskPlan mode_mask(const DikwDataset& dataset, PrivacyMode mode);

std::vector<PrivacyMode> all_modes();

}  // namespace swarmdp

#endif  // SWARMDP_DIKW_HPP
