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

#include "swarmdp/dikw.hpp"

#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "swarmdp/errors.hpp"
#include "swarmdp/text.hpp"

namespace swarmdp {

std::string_view modal_name(Modal m) {
  switch (m) {
    case Modal::kData: return "data";
    case Modal::kInformation: return "information";
    case Modal::kKnowledge: return "knowledge";
    case Modal::kPurpose: return "purpose";
  }
  return "?";
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::kWho: return "who";
    case Category::kWhat: return "what";
    case Category::kWhen: return "when";
    case Category::kWhere: return "where";
    case Category::kWhy: return "why";
    case Category::kHow: return "how";
    case Category::kPurposeTag: return "purpose";
  }
  return "?";
}

std::string_view kind_name(ValueKind k) {
  return k == ValueKind::kNumeric ? "numeric" : "categorical";
}

std::string_view mode_name(PrivacyMode m) {
  switch (m) {
    case PrivacyMode::kDdp: return "DDP";
    case PrivacyMode::kIdp: return "IDP";
    case PrivacyMode::kKdp: return "KDP";
    case PrivacyMode::kDidp: return "DIDP";
    case PrivacyMode::kIkdp: return "IKDP";
    case PrivacyMode::kDikdp: return "DIKDP";
    case PrivacyMode::kPdp: return "PDP";
  }
  return "?";
}

Modal parse_modal(std::string_view s) {
  const auto t = to_lower(trim(s));
  if (t == "data") return Modal::kData;
  if (t == "information") return Modal::kInformation;
  if (t == "knowledge") return Modal::kKnowledge;
  if (t == "purpose") return Modal::kPurpose;
  throw ValidationError("unknown modal '" + std::string(s) + "'");
}

Category parse_category(std::string_view s) {
  const auto t = to_lower(trim(s));
  if (t == "who") return Category::kWho;
  if (t == "what") return Category::kWhat;
  if (t == "when") return Category::kWhen;
  if (t == "where") return Category::kWhere;
  if (t == "why") return Category::kWhy;
  if (t == "how") return Category::kHow;
  if (t == "purpose") return Category::kPurposeTag;
  throw ValidationError("unknown category '" + std::string(s) + "'");
}

ValueKind parse_kind(std::string_view s) {
  const auto t = to_lower(trim(s));
  if (t == "numeric") return ValueKind::kNumeric;
  if (t == "categorical") return ValueKind::kCategorical;
  throw ValidationError("unknown value kind '" + std::string(s) + "'");
}

PrivacyMode parse_mode(std::string_view s) {
  const auto t = to_lower(trim(s));
  if (t == "ddp") return PrivacyMode::kDdp;
  if (t == "idp") return PrivacyMode::kIdp;
  if (t == "kdp") return PrivacyMode::kKdp;
  if (t == "didp") return PrivacyMode::kDidp;
  if (t == "ikdp") return PrivacyMode::kIkdp;
  if (t == "dikdp") return PrivacyMode::kDikdp;
  if (t == "pdp") return PrivacyMode::kPdp;
  throw ValidationError("unknown privacy mode '" + std::string(s) + "'");
}

int DikwItem::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

int DikwDataset::item_index(std::string_view id) const {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].id == id) return static_cast<int>(i);
  return -1;
}

const DikwItem& DikwDataset::item(std::string_view id) const {
  const int i = item_index(id);
  if (i < 0) throw ValidationError("no item with id '" + std::string(id) + "'");
  return items[static_cast<std::size_t>(i)];
}

bool DikwDataset::is_class_label(int index) const {
  return class_label && item_index(*class_label) == index;
}

int DikwDataset::class_label_index() const {
  return class_label ? item_index(*class_label) : -1;
}

std::vector<std::string> DikwDataset::collect_violations() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& it : items) {
    if (!seen.insert(it.id).second) out.push_back("duplicate item id '" + it.id + "'");
    if (it.kind == ValueKind::kCategorical && it.labels.empty())
      out.push_back("categorical item '" + it.id + "' declares no labels");
  }
  if (records.cols() != item_count())
    out.push_back("record matrix has " + fmt_int(records.cols()) + " columns for " +
                  fmt_int(item_count()) + " items");
  for (int c = 0; c < item_count() && c < records.cols(); ++c) {
    const auto& it = items[static_cast<std::size_t>(c)];
    for (int r = 0; r < record_count(); ++r) {
      const double v = records(r, c);
      if (it.kind == ValueKind::kNumeric) {
        if (!std::isfinite(v)) {
          out.push_back("item '" + it.id + "' record " + fmt_int(r) +
                        " holds a non-finite value");
          break;
        }
      } else {
        const int li = static_cast<int>(v);
        if (v != std::floor(v) || li < 0 ||
            li >= static_cast<int>(it.labels.size())) {
          out.push_back("item '" + it.id + "' record " + fmt_int(r) +
                        " holds a value outside the declared label set");
          break;
        }
      }
    }
  }
  for (const auto& e : purpose_edges) {
    const bool from_ok = item_index(e.from) >= 0;
    const bool to_ok = item_index(e.to) >= 0;
    if (!from_ok || !to_ok)
      out.push_back("purpose edge '" + e.from + "' -> '" + e.to +
                    "' has a missing endpoint");
    else if (e.from == e.to)
      out.push_back("purpose edge '" + e.from + "' -> '" + e.to + "' is a self-loop");
  }
  if (class_label) {
    const int li = item_index(*class_label);
    if (li < 0)
      out.push_back("class label '" + *class_label + "' names no item");
    else if (items[static_cast<std::size_t>(li)].kind != ValueKind::kCategorical)
      out.push_back("class label '" + *class_label + "' must be categorical");
  }
  return out;
}

void DikwDataset::validate() const {
  const auto v = collect_violations();
  if (!v.empty()) throw ValidationError(v.front());
}

MaskPlan::MaskPlan(const DikwDataset& dataset, std::vector<bool> selected)
    : selected_(std::move(selected)) {
  if (static_cast<int>(selected_.size()) != dataset.item_count())
    throw ValidationError("mask covers " + fmt_int(selected_.size()) +
                          " items, dataset has " + fmt_int(dataset.item_count()));
  item_ids_.reserve(dataset.items.size());
  for (const auto& it : dataset.items) item_ids_.push_back(it.id);
  const int label = dataset.class_label_index();
  if (label >= 0 && selected_[static_cast<std::size_t>(label)])
    throw ValidationError("class label '" + *dataset.class_label +
                          "' cannot be selected for noising");
}

MaskPlan MaskPlan::none(const DikwDataset& dataset) {
  return MaskPlan(dataset,
                  std::vector<bool>(static_cast<std::size_t>(dataset.item_count()), false));
}

bool MaskPlan::selected(std::string_view id) const {
  for (std::size_t i = 0; i < item_ids_.size(); ++i)
    if (item_ids_[i] == id) return selected_[i];
  throw ValidationError("mask has no item '" + std::string(id) + "'");
}

int MaskPlan::selected_count() const {
  int n = 0;
  for (const bool b : selected_) n += b ? 1 : 0;
  return n;
}

bool MaskPlan::covers(const DikwDataset& dataset) const {
  if (static_cast<int>(item_ids_.size()) != dataset.item_count()) return false;
  for (std::size_t i = 0; i < item_ids_.size(); ++i)
    if (item_ids_[i] != dataset.items[i].id) return false;
  return true;
}

bool mode_selects_category(PrivacyMode mode, Category c) {
  switch (mode) {
    case PrivacyMode::kDdp:
      return c == Category::kWho || c == Category::kWhen || c == Category::kWhere;
    case PrivacyMode::kIdp:
      return c == Category::kWhat;
    case PrivacyMode::kKdp:
      return c == Category::kHow;
    case PrivacyMode::kDidp:
      return mode_selects_category(PrivacyMode::kDdp, c) ||
             mode_selects_category(PrivacyMode::kIdp, c);
    case PrivacyMode::kIkdp:
      return c == Category::kHow || c == Category::kWhat;
    case PrivacyMode::kDikdp:
      return c != Category::kPurposeTag;
    case PrivacyMode::kPdp:
      return false;
  }
  return false;
}

MaskPlan mode_mask(const DikwDataset& dataset, PrivacyMode mode) {
  std::vector<bool> sel(static_cast<std::size_t>(dataset.item_count()), false);
  if (mode == PrivacyMode::kPdp) {
    std::unordered_set<std::string> incident;
    for (const auto& e : dataset.purpose_edges) {
      incident.insert(e.from);
      incident.insert(e.to);
    }
    for (int i = 0; i < dataset.item_count(); ++i)
      sel[static_cast<std::size_t>(i)] =
          incident.count(dataset.items[static_cast<std::size_t>(i)].id) > 0;
  } else {
    for (int i = 0; i < dataset.item_count(); ++i)
      sel[static_cast<std::size_t>(i)] =
          mode_selects_category(mode, dataset.items[static_cast<std::size_t>(i)].category);
  }
  const int label = dataset.class_label_index();
  if (label >= 0) sel[static_cast<std::size_t>(label)] = false;
  return MaskPlan(dataset, std::move(sel));
}

std::vector<PrivacyMode> all_modes() {
  return {PrivacyMode::kDdp,  PrivacyMode::kIdp,  PrivacyMode::kKdp,
          PrivacyMode::kDidp, PrivacyMode::kIkdp, PrivacyMode::kDikdp,
          PrivacyMode::kPdp};
}

}  // namespace swarmdp
