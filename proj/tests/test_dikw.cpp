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

#include <fstream>
#include <set>
#include <sstream>

#include "swarmdp/dataset_io.hpp"
#include "swarmdp/dikw.hpp"
#include "swarmdp/errors.hpp"
#include "test_support.hpp"

using namespace swarmdp;
using namespace swarmdp::test;

namespace {

// Category sets stated independently of the implementation's switch.
const std::set<Category> kTable[6] = {
    /* DDP  */ {Category::kWho, Category::kWhen, Category::kWhere},
    /* IDP  */ {Category::kWhat},
    /* KDP  */ {Category::kHow},
    /* DIDP */ {Category::kWho, Category::kWhen, Category::kWhere, Category::kWhat},
    /* IKDP */ {Category::kHow, Category::kWhat},
    /* DIKDP*/ {Category::kWho, Category::kWhat, Category::kWhen, Category::kWhere,
                Category::kWhy, Category::kHow},
};
const PrivacyMode kCategoryModes[6] = {PrivacyMode::kDdp,  PrivacyMode::kIdp,
                                       PrivacyMode::kKdp,  PrivacyMode::kDidp,
                                       PrivacyMode::kIkdp, PrivacyMode::kDikdp};
const Category kAllCategories[7] = {Category::kWho,   Category::kWhat, Category::kWhen,
                                    Category::kWhere, Category::kWhy,  Category::kHow,
                                    Category::kPurposeTag};

// One numeric item per category, no class label.
DikwDataset one_item_per_category() {
  std::vector<DikwItem> items;
  for (const Category c : kAllCategories)
    items.push_back(numeric_item(std::string(category_name(c)) + "_item", Modal::kData, c));
  return make_dataset(std::move(items),
                      {{1, 2, 3, 4, 5, 6, 7}, {2, 3, 4, 5, 6, 7, 8}});
}

const std::string kIrisSchema = R"(format_version: 1

[column sepal_length]
modal: data
category: where
kind: numeric

[column sepal_width]
modal: data
category: where
kind: numeric

[column petal_length]
modal: data
category: when
kind: numeric

[column petal_width]
modal: data
category: when
kind: numeric

[column species]
modal: data
category: who
kind: categorical
labels: setosa, versicolor, virginica
class_label: true
)";

DikwDataset load_iris_with_schema() {
  std::ifstream data(iris_path());
  REQUIRE(data.good());
  std::istringstream schema(kIrisSchema);
  return load_dataset(data, "iris.csv", schema, "iris.schema");
}

}  // namespace

TEST_CASE("mode selection matches the category table on all 42 mode/category pairs") {
  const DikwDataset ds = one_item_per_category();
  for (int m = 0; m < 6; ++m) {
    const MaskPlan mask = mode_mask(ds, kCategoryModes[m]);
    for (int i = 0; i < ds.item_count(); ++i) {
      const Category c = ds.items[static_cast<std::size_t>(i)].category;
      CHECK_MESSAGE(mask.selected(i) == (kTable[m].count(c) > 0),
                    mode_name(kCategoryModes[m]), " x ", category_name(c));
    }
  }
  // PDP without edges selects nothing, whatever the categories.
  const MaskPlan pdp = mode_mask(ds, PrivacyMode::kPdp);
  CHECK(pdp.selected_count() == 0);
}

TEST_CASE("DIKDP contains every category-based mode; union identities hold") {
  const DikwDataset ds = one_item_per_category();
  const MaskPlan dikdp = mode_mask(ds, PrivacyMode::kDikdp);
  for (const PrivacyMode m : kCategoryModes) {
    const MaskPlan mask = mode_mask(ds, m);
    for (int i = 0; i < ds.item_count(); ++i)
      if (mask.selected(i)) CHECK(dikdp.selected(i));
  }
  const MaskPlan ddp = mode_mask(ds, PrivacyMode::kDdp);
  const MaskPlan idp = mode_mask(ds, PrivacyMode::kIdp);
  const MaskPlan kdp = mode_mask(ds, PrivacyMode::kKdp);
  const MaskPlan didp = mode_mask(ds, PrivacyMode::kDidp);
  const MaskPlan ikdp = mode_mask(ds, PrivacyMode::kIkdp);
  for (int i = 0; i < ds.item_count(); ++i) {
    CHECK(didp.selected(i) == (ddp.selected(i) || idp.selected(i)));
    CHECK(ikdp.selected(i) == (idp.selected(i) || kdp.selected(i)));
  }
}

TEST_CASE("PDP selects exactly the items incident to purpose edges") {
  DikwDataset ds = one_item_per_category();
  ds.purpose_edges.push_back({"what_item", "who_item", "derived_from"});
  const MaskPlan mask = mode_mask(ds, PrivacyMode::kPdp);
  CHECK(mask.selected("what_item"));
  CHECK(mask.selected("who_item"));
  CHECK(mask.selected_count() == 2);
}

TEST_CASE("the class label never enters a mask") {
  std::vector<DikwItem> items = {
      numeric_item("a", Modal::kData, Category::kWho),
      categorical_item("label", Modal::kData, Category::kWho, {"x", "y"}),
  };
  DikwDataset ds = make_dataset(std::move(items), {{1, 0}, {2, 1}});
  ds.class_label = "label";
  ds.purpose_edges.push_back({"a", "label", ""});
  for (const PrivacyMode m : all_modes()) CHECK_FALSE(mode_mask(ds, m).selected("label"));
  CHECK_THROWS_AS(MaskPlan(ds, {true, true}), ValidationError);
}

TEST_CASE("iris loads with 150 records and species as the class label") {
  const DikwDataset ds = load_iris_with_schema();
  CHECK(ds.record_count() == 150);
  CHECK(ds.item_count() == 5);
  REQUIRE(ds.class_label.has_value());
  CHECK(*ds.class_label == "species");
  CHECK(ds.item("species").labels ==
        std::vector<std::string>{"setosa", "versicolor", "virginica"});
  CHECK(ds.records(0, 0) == 5.1);
}

TEST_CASE("header-only data section loads as a valid empty dataset") {
  std::istringstream data("a,b\n");
  std::istringstream schema(
      "format_version: 1\n[column a]\nmodal: data\ncategory: who\nkind: numeric\n"
      "[column b]\nmodal: information\ncategory: what\nkind: numeric\n");
  const DikwDataset ds = load_dataset(data, "d", schema, "s");
  CHECK(ds.record_count() == 0);
  CHECK(ds.item_count() == 2);
}

TEST_CASE("loader errors carry the offending position") {
  const std::string schema_a =
      "format_version: 1\n[column a]\nmodal: data\ncategory: who\nkind: numeric\n";

  SUBCASE("missing schema entry names the column") {
    std::istringstream data("a,petal_len\n1,2\n");
    std::istringstream schema(schema_a);
    CHECK_THROWS_WITH_AS(load_dataset(data, "d", schema, "s"),
                         doctest::Contains("petal_len"), ValidationError);
  }
  SUBCASE("ragged row names the row") {
    std::istringstream data("a\n1\n2,3\n");
    std::istringstream schema(schema_a);
    CHECK_THROWS_WITH_AS(load_dataset(data, "d", schema, "s"), doctest::Contains("row 3"),
                         ValidationError);
  }
  SUBCASE("unparseable numeric names row and column") {
    std::istringstream data("a\n1\nxyz\n");
    std::istringstream schema(schema_a);
    CHECK_THROWS_WITH_AS(load_dataset(data, "d", schema, "s"), doctest::Contains("xyz"),
                         ValidationError);
  }
  SUBCASE("duplicate column ids are rejected") {
    std::istringstream data("a,a\n1,2\n");
    std::istringstream schema(schema_a);
    CHECK_THROWS_WITH_AS(load_dataset(data, "d", schema, "s"),
                         doctest::Contains("duplicate"), ValidationError);
  }
  SUBCASE("categorical value outside the declared label set") {
    std::istringstream data("c\nred\nblau\n");
    std::istringstream schema(
        "format_version: 1\n[column c]\nmodal: data\ncategory: who\nkind: categorical\n"
        "labels: red, green\n");
    CHECK_THROWS_WITH_AS(load_dataset(data, "d", schema, "s"), doctest::Contains("blau"),
                         ValidationError);
  }
  SUBCASE("schema column absent from the data header") {
    std::istringstream data("a\n1\n");
    std::istringstream schema(schema_a +
                              "[column ghost]\nmodal: data\ncategory: who\nkind: numeric\n");
    CHECK_THROWS_WITH_AS(load_dataset(data, "d", schema, "s"), doctest::Contains("ghost"),
                         ValidationError);
  }
}

TEST_CASE("structural invariants are collected") {
  DikwDataset ds = one_item_per_category();
  ds.purpose_edges.push_back({"who_item", "who_item", ""});
  ds.purpose_edges.push_back({"who_item", "nowhere", ""});
  const auto violations = ds.collect_violations();
  REQUIRE(violations.size() == 2);
  CHECK(violations[0].find("self-loop") != std::string::npos);
  CHECK(violations[1].find("missing endpoint") != std::string::npos);
}

TEST_CASE("load -> save -> load is the identity on items, records and edges") {
  DikwDataset ds = load_iris_with_schema();
  ds.purpose_edges.push_back({"sepal_length", "petal_length", "linked"});
  ds.items[0].spatial = Eigen::Vector2d(0.125, -3.5);
  ds.items[2].timestamp = 1609459200;

  std::ostringstream data_out, schema_out;
  save_dataset(ds, data_out, schema_out);
  std::istringstream data_in(data_out.str()), schema_in(schema_out.str());
  const DikwDataset back = load_dataset(data_in, "d", schema_in, "s");

  REQUIRE(back.item_count() == ds.item_count());
  for (int i = 0; i < ds.item_count(); ++i) {
    const auto& a = ds.items[static_cast<std::size_t>(i)];
    const auto& b = back.items[static_cast<std::size_t>(i)];
    CHECK(a.id == b.id);
    CHECK(a.modal == b.modal);
    CHECK(a.category == b.category);
    CHECK(a.kind == b.kind);
    CHECK(a.labels == b.labels);
    CHECK(a.spatial.has_value() == b.spatial.has_value());
    if (a.spatial) CHECK((*a.spatial - *b.spatial).norm() == 0.0);
    CHECK(a.timestamp == b.timestamp);
  }
  REQUIRE(back.record_count() == ds.record_count());
  CHECK((back.records - ds.records).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.purpose_edges.size() == ds.purpose_edges.size());
  CHECK(back.purpose_edges[0].from == "sepal_length");
  CHECK(back.purpose_edges[0].label == "linked");
  CHECK(back.class_label == ds.class_label);

  // A second round trip reproduces the exact bytes.
  std::ostringstream data_again, schema_again;
  save_dataset(back, data_again, schema_again);
  CHECK(data_again.str() == data_out.str());
  CHECK(schema_again.str() == schema_out.str());
}
