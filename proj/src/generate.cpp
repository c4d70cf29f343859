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

#include "swarmdp/generate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "swarmdp/errors.hpp"
#include "swarmdp/random.hpp"
#include "swarmdp/text.hpp"

namespace swarmdp {

namespace {

struct RawTable {
  std::vector<std::string> numeric_names;  // first columns
  Eigen::MatrixXd numeric;                 // records x numeric columns
  std::string class_name;                  // last column
  std::vector<std::string> class_labels;   // first-appearance order
  std::vector<int> class_values;
};

RawTable load_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::string line;
  int line_no = 0;
  do {
    if (!std::getline(in, line)) throw ValidationError(path + ": no header row");
    ++line_no;
  } while (trim(line).empty() || trim(line).front() == '#');

  const auto header = split(trim(line), ',');
  if (header.size() != 5)
    throw ValidationError(path + ": want 4 numeric columns + 1 class column, got " +
                          fmt_int(header.size()) + " columns");
  RawTable table;
  for (std::size_t c = 0; c + 1 < header.size(); ++c)
    table.numeric_names.emplace_back(trim(header[c]));
  table.class_name = std::string(trim(header.back()));

  std::vector<double> values;
  std::map<std::string, int> label_of;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (fields.size() != header.size())
      throw ValidationError(path + ": row " + fmt_int(line_no) + ": expected " +
                            fmt_int(header.size()) + " fields, got " +
                            fmt_int(fields.size()));
    for (std::size_t c = 0; c + 1 < fields.size(); ++c)
      values.push_back(parse_double(fields[c], path + " row " + fmt_int(line_no)));
    const std::string label(trim(fields.back()));
    auto [it, inserted] = label_of.emplace(label, static_cast<int>(table.class_labels.size()));
    if (inserted) table.class_labels.push_back(label);
    table.class_values.push_back(it->second);
  }
  const auto rows = static_cast<Eigen::Index>(table.class_values.size());
  table.numeric.resize(rows, 4);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
      table.numeric(r, c) = values[static_cast<std::size_t>(r) * 4 + static_cast<std::size_t>(c)];
  return table;
}

// Column store while derived columns are evaluated in declaration order.
struct ColumnPool {
  std::vector<std::string> names;
  std::vector<Eigen::VectorXd> columns;

  const Eigen::VectorXd& get(std::string_view name, std::string_view formula) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return columns[i];
    throw ValidationError("formula '" + std::string(formula) +
                          "' references unknown column '" + std::string(name) + "'");
  }
};

Eigen::VectorXd eval_centroid_distance(const ColumnPool& pool, std::string_view args,
                                       std::string_view formula,
                                       const std::vector<int>& class_values,
                                       int class_count, std::uint64_t seed) {
  const auto arg_names = split_list(args);
  if (arg_names.empty())
    throw ValidationError("formula '" + std::string(formula) + "' needs column arguments");
  std::vector<const Eigen::VectorXd*> cols;
  for (const auto& a : arg_names) cols.push_back(&pool.get(a, formula));
  const auto rows = static_cast<Eigen::Index>(class_values.size());
  const auto dims = static_cast<Eigen::Index>(cols.size());

  // Centroids come from a seeded half of the records, so the column is
  // informative without memorizing every record.
  std::vector<int> order(static_cast<std::size_t>(rows));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  Rng rng(derive_seed(seed, "centroid-subsample"));
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.uniform_int(i)]);
  const std::size_t take = order.size() / 2;

  Eigen::MatrixXd centroid = Eigen::MatrixXd::Zero(class_count, dims);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(class_count);
  for (std::size_t i = 0; i < take; ++i) {
    const int r = order[i];
    const int c = class_values[static_cast<std::size_t>(r)];
    for (Eigen::Index d = 0; d < dims; ++d) centroid(c, d) += (*cols[static_cast<std::size_t>(d)])[r];
    counts[c] += 1.0;
  }
  for (int c = 0; c < class_count; ++c)
    if (counts[c] > 0) centroid.row(c) /= counts[c];

  Eigen::VectorXd out(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < class_count; ++c) {
      if (counts[c] <= 0) continue;
      double d2 = 0.0;
      for (Eigen::Index d = 0; d < dims; ++d) {
        const double diff = (*cols[static_cast<std::size_t>(d)])[r] - centroid(c, d);
        d2 += diff * diff;
      }
      best = std::min(best, std::sqrt(d2));
    }
    out[r] = best;
  }
  return out;
}

Eigen::VectorXd eval_formula(const ColumnPool& pool, const std::string& formula,
                             const std::vector<int>& class_values, int class_count,
                             std::uint64_t seed) {
  const auto body = trim(formula);
  const auto open = body.find('(');
  if (open != std::string_view::npos && body.back() == ')') {
    const auto fn = trim(body.substr(0, open));
    const auto args = body.substr(open + 1, body.size() - open - 2);
    if (fn == "nearest_centroid_distance")
      return eval_centroid_distance(pool, args, formula, class_values, class_count, seed);
    throw ValidationError("formula '" + formula + "': unknown function '" +
                          std::string(fn) + "'");
  }
  for (const char op : {'/', '*', '+', '-'}) {
    const auto pos = body.find(op);
    if (pos == std::string_view::npos) continue;
    const auto lhs = pool.get(trim(body.substr(0, pos)), formula);
    const auto rhs = pool.get(trim(body.substr(pos + 1)), formula);
    switch (op) {
      case '/': return (lhs.array() / rhs.array()).matrix();
      case '*': return (lhs.array() * rhs.array()).matrix();
      case '+': return lhs + rhs;
      case '-': return lhs - rhs;
    }
  }
  return pool.get(body, formula);  // bare column reference
}

// Column ids occurring in a formula, for purpose edges.
std::vector<std::string> formula_references(const ColumnPool& pool,
                                            const std::string& formula) {
  std::vector<std::string> out;
  std::string token;
  const auto flush = [&]() {
    const std::string t = std::move(token);
    token.clear();
    if (t.empty() || t == "nearest_centroid_distance") return;
    for (std::size_t i = 0; i < pool.names.size(); ++i) {
      if (pool.names[i] != t) continue;
      if (std::find(out.begin(), out.end(), pool.names[i]) == out.end())
        out.push_back(pool.names[i]);
      return;
    }
  };
  for (const char ch : formula) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
      token += ch;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace

std::vector<DerivedColumn> default_derived_columns() {
  return {
      {"petal_ratio", "petal_length / petal_width", Modal::kInformation, Category::kWhat},
      {"sepal_ratio", "sepal_length / sepal_width", Modal::kInformation, Category::kWhat},
      {"centroid_distance",
       "nearest_centroid_distance(sepal_length, sepal_width, petal_length, petal_width)",
       Modal::kKnowledge, Category::kHow},
  };
}

GenSpec default_gen_spec() {
  GenSpec spec;
  spec.derived = default_derived_columns();
  return spec;
}

DikwDataset generate_iris_dikw(const GenSpec& spec) {
  const RawTable raw = load_raw(spec.source_file);
  const auto rows = raw.numeric.rows();
  if (static_cast<int>(raw.class_labels.size()) < 1)
    throw ValidationError(spec.source_file + ": class column has no labels");

  DikwDataset ds;
  ColumnPool pool;
  Rng meta_rng(derive_seed(spec.seed, "item-metadata"));
  for (Eigen::Index c = 0; c < 4; ++c) {
    DikwItem item;
    item.id = raw.numeric_names[static_cast<std::size_t>(c)];
    item.name = item.id;
    item.modal = Modal::kData;
    item.category = c < 2 ? Category::kWhere : Category::kWhen;
    item.kind = ValueKind::kNumeric;
    // Synthetic placement: a 2x2 grid cell per measurement plus seeded
    // jitter, and a timestamp uniform over the configured span.
    const double gx = static_cast<double>(c % 2);
    const double gy = static_cast<double>(c / 2);
    item.spatial = Eigen::Vector2d(
        gx + spec.spatial_jitter * meta_rng.uniform(-1.0, 1.0),
        gy + spec.spatial_jitter * meta_rng.uniform(-1.0, 1.0));
    item.timestamp = static_cast<std::int64_t>(
        meta_rng.uniform(0.0, static_cast<double>(spec.time_span)));
    ds.items.push_back(item);
    pool.names.push_back(item.id);
    pool.columns.push_back(raw.numeric.col(c));
  }

  for (const auto& d : spec.derived) {
    if (std::find(pool.names.begin(), pool.names.end(), d.name) != pool.names.end())
      throw ValidationError("derived column '" + d.name + "' collides with an existing column");
    const Eigen::VectorXd column =
        eval_formula(pool, d.formula, raw.class_values,
                     static_cast<int>(raw.class_labels.size()), spec.seed);
    for (Eigen::Index r = 0; r < column.size(); ++r)
      if (!std::isfinite(column[r]))
        throw ValidationError("derived column '" + d.name + "' yields a non-finite value at record " +
                              fmt_int(r));
    DikwItem item;
    item.id = d.name;
    item.name = d.name;
    item.modal = d.modal;
    item.category = d.category;
    item.kind = ValueKind::kNumeric;
    ds.items.push_back(item);
    if (d.modal == Modal::kInformation)
      for (const auto& src : formula_references(pool, d.formula))
        ds.purpose_edges.push_back(PurposeEdge{d.name, src, "derived_from"});
    pool.names.push_back(d.name);
    pool.columns.push_back(column);
  }

  DikwItem label;
  label.id = raw.class_name;
  label.name = raw.class_name;
  label.modal = Modal::kData;
  label.category = Category::kWho;
  label.kind = ValueKind::kCategorical;
  label.labels = raw.class_labels;
  ds.items.push_back(label);
  ds.class_label = label.id;

  ds.records.resize(rows, static_cast<Eigen::Index>(pool.columns.size()) + 1);
  for (std::size_t c = 0; c < pool.columns.size(); ++c)
    ds.records.col(static_cast<Eigen::Index>(c)) = pool.columns[c];
  for (Eigen::Index r = 0; r < rows; ++r)
    ds.records(r, ds.records.cols() - 1) =
        static_cast<double>(raw.class_values[static_cast<std::size_t>(r)]);

  ds.validate();
  return ds;
}

ValidationReport validate_generated(const DikwDataset& dataset) {
  ValidationReport report;
  report.violations = dataset.collect_violations();
  for (const Modal m : {Modal::kData, Modal::kInformation, Modal::kKnowledge}) {
    bool any = false;
    for (const auto& it : dataset.items) any = any || it.modal == m;
    if (!any)
      report.violations.push_back("no item carries modal '" + std::string(modal_name(m)) + "'");
  }
  for (const PrivacyMode mode : {PrivacyMode::kDdp, PrivacyMode::kIdp, PrivacyMode::kKdp}) {
    // Masking may reject a structurally broken dataset; report that instead.
    try {
      if (mode_mask(dataset, mode).selected_count() == 0)
        report.violations.push_back("mode " + std::string(mode_name(mode)) +
                                    " has an empty support");
    } catch (const ValidationError& e) {
      report.violations.push_back(e.what());
    }
  }
  return report;
}

}  // namespace swarmdp
