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

#include "swarmdp/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "swarmdp/errors.hpp"
#include "swarmdp/kv.hpp"
#include "swarmdp/text.hpp"

namespace swarmdp {

namespace {

struct SchemaEntry {
  DikwItem item;
  bool class_label = false;
};

struct Schema {
  std::unordered_map<std::string, SchemaEntry> columns;
  std::vector<PurposeEdge> edges;
};

Schema parse_schema(std::istream& in, std::string_view name) {
  const KvFile file = parse_kv(in, name);
  Schema schema;
  for (const auto& block : file.blocks) {
    if (block.kind == "column") {
      if (block.name.empty())
        throw ValidationError(std::string(name) + ":" + fmt_int(block.line) +
                              ": [column] block needs a column id");
      SchemaEntry entry;
      DikwItem& item = entry.item;
      item.id = block.name;
      item.name = block.get_or("name", block.name);
      item.modal = parse_modal(block.get("modal"));
      item.category = parse_category(block.get("category"));
      item.kind = parse_kind(block.get("kind"));
      if (item.kind == ValueKind::kCategorical) {
        item.labels = split_list(block.get("labels"));
        if (item.labels.empty())
          throw ValidationError("column '" + item.id + "': empty label set");
      } else if (block.has("labels")) {
        throw ValidationError("column '" + item.id + "': labels given for a numeric column");
      }
      if (const auto sp = block.find("spatial")) {
        std::istringstream ss(*sp);
        double x = 0, y = 0;
        if (!(ss >> x >> y))
          throw ValidationError("column '" + item.id + "': spatial wants two numbers, got '" +
                                *sp + "'");
        item.spatial = Eigen::Vector2d(x, y);
      }
      if (const auto ts = block.find("time"))
        item.timestamp = parse_int(*ts, "column '" + item.id + "' time");
      if (const auto cl = block.find("class_label"))
        entry.class_label = parse_bool(*cl, "class_label");
      if (!schema.columns.emplace(item.id, std::move(entry)).second)
        throw ValidationError("schema defines column '" + block.name + "' twice");
    } else if (block.kind == "edge") {
      PurposeEdge edge;
      edge.from = block.get("from");
      edge.to = block.get("to");
      edge.label = block.get_or("label", "");
      schema.edges.push_back(std::move(edge));
    } else {
      throw ValidationError(std::string(name) + ":" + fmt_int(block.line) +
                            ": unknown block kind '" + block.kind + "'");
    }
  }
  return schema;
}

}  // namespace

DikwDataset load_dataset(std::istream& data, std::string_view data_name,
                         std::istream& schema_in, std::string_view schema_name) {
  Schema schema = parse_schema(schema_in, schema_name);

  std::string line;
  int line_no = 0;
  // Leading '#' comment lines may carry metadata; only format_version is
  // recognized today.
  for (;;) {
    if (!std::getline(data, line))
      throw ValidationError(std::string(data_name) + ": no header row");
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto body = trim(t.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string_view::npos &&
          trim(body.substr(0, colon)) == "format_version") {
        const auto v = parse_int(body.substr(colon + 1), "format_version");
        if (v != 1)
          throw ValidationError(std::string(data_name) + ": unsupported format_version " +
                                fmt_int(v));
      }
      continue;
    }
    break;
  }

  const std::vector<std::string> header = split(trim(line), ',');
  DikwDataset ds;
  std::unordered_map<std::string, int> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string id(trim(header[c]));
    if (id.empty())
      throw ValidationError(std::string(data_name) + ": empty header name in column " +
                            fmt_int(c + 1));
    const auto dup = seen.find(id);
    if (dup != seen.end())
      throw ValidationError(std::string(data_name) + ": duplicate column id '" + id +
                            "' (columns " + fmt_int(dup->second + 1) + " and " +
                            fmt_int(c + 1) + ")");
    seen.emplace(id, static_cast<int>(c));
    const auto entry = schema.columns.find(id);
    if (entry == schema.columns.end())
      throw ValidationError(std::string(schema_name) + ": no schema entry for column '" +
                            id + "'");
    ds.items.push_back(entry->second.item);
    if (entry->second.class_label) {
      if (ds.class_label)
        throw ValidationError(std::string(schema_name) +
                              ": more than one column marked class_label");
      ds.class_label = id;
    }
  }
  for (const auto& [id, entry] : schema.columns)
    if (!seen.count(id))
      throw ValidationError(std::string(schema_name) + ": schema declares column '" + id +
                            "' absent from the data header");

  const int cols = static_cast<int>(header.size());
  std::vector<double> values;
  int rows = 0;
  while (std::getline(data, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (static_cast<int>(fields.size()) != cols)
      throw ValidationError(std::string(data_name) + ": row " + fmt_int(line_no) +
                            ": expected " + fmt_int(cols) + " fields, got " +
                            fmt_int(fields.size()));
    for (int c = 0; c < cols; ++c) {
      const auto& item = ds.items[static_cast<std::size_t>(c)];
      const auto field = trim(fields[static_cast<std::size_t>(c)]);
      if (item.kind == ValueKind::kNumeric) {
        double v = 0;
        try {
          v = parse_double(field, "numeric value");
        } catch (const ValidationError&) {
          throw ValidationError(std::string(data_name) + ": row " + fmt_int(line_no) +
                                ", column '" + item.id + "': cannot parse '" +
                                std::string(field) + "' as numeric");
        }
        values.push_back(v);
      } else {
        const int li = item.label_index(field);
        if (li < 0)
          throw ValidationError(std::string(data_name) + ": row " + fmt_int(line_no) +
                                ", column '" + item.id + "': value '" + std::string(field) +
                                "' not in the declared label set");
        values.push_back(static_cast<double>(li));
      }
    }
    ++rows;
  }

  ds.records.resize(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      ds.records(r, c) = values[static_cast<std::size_t>(r) * cols + c];
  ds.purpose_edges = std::move(schema.edges);
  ds.validate();
  return ds;
}

DikwDataset load_dataset(const std::string& data_path, const std::string& schema_path) {
  std::ifstream data(data_path);
  if (!data) throw ValidationError("cannot open '" + data_path + "'");
  std::ifstream schema(schema_path);
  if (!schema) throw ValidationError("cannot open '" + schema_path + "'");
  return load_dataset(data, data_path, schema, schema_path);
}

void save_dataset(const DikwDataset& dataset, std::ostream& data, std::ostream& schema) {
  dataset.validate();
  for (const auto& it : dataset.items) {
    if (it.id.find(',') != std::string::npos)
      throw ValidationError("item id '" + it.id + "' contains a comma");
    for (const auto& l : it.labels)
      if (l.find(',') != std::string::npos)
        throw ValidationError("label '" + l + "' of item '" + it.id + "' contains a comma");
  }

  data << "# format_version: 1\n";
  for (int c = 0; c < dataset.item_count(); ++c)
    data << (c ? "," : "") << dataset.items[static_cast<std::size_t>(c)].id;
  data << "\n";
  for (int r = 0; r < dataset.record_count(); ++r) {
    for (int c = 0; c < dataset.item_count(); ++c) {
      const auto& it = dataset.items[static_cast<std::size_t>(c)];
      if (c) data << ",";
      if (it.kind == ValueKind::kNumeric)
        data << fmt_double(dataset.records(r, c));
      else
        data << it.labels[static_cast<std::size_t>(static_cast<int>(dataset.records(r, c)))];
    }
    data << "\n";
  }

  KvFile file;
  for (int c = 0; c < dataset.item_count(); ++c) {
    const auto& it = dataset.items[static_cast<std::size_t>(c)];
    KvBlock block;
    block.kind = "column";
    block.name = it.id;
    if (it.name != it.id) block.entries.emplace_back("name", it.name);
    block.entries.emplace_back("modal", std::string(modal_name(it.modal)));
    block.entries.emplace_back("category", std::string(category_name(it.category)));
    block.entries.emplace_back("kind", std::string(kind_name(it.kind)));
    if (!it.labels.empty()) {
      std::string joined;
      for (const auto& l : it.labels) joined += (joined.empty() ? "" : ", ") + l;
      block.entries.emplace_back("labels", joined);
    }
    if (it.spatial)
      block.entries.emplace_back(
          "spatial", fmt_double(it.spatial->x()) + " " + fmt_double(it.spatial->y()));
    if (it.timestamp) block.entries.emplace_back("time", fmt_int(*it.timestamp));
    if (dataset.is_class_label(c)) block.entries.emplace_back("class_label", "true");
    file.blocks.push_back(std::move(block));
  }
  for (const auto& e : dataset.purpose_edges) {
    KvBlock block;
    block.kind = "edge";
    block.entries.emplace_back("from", e.from);
    block.entries.emplace_back("to", e.to);
    if (!e.label.empty()) block.entries.emplace_back("label", e.label);
    file.blocks.push_back(std::move(block));
  }
  write_kv(schema, file);
}

void save_dataset(const DikwDataset& dataset, const std::string& data_path,
                  const std::string& schema_path) {
  std::ofstream data(data_path);
  if (!data) throw ValidationError("cannot write '" + data_path + "'");
  std::ofstream schema(schema_path);
  if (!schema) throw ValidationError("cannot write '" + schema_path + "'");
  save_dataset(dataset, data, schema);
}

}  // namespace swarmdp
