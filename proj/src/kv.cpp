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

#include "swarmdp/kv.hpp"

#include <fstream>
#include <sstream>

#include "swarmdp/errors.hpp"
#include "swarmdp/text.hpp"

namespace swarmdp {

bool KvBlock::has(std::string_view key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return true;
  return false;
}

const std::string& KvBlock::get(std::string_view key) const {
  const std::string* found = nullptr;
  for (const auto& [k, v] : entries) {
    if (k != key) continue;
    if (found)
      throw ValidationError("[" + kind + (name.empty() ? "" : " " + name) +
                            "]: key '" + std::string(key) + "' given more than once");
    found = &v;
  }
  if (!found)
    throw ValidationError("[" + kind + (name.empty() ? "" : " " + name) +
                          "]: missing key '" + std::string(key) + "'");
  return *found;
}

std::string KvBlock::get_or(std::string_view key, std::string fallback) const {
  const auto v = find(key);
  return v ? *v : std::move(fallback);
}

std::optional<std::string> KvBlock::find(std::string_view key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::nullopt;
}

std::vector<std::string> KvBlock::get_all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries)
    if (k == key) out.push_back(v);
  return out;
}

const KvBlock* KvFile::find_block(std::string_view kind) const {
  for (const auto& b : blocks)
    if (b.kind == kind) return &b;
  return nullptr;
}

const KvBlock* KvFile::find_block(std::string_view kind, std::string_view name) const {
  for (const auto& b : blocks)
    if (b.kind == kind && b.name == name) return &b;
  return nullptr;
}

std::vector<const KvBlock*> KvFile::blocks_of(std::string_view kind) const {
  std::vector<const KvBlock*> out;
  for (const auto& b : blocks)
    if (b.kind == kind) out.push_back(&b);
  return out;
}

KvFile parse_kv(std::istream& in, std::string_view source_name) {
  KvFile file;
  KvBlock* current = nullptr;
  bool saw_version = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto where = [&] {
      return std::string(source_name) + ":" + fmt_int(line_no);
    };
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError(where() + ": unterminated block header '" +
                              std::string(line) + "'");
      const auto inner = trim(line.substr(1, line.size() - 2));
      if (inner.empty()) throw ValidationError(where() + ": empty block header");
      KvBlock block;
      block.line = line_no;
      const auto sp = inner.find(' ');
      if (sp == std::string_view::npos) {
        block.kind = std::string(inner);
      } else {
        block.kind = std::string(inner.substr(0, sp));
        block.name = std::string(trim(inner.substr(sp + 1)));
      }
      file.blocks.push_back(std::move(block));
      current = &file.blocks.back();
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ValidationError(where() + ": expected 'key: value', got '" +
                            std::string(line) + "'");
    std::string key(trim(line.substr(0, colon)));
    std::string value(trim(line.substr(colon + 1)));
    if (key.empty()) throw ValidationError(where() + ": empty key");
    if (!current && key == "format_version") {
      file.format_version = static_cast<int>(parse_int(value, "format_version"));
      saw_version = true;
      continue;
    }
    if (current)
      current->entries.emplace_back(std::move(key), std::move(value));
    else
      file.header.emplace_back(std::move(key), std::move(value));
  }
  if (saw_version && file.format_version != 1)
    throw ValidationError(std::string(source_name) + ": unsupported format_version " +
                          fmt_int(file.format_version));
  return file;
}

KvFile parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return parse_kv(in, path);
}

void write_kv(std::ostream& out, const KvFile& file) {
  out << "format_version: " << file.format_version << "\n";
  for (const auto& [k, v] : file.header) out << k << ": " << v << "\n";
  for (const auto& b : file.blocks) {
    out << "\n[" << b.kind;
    if (!b.name.empty()) out << " " << b.name;
    out << "]\n";
    for (const auto& [k, v] : b.entries) out << k << ": " << v << "\n";
  }
}

}  // namespace swarmdp
