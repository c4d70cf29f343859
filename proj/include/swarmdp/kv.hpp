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

#ifndef SWARMDP_KV_HPP
#define SWARMDP_KV_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swarmdp {

// Block-structured key-value text. Schema files and experiment configs both
// use it:
//
//   # comment
//   format_version: 1
//
//   [column sepal_length]
//   modal: data
//   category: where
//
// A block header is "[kind]" or "[kind name]"; entries are "key: value"
// lines. Keys may repeat within a block (e.g. verifier "case:" lines).
struct KvBlock {
  std::string kind;
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
  int line = 0;  // 1-based line of the block header, for error messages

  bool has(std::string_view key) const;
  // Throws ValidationError when the key is missing or repeated.
  const std::string& get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  std::optional<std::string> find(std::string_view key) const;
  std::vector<std::string> get_all(std::string_view key) const;
};

struct KvFile {
  int format_version = 1;
  std::vector<std::pair<std::string, std::string>> header;  // entries before any block
  std::vector<KvBlock> blocks;

  const KvBlock* find_block(std::string_view kind) const;
  const KvBlock* find_block(std::string_view kind, std::string_view name) const;
  std::vector<const KvBlock*> blocks_of(std::string_view kind) const;
};

KvFile parse_kv(std::istream& in, std::string_view source_name);
KvFile parse_kv_file(const std::string& path);
void write_kv(std::ostream& out, const KvFile& file);

}  // namespace swarmdp

#endif  // SWARMDP_KV_HPP
