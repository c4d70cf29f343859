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

#ifndef SWARMDP_TESTS_TEST_SUPPORT_HPP
#define SWARMDP_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "swarmdp/dikw.hpp"
#include "swarmdp/generate.hpp"
#include "swarmdp/random.hpp"

namespace swarmdp::test {

inline std::string data_dir() { return SWARMDP_DATA_DIR; }
inline std::string iris_path() { return data_dir() + "/iris.csv"; }

inline DikwItem numeric_item(std::string id, Modal modal, Category category) {
  DikwItem item;
  item.id = std::move(id);
  item.name = item.id;
  item.modal = modal;
  item.category = category;
  item.kind = ValueKind::kNumeric;
  return item;
}

inline DikwItem categorical_item(std::string id, Modal modal, Category category,
                                 std::vector<std::string> labels) {
  DikwItem item = numeric_item(std::move(id), modal, category);
  item.kind = ValueKind::kCategorical;
  item.labels = std::move(labels);
  return item;
}

// Rows are records; the column count must match the item count.
inline DikwDataset make_dataset(std::vector<DikwItem> items,
                                const std::vector<std::vector<double>>& rows) {
  DikwDataset ds;
  ds.items = std::move(items);
  ds.records.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(ds.items.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      ds.records(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return ds;
}

inline GenSpec iris_gen_spec(std::uint64_t seed = 0) {
  GenSpec spec = default_gen_spec();
  spec.source_file = iris_path();
  spec.seed = seed;
  return spec;
}

// Box-Muller on the deterministic stream; test data only.
inline double normal_draw(Rng& rng, double mean, double stddev) {
  double u1 = rng.next_double();
  if (u1 == 0.0) u1 = 0x1.0p-53;
  const double u2 = rng.next_double();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  return mean + stddev * z;
}

}  // namespace swarmdp::test

#endif  // SWARMDP_TESTS_TEST_SUPPORT_HPP
