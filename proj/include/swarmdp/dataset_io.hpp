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

#ifndef SWARMDP_DATASET_IO_HPP
#define SWARMDP_DATASET_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>

#include "swarmdp/dikw.hpp"

namespace swarmdp {

// Data file: comma-separated, UTF-8, '.' decimal separator, one header row
// of item ids. An optional leading "# format_version: 1" comment carries the
// version; plain CSV without it is read as version 1.
//
// Schema file: block key-value text, one [column <id>] block per header name
// with keys modal / category / kind / labels / spatial / time / class_label,
// plus [edge] blocks with from / to / label. See README for the full format.
DikwDataset load_dataset(const std::string& data_path, const std::string& schema_path);
DikwDataset load_dataset(std::istream& data, std::string_view data_name,
                         std::istream& schema, std::string_view schema_name);

void save_dataset(const DikwDataset& dataset, const std::string& data_path,
                  const std::string& schema_path);
void save_dataset(const DikwDataset& dataset, std::ostream& data, std::ostream& schema);

}  // namespace swarmdp

#endif  // SWARMDP_DATASET_IO_HPP
