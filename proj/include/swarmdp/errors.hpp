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

#ifndef SWARMDP_ERRORS_HPP
#define SWARMDP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace swarmdp {

// Rejected input: malformed files, schema mismatches, out-of-range
// parameters. The CLI maps this to exit code 1; everything else to 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace swarmdp

#endif  // SWARMDP_ERRORS_HPP
