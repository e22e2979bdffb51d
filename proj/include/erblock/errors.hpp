// Copyright 2026 The erblock Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ERBLOCK_ERRORS_HPP_
#define ERBLOCK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace erblock {

// Bad run configuration: wrong mode/algorithm combination, unparsable
// config file, invalid option values.  CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: malformed triples under strict parsing, violated model
// invariants, unknown ids in block files.  CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A job exceeded its configured memory ceiling.  CLI exit code 3.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A user-supplied map or reduce function failed; the message identifies
// the offending record or key.
class JobError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace erblock

#endif  // ERBLOCK_ERRORS_HPP_
