// Copyright 2026 The fgaudit Authors
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

#ifndef FGAUDIT_ERRORS_H_
#define FGAUDIT_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fgaudit {

// Base class for every recoverable error raised by the library. Programming
// errors (violated preconditions) use std::invalid_argument / std::logic_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file: empty, ragged, unknown column, bad number.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Schema designation inconsistent with the data it is applied to.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// QI and sensitive tables of an anonymized pair disagree.
class GroupMismatchError : public Error {
 public:
  using Error::Error;
};

// The table admits no l-diverse partition of the requested shape.
class EligibilityError : public Error {
 public:
  using Error::Error;
};

class WorldExplosionError : public Error {
 public:
  WorldExplosionError(std::string group_label, double world_count,
                      std::uint64_t cap);

  const std::string& group_label() const { return group_label_; }
  double world_count() const { return world_count_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::string group_label_;
  double world_count_;
  std::uint64_t cap_;
};

}  // namespace fgaudit

#endif  // FGAUDIT_ERRORS_H_
