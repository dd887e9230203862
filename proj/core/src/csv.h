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

#ifndef FGAUDIT_SRC_CSV_H_
#define FGAUDIT_SRC_CSV_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fgaudit::csv {

struct Record {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

struct Document {
  std::vector<std::string> header;
  std::vector<Record> records;
};

// Comma-delimited with optional double-quoted fields ("" escapes a quote).
// Blank lines are skipped; a trailing '\r' is stripped. Throws ParseError if
// there is no header or a quoted field is unterminated.
Document read(std::istream& in);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace fgaudit::csv

#endif  // FGAUDIT_SRC_CSV_H_
