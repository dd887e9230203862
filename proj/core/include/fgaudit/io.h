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

// File formats.
//
//   Raw table:       comma-delimited, header row, one column per attribute.
//   QI table:        QI columns followed by a "GID" column, one row per tuple.
//   Sensitive table: "GID,<sensitive attribute>", one row per tuple.
//
// Row ids of an anonymized dataset are QI-table row positions. Order within a
// group in the sensitive table carries no meaning; the writer sorts values
// within each group so no linkage leaks through file order.

#ifndef FGAUDIT_IO_H_
#define FGAUDIT_IO_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fgaudit/dataset.h"

namespace fgaudit {

inline constexpr char kGidColumn[] = "GID";

// Designation of QI / sensitive attributes and load-time cleaning rules.
struct SchemaConfig {
  std::vector<std::string> qi_attributes;
  std::string sensitive_attribute;
  std::vector<std::string> sensitive_values;
  // Rows of a raw table containing this value in any column are dropped.
  std::optional<std::string> missing_marker;
  // Numeric attributes replaced by "lo-hi" bins of the given width.
  std::map<std::string, double> bin_widths;
};

// Reads a JSON config with keys qi_attributes, sensitive_attribute,
// sensitive_value_set, missing_marker, bin_widths. Throws ParseError.
SchemaConfig load_schema_config(const std::filesystem::path& path);
SchemaConfig parse_schema_config(const std::string& json_text);

// Label of the bin of width `width` containing `value`, e.g. 37 / 10 -> "30-40".
std::string bin_label(double value, double width);

Table read_table(std::istream& in, const SchemaConfig& config);
Table load_table(const std::filesystem::path& path, const SchemaConfig& config);
void write_table(const Table& table, std::ostream& out);

AnonymizedDataset read_anonymized(std::istream& qi_in, std::istream& sensitive_in,
                                  const SchemaConfig& config);
AnonymizedDataset load_anonymized(const std::filesystem::path& qi_path,
                                  const std::filesystem::path& sensitive_path,
                                  const SchemaConfig& config);

void write_anonymized(const AnonymizedDataset& dataset, std::ostream& qi_out,
                      std::ostream& sensitive_out);
void save_anonymized(const AnonymizedDataset& dataset,
                     const std::filesystem::path& qi_path,
                     const std::filesystem::path& sensitive_path);

}  // namespace fgaudit

#endif  // FGAUDIT_IO_H_
