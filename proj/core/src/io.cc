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

#include "fgaudit/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "csv.h"
#include "fgaudit/errors.h"
#include "json.hpp"

namespace fgaudit {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  return out;
}

Target make_target(const SchemaConfig& config) {
  if (config.sensitive_values.empty()) {
    throw SchemaError("sensitive value set must not be empty");
  }
  return Target(std::set<std::string>(config.sensitive_values.begin(),
                                      config.sensitive_values.end()));
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Resolves bin widths to column positions of `attributes`.
std::vector<std::pair<std::size_t, double>> bin_columns(
    const std::vector<std::string>& attributes, const SchemaConfig& config) {
  std::vector<std::pair<std::size_t, double>> out;
  for (const auto& [name, width] : config.bin_widths) {
    auto it = std::find(attributes.begin(), attributes.end(), name);
    if (it == attributes.end()) {
      throw SchemaError("bin width given for unknown attribute '" + name + "'");
    }
    if (!(width > 0.0)) {
      throw SchemaError("bin width for '" + name + "' must be positive");
    }
    out.emplace_back(static_cast<std::size_t>(it - attributes.begin()), width);
  }
  return out;
}

void apply_bins(Row& row, const std::vector<std::pair<std::size_t, double>>& bins,
                std::size_t line) {
  for (const auto& [col, width] : bins) {
    const std::string& s = row[col];
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ParseError("non-numeric value '" + s + "' in binned column at line " +
                       std::to_string(line));
    }
    row[col] = bin_label(v, width);
  }
}

void check_target_observed(const Target& target,
                           const std::vector<std::string>& observed) {
  for (const auto& v : target.values()) {
    if (std::find(observed.begin(), observed.end(), v) == observed.end()) {
      throw SchemaError("sensitive value '" + v +
                        "' does not occur in the data");
    }
  }
}

}  // namespace

SchemaConfig parse_schema_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid config: ") + e.what());
  }
  SchemaConfig c;
  try {
    if (j.contains("qi_attributes")) {
      c.qi_attributes = j.at("qi_attributes").get<std::vector<std::string>>();
    }
    if (j.contains("sensitive_attribute")) {
      c.sensitive_attribute = j.at("sensitive_attribute").get<std::string>();
    }
    if (j.contains("sensitive_value_set")) {
      const auto& v = j.at("sensitive_value_set");
      if (v.is_string()) {
        c.sensitive_values = {v.get<std::string>()};
      } else {
        c.sensitive_values = v.get<std::vector<std::string>>();
      }
    }
    if (j.contains("missing_marker") && !j.at("missing_marker").is_null()) {
      c.missing_marker = j.at("missing_marker").get<std::string>();
    }
    if (j.contains("bin_widths")) {
      c.bin_widths = j.at("bin_widths").get<std::map<std::string, double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid config: ") + e.what());
  }
  return c;
}

SchemaConfig load_schema_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_schema_config(ss.str());
}

std::string bin_label(double value, double width) {
  double lo = std::floor(value / width) * width;
  return format_number(lo) + "-" + format_number(lo + width);
}

Table read_table(std::istream& in, const SchemaConfig& config) {
  csv::Document doc = csv::read(in);
  if (doc.records.empty()) throw ParseError("empty file: header row only");
  Schema schema = Schema::create(doc.header, config.qi_attributes,
                                 config.sensitive_attribute, make_target(config));
  auto bins = bin_columns(schema.attributes(), config);
  const std::size_t arity = doc.header.size();

  std::vector<Row> rows;
  rows.reserve(doc.records.size());
  std::vector<std::string> observed;
  for (auto& rec : doc.records) {
    if (rec.fields.size() != arity) {
      throw ParseError("ragged row at line " + std::to_string(rec.line) +
                       ": expected " + std::to_string(arity) + " values, got " +
                       std::to_string(rec.fields.size()));
    }
    if (config.missing_marker &&
        std::find(rec.fields.begin(), rec.fields.end(), *config.missing_marker) !=
            rec.fields.end()) {
      continue;
    }
    apply_bins(rec.fields, bins, rec.line);
    const std::string& s = rec.fields[schema.sensitive_column()];
    if (std::find(observed.begin(), observed.end(), s) == observed.end()) {
      observed.push_back(s);
    }
    rows.push_back(std::move(rec.fields));
  }
  if (rows.empty()) throw ParseError("empty file: every row had missing values");
  check_target_observed(schema.target(), observed);
  return Table(std::move(schema), std::move(rows));
}

Table load_table(const std::filesystem::path& path, const SchemaConfig& config) {
  auto in = open_input(path);
  return read_table(in, config);
}

void write_table(const Table& table, std::ostream& out) {
  csv::write_row(out, table.schema().attributes());
  for (const auto& row : table.rows()) csv::write_row(out, row);
}

AnonymizedDataset read_anonymized(std::istream& qi_in, std::istream& sensitive_in,
                                  const SchemaConfig& config) {
  csv::Document qi = csv::read(qi_in);
  csv::Document sens = csv::read(sensitive_in);

  auto gid_it = std::find(qi.header.begin(), qi.header.end(), kGidColumn);
  if (gid_it == qi.header.end()) throw ParseError("QI table has no GID column");
  const auto qi_gid_col = static_cast<std::size_t>(gid_it - qi.header.begin());

  std::vector<std::string> attributes;
  for (std::size_t i = 0; i < qi.header.size(); ++i) {
    if (i != qi_gid_col) attributes.push_back(qi.header[i]);
  }
  if (std::find(attributes.begin(), attributes.end(),
                config.sensitive_attribute) != attributes.end()) {
    throw SchemaError("QI table must not contain the sensitive attribute");
  }
  attributes.push_back(config.sensitive_attribute);
  Schema schema = Schema::create(attributes, config.qi_attributes,
                                 config.sensitive_attribute, make_target(config));
  // Bins apply to QI-table columns only; the last attribute is the sensitive one.
  std::vector<std::string> qi_table_attrs(attributes.begin(), attributes.end() - 1);
  auto bins = bin_columns(qi_table_attrs, config);

  if (qi.records.empty()) throw ParseError("empty file: QI table has no rows");

  std::vector<Row> qi_rows;
  std::vector<AGroup> groups;
  std::unordered_map<std::string, std::size_t> group_by_label;
  for (auto& rec : qi.records) {
    if (rec.fields.size() != qi.header.size()) {
      throw ParseError("ragged row at line " + std::to_string(rec.line) +
                       " of the QI table");
    }
    std::string label = rec.fields[qi_gid_col];
    rec.fields.erase(rec.fields.begin() + static_cast<std::ptrdiff_t>(qi_gid_col));
    apply_bins(rec.fields, bins, rec.line);
    Row projected;
    projected.reserve(schema.qi_columns().size());
    for (std::size_t c : schema.qi_columns()) projected.push_back(rec.fields[c]);

    auto [it, inserted] = group_by_label.try_emplace(label, groups.size());
    if (inserted) {
      AGroup g;
      g.label = label;
      groups.push_back(std::move(g));
    }
    groups[it->second].members.push_back(qi_rows.size());
    qi_rows.push_back(std::move(projected));
  }

  auto sg = std::find(sens.header.begin(), sens.header.end(), kGidColumn);
  auto sv = std::find(sens.header.begin(), sens.header.end(),
                      config.sensitive_attribute);
  if (sg == sens.header.end() || sv == sens.header.end()) {
    throw ParseError("sensitive table needs columns GID and " +
                     config.sensitive_attribute);
  }
  const auto sens_gid_col = static_cast<std::size_t>(sg - sens.header.begin());
  const auto sens_val_col = static_cast<std::size_t>(sv - sens.header.begin());
  std::vector<std::string> observed;
  for (const auto& rec : sens.records) {
    if (rec.fields.size() != sens.header.size()) {
      throw ParseError("ragged row at line " + std::to_string(rec.line) +
                       " of the sensitive table");
    }
    const std::string& label = rec.fields[sens_gid_col];
    auto it = group_by_label.find(label);
    if (it == group_by_label.end()) {
      throw GroupMismatchError("GID " + label +
                               " appears in the sensitive table only");
    }
    const std::string& value = rec.fields[sens_val_col];
    groups[it->second].sensitive_values.push_back(value);
    if (std::find(observed.begin(), observed.end(), value) == observed.end()) {
      observed.push_back(value);
    }
  }
  for (const auto& g : groups) {
    if (g.sensitive_values.empty()) {
      throw GroupMismatchError("GID " + g.label + " appears in the QI table only");
    }
    if (g.sensitive_values.size() != g.members.size()) {
      throw GroupMismatchError(
          "cardinality mismatch in group " + g.label + ": " +
          std::to_string(g.members.size()) + " QI rows but " +
          std::to_string(g.sensitive_values.size()) + " sensitive values");
    }
  }
  check_target_observed(schema.target(), observed);
  return AnonymizedDataset(std::move(schema), std::move(qi_rows),
                           std::move(groups));
}

AnonymizedDataset load_anonymized(const std::filesystem::path& qi_path,
                                  const std::filesystem::path& sensitive_path,
                                  const SchemaConfig& config) {
  auto qi = open_input(qi_path);
  auto sens = open_input(sensitive_path);
  return read_anonymized(qi, sens, config);
}

void write_anonymized(const AnonymizedDataset& dataset, std::ostream& qi_out,
                      std::ostream& sensitive_out) {
  const Schema& schema = dataset.schema();
  std::vector<std::string> header = schema.qi_attributes();
  header.emplace_back(kGidColumn);
  csv::write_row(qi_out, header);
  for (RowId r = 0; r < dataset.row_count(); ++r) {
    auto qi = dataset.qi_row(r);
    std::vector<std::string> fields(qi.begin(), qi.end());
    fields.push_back(dataset.group_of(r).label);
    csv::write_row(qi_out, fields);
  }

  csv::write_row(sensitive_out, {kGidColumn, schema.sensitive_attribute()});
  for (const auto& g : dataset.groups()) {
    std::vector<std::string> values = g.sensitive_values;
    std::sort(values.begin(), values.end());
    for (auto& v : values) csv::write_row(sensitive_out, {g.label, v});
  }
}

void save_anonymized(const AnonymizedDataset& dataset,
                     const std::filesystem::path& qi_path,
                     const std::filesystem::path& sensitive_path) {
  auto qi = open_output(qi_path);
  auto sens = open_output(sensitive_path);
  write_anonymized(dataset, qi, sens);
}

}  // namespace fgaudit
