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

#include "fgaudit/dataset.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "fgaudit/errors.h"

namespace fgaudit {
namespace {

// Unit separator; never appears in CSV text we accept as a value.
constexpr char kKeySeparator = '\x1f';

}  // namespace

Target::Target(std::set<std::string> values)
    : values_(values.begin(), values.end()) {
  if (values_.empty()) {
    throw std::invalid_argument("sensitive value set must not be empty");
  }
}

bool Target::contains(std::string_view value) const {
  return values_.find(value) != values_.end();
}

std::string Target::label() const {
  std::string out;
  for (const auto& v : values_) {
    if (!out.empty()) out += '|';
    out += v;
  }
  return out;
}

Schema Schema::create(std::vector<std::string> attributes,
                      std::vector<std::string> qi_attributes,
                      std::string sensitive_attribute, Target target) {
  Schema s;
  s.attributes_ = std::move(attributes);
  std::unordered_set<std::string> seen;
  for (const auto& a : s.attributes_) {
    if (!seen.insert(a).second) {
      throw SchemaError("duplicate attribute '" + a + "'");
    }
  }
  auto sensitive = s.attribute_index(sensitive_attribute);
  if (!sensitive) {
    throw SchemaError("sensitive attribute '" + sensitive_attribute +
                      "' not found");
  }
  if (qi_attributes.empty()) {
    throw SchemaError("at least one QI attribute is required");
  }
  if (target.empty()) {
    throw SchemaError("sensitive value set must not be empty");
  }
  std::vector<std::size_t> columns;
  for (const auto& q : qi_attributes) {
    auto col = s.attribute_index(q);
    if (!col) throw SchemaError("QI attribute '" + q + "' not found");
    if (*col == *sensitive) {
      throw SchemaError("sensitive attribute '" + q + "' cannot be a QI");
    }
    if (std::find(columns.begin(), columns.end(), *col) != columns.end()) {
      throw SchemaError("duplicate QI attribute '" + q + "'");
    }
    columns.push_back(*col);
  }
  std::sort(columns.begin(), columns.end());
  for (std::size_t c : columns) s.qi_attributes_.push_back(s.attributes_[c]);
  s.qi_columns_ = std::move(columns);
  s.sensitive_attribute_ = std::move(sensitive_attribute);
  s.sensitive_column_ = *sensitive;
  s.target_ = std::move(target);
  return s;
}

std::optional<std::size_t> Schema::attribute_index(std::string_view name) const {
  auto it = std::find(attributes_.begin(), attributes_.end(), name);
  if (it == attributes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - attributes_.begin());
}

std::optional<std::size_t> Schema::qi_index(std::string_view name) const {
  auto it = std::find(qi_attributes_.begin(), qi_attributes_.end(), name);
  if (it == qi_attributes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - qi_attributes_.begin());
}

Table::Table(Schema schema, std::vector<Row> rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  const std::size_t arity = schema_.attributes().size();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != arity) {
      throw ParseError("ragged row " + std::to_string(i) + ": expected " +
                       std::to_string(arity) + " values, got " +
                       std::to_string(rows_[i].size()));
    }
  }
}

Row Table::qi_values(RowId id) const {
  const Row& r = rows_.at(id);
  Row out;
  out.reserve(schema_.qi_columns().size());
  for (std::size_t c : schema_.qi_columns()) out.push_back(r[c]);
  return out;
}

const std::string& Table::sensitive_value(RowId id) const {
  return rows_.at(id)[schema_.sensitive_column()];
}

std::size_t AGroup::count_in(const Target& target) const {
  return static_cast<std::size_t>(
      std::count_if(sensitive_values.begin(), sensitive_values.end(),
                    [&](const std::string& v) { return target.contains(v); }));
}

AnonymizedDataset::AnonymizedDataset(Schema schema, std::vector<Row> qi_rows,
                                     std::vector<AGroup> groups)
    : schema_(std::move(schema)),
      qi_rows_(std::move(qi_rows)),
      groups_(std::move(groups)) {
  const std::size_t arity = schema_.qi_attributes().size();
  for (std::size_t i = 0; i < qi_rows_.size(); ++i) {
    if (qi_rows_[i].size() != arity) {
      throw ParseError("QI row " + std::to_string(i) + " has " +
                       std::to_string(qi_rows_[i].size()) +
                       " values, expected " + std::to_string(arity));
    }
  }
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  group_index_.assign(qi_rows_.size(), kUnassigned);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    AGroup& group = groups_[g];
    group.gid = g;
    if (group.members.empty()) {
      throw GroupMismatchError("group " + group.label + " is empty");
    }
    if (group.members.size() != group.sensitive_values.size()) {
      throw GroupMismatchError(
          "cardinality mismatch in group " + group.label + ": " +
          std::to_string(group.members.size()) + " QI rows but " +
          std::to_string(group.sensitive_values.size()) + " sensitive values");
    }
    for (RowId r : group.members) {
      if (r >= qi_rows_.size()) {
        throw GroupMismatchError("group " + group.label +
                                 " references unknown row " + std::to_string(r));
      }
      if (group_index_[r] != kUnassigned) {
        throw GroupMismatchError("row " + std::to_string(r) +
                                 " appears in more than one group");
      }
      group_index_[r] = g;
    }
  }
  for (std::size_t r = 0; r < group_index_.size(); ++r) {
    if (group_index_[r] == kUnassigned) {
      throw GroupMismatchError("row " + std::to_string(r) +
                               " belongs to no group");
    }
  }
}

double AnonymizedDataset::base_rate(const Target& target) const {
  if (qi_rows_.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& g : groups_) hits += g.count_in(target);
  return static_cast<double>(hits) / static_cast<double>(qi_rows_.size());
}

std::vector<std::string> AnonymizedDataset::sensitive_domain() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& g : groups_) {
    for (const auto& v : g.sensitive_values) {
      if (seen.insert(v).second) out.push_back(v);
    }
  }
  return out;
}

Signature::Signature(std::vector<std::size_t> attributes,
                     std::vector<std::string> values)
    : attributes_(std::move(attributes)), values_(std::move(values)) {
  if (attributes_.empty()) {
    throw std::invalid_argument("signature attribute set must be non-empty");
  }
  if (attributes_.size() != values_.size()) {
    throw std::invalid_argument("signature needs one value per attribute");
  }
  for (std::size_t i = 1; i < attributes_.size(); ++i) {
    if (attributes_[i] <= attributes_[i - 1]) {
      throw std::invalid_argument(
          "signature attributes must be strictly increasing");
    }
  }
}

Signature Signature::from_pairs(
    const Schema& schema,
    std::vector<std::pair<std::string, std::string>> pairs) {
  std::vector<std::pair<std::size_t, std::string>> indexed;
  indexed.reserve(pairs.size());
  for (auto& [name, value] : pairs) {
    auto idx = schema.qi_index(name);
    if (!idx) {
      throw std::invalid_argument("'" + name + "' is not a QI attribute");
    }
    indexed.emplace_back(*idx, std::move(value));
  }
  std::sort(indexed.begin(), indexed.end());
  std::vector<std::size_t> attrs;
  std::vector<std::string> values;
  for (auto& [i, v] : indexed) {
    attrs.push_back(i);
    values.push_back(std::move(v));
  }
  return Signature(std::move(attrs), std::move(values));
}

Signature Signature::project(std::span<const std::string> tuple_qi,
                             std::span<const std::size_t> attributes) {
  std::vector<std::string> values;
  values.reserve(attributes.size());
  for (std::size_t a : attributes) values.push_back(tuple_qi[a]);
  return Signature({attributes.begin(), attributes.end()}, std::move(values));
}

std::string Signature::to_string(const Schema& schema) const {
  std::string out = "{";
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (i) out += ", ";
    out += schema.qi_attributes().at(attributes_[i]);
    out += '=';
    out += values_[i];
  }
  out += '}';
  return out;
}

std::string Signature::key() const {
  std::string out;
  for (const auto& v : values_) {
    out += v;
    out += kKeySeparator;
  }
  return out;
}

std::string projection_key(std::span<const std::string> tuple_qi,
                           std::span<const std::size_t> attributes) {
  std::string out;
  for (std::size_t a : attributes) {
    out += tuple_qi[a];
    out += kKeySeparator;
  }
  return out;
}

bool match(std::span<const std::string> tuple_qi, const Signature& signature) {
  const auto& attrs = signature.attributes();
  if (attrs.empty()) {
    throw std::invalid_argument("cannot match against an empty signature");
  }
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (attrs[i] >= tuple_qi.size()) {
      throw std::invalid_argument("signature attribute outside the tuple");
    }
    if (tuple_qi[attrs[i]] != signature.values()[i]) return false;
  }
  return true;
}

std::vector<RowId> group_signature_members(const AnonymizedDataset& dataset,
                                           const AGroup& group,
                                           const Signature& signature) {
  std::vector<RowId> out;
  for (RowId r : group.members) {
    if (match(dataset.qi_row(r), signature)) out.push_back(r);
  }
  return out;
}

}  // namespace fgaudit
