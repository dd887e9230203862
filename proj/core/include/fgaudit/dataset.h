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

// In-memory model of raw tables and bucketized (QI table + sensitive table)
// datasets. All attribute values are categorical strings; numeric columns are
// binned at load time.

#ifndef FGAUDIT_DATASET_H_
#define FGAUDIT_DATASET_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fgaudit {

using RowId = std::size_t;
using Row = std::vector<std::string>;

// A set of sensitive values jointly treated as the value "x". Every value
// outside the set is collapsed to "not x" by the audit modules.
class Target {
 public:
  Target() = default;
  // Throws std::invalid_argument if `values` is empty.
  explicit Target(std::set<std::string> values);

  bool contains(std::string_view value) const;
  const std::set<std::string, std::less<>>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  // Values joined with '|', e.g. "1st-4th|5th-6th".
  std::string label() const;

  friend bool operator==(const Target&, const Target&) = default;
  friend auto operator<=>(const Target&, const Target&) = default;

 private:
  std::set<std::string, std::less<>> values_;
};

class Schema {
 public:
  Schema() = default;

  // Validates the designation and reorders `qi_attributes` into attribute
  // order so signatures have one canonical form. Throws SchemaError.
  static Schema create(std::vector<std::string> attributes,
                       std::vector<std::string> qi_attributes,
                       std::string sensitive_attribute, Target target);

  const std::vector<std::string>& attributes() const { return attributes_; }
  const std::vector<std::string>& qi_attributes() const {
    return qi_attributes_;
  }
  const std::string& sensitive_attribute() const {
    return sensitive_attribute_;
  }
  const Target& target() const { return target_; }

  std::optional<std::size_t> attribute_index(std::string_view name) const;
  std::optional<std::size_t> qi_index(std::string_view name) const;
  // Column of each QI attribute within `attributes()`.
  const std::vector<std::size_t>& qi_columns() const { return qi_columns_; }
  std::size_t sensitive_column() const { return sensitive_column_; }

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<std::string> attributes_;
  std::vector<std::string> qi_attributes_;
  std::string sensitive_attribute_;
  Target target_;
  std::vector<std::size_t> qi_columns_;
  std::size_t sensitive_column_ = 0;
};

// Raw relation. Row ids are dense positions 0..n-1.
class Table {
 public:
  Table() = default;
  // Throws ParseError on a row whose arity differs from the schema.
  Table(Schema schema, std::vector<Row> rows);

  const Schema& schema() const { return schema_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(RowId id) const { return rows_.at(id); }

  Row qi_values(RowId id) const;
  const std::string& sensitive_value(RowId id) const;

 private:
  Schema schema_;
  std::vector<Row> rows_;
};

// One A-group: member tuples plus the multiset of their sensitive values with
// the member-to-value linkage erased.
struct AGroup {
  std::size_t gid = 0;
  std::string label;
  std::vector<RowId> members;
  std::vector<std::string> sensitive_values;

  std::size_t size() const { return members.size(); }
  // Number of multiset entries that belong to `target` (n_x).
  std::size_t count_in(const Target& target) const;
};

class AnonymizedDataset {
 public:
  AnonymizedDataset() = default;
  // `qi_rows[i]` holds row i's values in schema().qi_attributes() order.
  // Throws GroupMismatchError unless the groups partition the rows and every
  // group's multiset matches its member count.
  AnonymizedDataset(Schema schema, std::vector<Row> qi_rows,
                    std::vector<AGroup> groups);

  const Schema& schema() const { return schema_; }
  std::size_t row_count() const { return qi_rows_.size(); }
  std::span<const std::string> qi_row(RowId id) const { return qi_rows_.at(id); }
  const std::vector<Row>& qi_rows() const { return qi_rows_; }
  const std::vector<AGroup>& groups() const { return groups_; }
  const AGroup& group_of(RowId id) const { return groups_[group_index_.at(id)]; }

  // Fraction of published sensitive values that belong to `target`.
  double base_rate(const Target& target) const;
  // Distinct sensitive values in first-seen group order.
  std::vector<std::string> sensitive_domain() const;

 private:
  Schema schema_;
  std::vector<Row> qi_rows_;
  std::vector<AGroup> groups_;
  std::vector<std::size_t> group_index_;
};

// Attribute-value pattern over a non-empty set of QI attributes, identified by
// their positions in Schema::qi_attributes() (strictly increasing).
class Signature {
 public:
  // Throws std::invalid_argument on an empty, unsorted, or duplicated
  // attribute list, or a value count that differs from it.
  Signature(std::vector<std::size_t> attributes,
            std::vector<std::string> values);

  // Builds from (attribute name, value) pairs in any order. Throws
  // std::invalid_argument for unknown or non-QI attributes.
  static Signature from_pairs(
      const Schema& schema,
      std::vector<std::pair<std::string, std::string>> pairs);

  // Projection of `tuple_qi` onto `attributes`.
  static Signature project(std::span<const std::string> tuple_qi,
                           std::span<const std::size_t> attributes);

  const std::vector<std::size_t>& attributes() const { return attributes_; }
  const std::vector<std::string>& values() const { return values_; }

  // "{Nationality=American, Sex=Male}"
  std::string to_string(const Schema& schema) const;
  // Hashable key; equal for equal signatures over the same attributes.
  std::string key() const;

  friend bool operator==(const Signature&, const Signature&) = default;
  friend auto operator<=>(const Signature&, const Signature&) = default;

 private:
  std::vector<std::size_t> attributes_;
  std::vector<std::string> values_;
};

// Key of the projection of `tuple_qi` onto `attributes`; equals
// Signature::key() of the matching signature.
std::string projection_key(std::span<const std::string> tuple_qi,
                           std::span<const std::size_t> attributes);

// True iff every (attribute, value) pair of `signature` agrees with the tuple.
bool match(std::span<const std::string> tuple_qi, const Signature& signature);

// Members of `group` whose QI values match `signature`, in stored order.
std::vector<RowId> group_signature_members(const AnonymizedDataset& dataset,
                                           const AGroup& group,
                                           const Signature& signature);

}  // namespace fgaudit

#endif  // FGAUDIT_DATASET_H_
