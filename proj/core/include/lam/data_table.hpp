// Copyright 2026 The lam-audit Authors
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

#ifndef LAM_DATA_TABLE_HPP_
#define LAM_DATA_TABLE_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lam/schema.hpp"

namespace lam
{

using RowId = std::int64_t;

/// One block of one-hot columns produced from a single feature.
struct EncodedFeature
{
  std::string name;
  std::size_t first_column = 0;
  /// Levels in column order. A binary block has one column that is 1 for
  /// levels[1] and 0 for levels[0].
  std::vector<std::string> levels;
  bool binary = false;

  std::size_t width() const { return binary ? 1 : levels.size(); }
};

/// Numeric one-hot matrix, one row per table row.
struct EncodedView
{
  Eigen::MatrixXd matrix;
  std::vector<EncodedFeature> features;
  std::vector<std::string> column_names;
};

class DataTable;

/// Borrowed handle on one row.
class RowView
{
public:
  RowView(const DataTable& table, std::size_t index) : table_(&table), index_(index) {}

  RowId id() const;
  std::size_t index() const { return index_; }
  /// Throws ConfigError when the feature is not in the schema.
  const std::string& value(std::string_view feature) const;
  const std::string& value(std::size_t column) const;
  const Schema& schema() const;

private:
  const DataTable* table_;
  std::size_t index_;
};

/// Immutable column-major table of string cells. Copies share storage.
class DataTable
{
public:
  DataTable() = default;
  /// `columns[c][r]` is the value of feature c in row r. Throws DataError
  /// when shapes disagree or row ids repeat.
  DataTable(Schema schema, std::vector<RowId> ids, std::vector<std::vector<std::string>> columns);

  const Schema& schema() const { return storage_->schema; }
  std::size_t rows() const { return storage_->ids.size(); }
  std::size_t cols() const { return storage_->columns.size(); }
  bool empty() const { return rows() == 0; }

  RowId id(std::size_t row) const { return storage_->ids[row]; }
  const std::vector<RowId>& ids() const { return storage_->ids; }
  std::optional<std::size_t> row_index(RowId id) const;

  const std::string& at(std::size_t row, std::size_t column) const
  {
    return storage_->columns[column][row];
  }
  const std::vector<std::string>& column(std::size_t column) const
  {
    return storage_->columns[column];
  }
  const std::vector<std::string>& column(std::string_view name) const
  {
    return storage_->columns[schema().index_of(name)];
  }
  RowView row(std::size_t index) const { return RowView(*this, index); }

  /// Distinct values of a column in lexicographic order.
  std::vector<std::string> observed_levels(std::size_t column) const;

  const EncodedView* encoded() const { return encoded_.get(); }
  DataTable with_encoding(EncodedView view) const;

  /// Subset of rows in the given order; the encoded view follows along.
  DataTable select_rows(std::span<const std::size_t> indices) const;

private:
  struct Storage
  {
    Schema schema;
    std::vector<RowId> ids;
    std::vector<std::vector<std::string>> columns;
    std::unordered_map<RowId, std::size_t> index;
  };

  std::shared_ptr<const Storage> storage_ = std::make_shared<Storage>();
  std::shared_ptr<const EncodedView> encoded_;
};

}  // namespace lam

#endif  // LAM_DATA_TABLE_HPP_
