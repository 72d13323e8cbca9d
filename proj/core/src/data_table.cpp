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

#include "lam/data_table.hpp"

#include <set>

#include "lam/error.hpp"

namespace lam
{

RowId RowView::id() const { return table_->id(index_); }

const std::string& RowView::value(std::string_view feature) const
{
  return table_->at(index_, table_->schema().index_of(feature));
}

const std::string& RowView::value(std::size_t column) const { return table_->at(index_, column); }

const Schema& RowView::schema() const { return table_->schema(); }

DataTable::DataTable(Schema schema, std::vector<RowId> ids,
                     std::vector<std::vector<std::string>> columns)
{
  if (columns.size() != schema.size()) {
    throw DataError("table has " + std::to_string(columns.size()) + " columns but schema has " +
                    std::to_string(schema.size()));
  }
  for (const auto& col : columns) {
    if (col.size() != ids.size()) {
      throw DataError("ragged table: column length differs from row count");
    }
  }
  auto storage = std::make_shared<Storage>();
  storage->index.reserve(ids.size());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (!storage->index.emplace(ids[r], r).second) {
      throw DataError("duplicate row id " + std::to_string(ids[r]));
    }
  }
  storage->schema = std::move(schema);
  storage->ids = std::move(ids);
  storage->columns = std::move(columns);
  storage_ = std::move(storage);
}

std::optional<std::size_t> DataTable::row_index(RowId id) const
{
  const auto it = storage_->index.find(id);
  if (it == storage_->index.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<std::string> DataTable::observed_levels(std::size_t column) const
{
  const std::set<std::string> unique(storage_->columns[column].begin(),
                                     storage_->columns[column].end());
  return {unique.begin(), unique.end()};
}

DataTable DataTable::with_encoding(EncodedView view) const
{
  if (static_cast<std::size_t>(view.matrix.rows()) != rows()) {
    throw DataError("encoded view row count does not match table");
  }
  DataTable copy = *this;
  copy.encoded_ = std::make_shared<const EncodedView>(std::move(view));
  return copy;
}

DataTable DataTable::select_rows(std::span<const std::size_t> indices) const
{
  std::vector<RowId> ids;
  ids.reserve(indices.size());
  std::vector<std::vector<std::string>> columns(cols());
  for (auto& c : columns) {
    c.reserve(indices.size());
  }
  for (const auto r : indices) {
    if (r >= rows()) {
      throw DataError("row index out of range");
    }
    ids.push_back(id(r));
    for (std::size_t c = 0; c < cols(); ++c) {
      columns[c].push_back(at(r, c));
    }
  }
  DataTable out(schema(), std::move(ids), std::move(columns));
  if (encoded_) {
    EncodedView view;
    view.features = encoded_->features;
    view.column_names = encoded_->column_names;
    view.matrix.resize(static_cast<Eigen::Index>(indices.size()), encoded_->matrix.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
      view.matrix.row(static_cast<Eigen::Index>(i)) =
          encoded_->matrix.row(static_cast<Eigen::Index>(indices[i]));
    }
    out = out.with_encoding(std::move(view));
  }
  return out;
}

}  // namespace lam
