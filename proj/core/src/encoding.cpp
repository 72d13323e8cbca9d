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

#include "lam/encoding.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "lam/error.hpp"
#include "lam/random.hpp"

namespace lam
{

DataTable one_hot_encode(const DataTable& table, const std::vector<std::string>& features)
{
  const auto names = features.empty() ? table.schema().input_features() : features;
  if (names.empty()) {
    throw ConfigError("nothing to encode: no input features selected");
  }

  EncodedView view;
  std::vector<std::size_t> source;
  std::size_t width = 0;
  for (const auto& name : names) {
    const auto col = table.schema().index_of(name);
    EncodedFeature block;
    block.name = name;
    block.first_column = width;
    // Declared levels count even when a subset of rows never shows them.
    std::set<std::string> levels(table.schema().features()[col].levels.begin(),
                                 table.schema().features()[col].levels.end());
    for (auto& level : table.observed_levels(col)) {
      levels.insert(std::move(level));
    }
    block.levels.assign(levels.begin(), levels.end());
    block.binary = block.levels.size() == 2 ||
                   (table.schema().features()[col].kind == FeatureKind::kBinary &&
                    block.levels.size() <= 2);
    if (block.binary) {
      view.column_names.push_back(name + "=" + block.levels.back());
    } else {
      for (const auto& level : block.levels) {
        view.column_names.push_back(name + "=" + level);
      }
    }
    width += block.width();
    source.push_back(col);
    view.features.push_back(std::move(block));
  }

  view.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(table.rows()),
                                      static_cast<Eigen::Index>(width));
  for (std::size_t f = 0; f < view.features.size(); ++f) {
    const auto& block = view.features[f];
    const auto& values = table.column(source[f]);
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const auto it = std::lower_bound(block.levels.begin(), block.levels.end(), values[r]);
      const auto level = static_cast<std::size_t>(it - block.levels.begin());
      if (block.binary) {
        if (block.levels.size() == 2 && level == 1) {
          view.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(block.first_column)) =
              1.0;
        }
      } else {
        view.matrix(static_cast<Eigen::Index>(r),
                    static_cast<Eigen::Index>(block.first_column + level)) = 1.0;
      }
    }
  }
  return table.with_encoding(std::move(view));
}

std::vector<std::vector<std::string>> decode_one_hot(const EncodedView& view)
{
  std::vector<std::vector<std::string>> out(view.features.size());
  const auto rows = static_cast<std::size_t>(view.matrix.rows());
  for (std::size_t f = 0; f < view.features.size(); ++f) {
    const auto& block = view.features[f];
    out[f].reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = static_cast<Eigen::Index>(r);
      const auto first = static_cast<Eigen::Index>(block.first_column);
      if (block.binary) {
        const double v = view.matrix(row, first);
        if (v != 0.0 && v != 1.0) {
          throw DataError("binary column of '" + block.name + "' holds " + std::to_string(v));
        }
        const std::size_t level = v == 1.0 ? 1 : 0;
        if (level >= block.levels.size()) {
          throw DataError("binary column of '" + block.name + "' set without a second level");
        }
        out[f].push_back(block.levels[level]);
        continue;
      }
      std::size_t hot = block.levels.size();
      for (std::size_t k = 0; k < block.levels.size(); ++k) {
        const double v = view.matrix(row, first + static_cast<Eigen::Index>(k));
        if (v == 1.0) {
          if (hot != block.levels.size()) {
            throw DataError("two hot columns for '" + block.name + "'");
          }
          hot = k;
        } else if (v != 0.0) {
          throw DataError("one-hot column of '" + block.name + "' holds " + std::to_string(v));
        }
      }
      if (hot == block.levels.size()) {
        throw DataError("no hot column for '" + block.name + "'");
      }
      out[f].push_back(block.levels[hot]);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> split_subset_indices(std::size_t rows, std::size_t n_subsets,
                                                           std::size_t subset_size,
                                                           std::uint64_t seed)
{
  if (n_subsets == 0 || subset_size == 0) {
    throw ConfigError("subset count and size must be positive");
  }
  if (n_subsets > rows / subset_size) {
    throw ConfigError("cannot draw " + std::to_string(n_subsets) + " subsets of " +
                      std::to_string(subset_size) + " from " + std::to_string(rows) + " rows");
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> subsets(n_subsets);
  for (std::size_t s = 0; s < n_subsets; ++s) {
    subsets[s].assign(order.begin() + static_cast<std::ptrdiff_t>(s * subset_size),
                      order.begin() + static_cast<std::ptrdiff_t>((s + 1) * subset_size));
  }
  return subsets;
}

std::vector<DataTable> split_subsets(const DataTable& table, std::size_t n_subsets,
                                     std::size_t subset_size, std::uint64_t seed)
{
  std::vector<DataTable> out;
  for (const auto& indices : split_subset_indices(table.rows(), n_subsets, subset_size, seed)) {
    out.push_back(table.select_rows(indices));
  }
  return out;
}

}  // namespace lam
