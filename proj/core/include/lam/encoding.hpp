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

#ifndef LAM_ENCODING_HPP_
#define LAM_ENCODING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lam/data_table.hpp"

namespace lam
{

/// Populates the encoded view. Each feature contributes one column per
/// observed level, levels in lexicographic order; a feature with exactly two
/// observed levels (or declared binary) contributes a single 0/1 column.
/// Features are taken in the given order, or all input-role features in
/// schema order when `features` is empty.
DataTable one_hot_encode(const DataTable& table, const std::vector<std::string>& features = {});

/// Inverse of one_hot_encode: one string column per encoded feature. Throws
/// DataError when a block is not a valid one-hot row.
std::vector<std::vector<std::string>> decode_one_hot(const EncodedView& view);

/// `n_subsets` disjoint tables of `subset_size` rows drawn by a seeded
/// shuffle. Throws ConfigError when the table is too small.
std::vector<DataTable> split_subsets(const DataTable& table, std::size_t n_subsets,
                                     std::size_t subset_size, std::uint64_t seed);

/// Row indices behind split_subsets, for callers that keep a single table.
std::vector<std::vector<std::size_t>> split_subset_indices(std::size_t rows, std::size_t n_subsets,
                                                           std::size_t subset_size,
                                                           std::uint64_t seed);

}  // namespace lam

#endif  // LAM_ENCODING_HPP_
