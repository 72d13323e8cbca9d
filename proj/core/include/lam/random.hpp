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

#ifndef LAM_RANDOM_HPP_
#define LAM_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace lam
{

/// Seeded generator whose derived draws are identical on every standard
/// library. std::mt19937_64 output is fixed by the standard; the
/// distribution classes are not, so index and real draws are done here.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n)
  {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw = engine_();
    while (draw >= limit) {
      draw = engine_();
    }
    return draw % n;
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values)
  {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(index(i));
      std::swap(values[i - 1], values[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace lam

#endif  // LAM_RANDOM_HPP_
