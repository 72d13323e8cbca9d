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

#ifndef LAM_RATIONAL_HPP_
#define LAM_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <string>

namespace lam
{

/// Exact fraction with a positive denominator, always in lowest terms.
/// Group-metric counts stay far below 2^31, so products of two
/// denominators fit in 64 bits.
class Rational
{
public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  Rational abs() const { return Rational(num_ < 0 ? -num_ : num_, den_); }

  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace lam

#endif  // LAM_RATIONAL_HPP_
