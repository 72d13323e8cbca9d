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

#include "lam/rational.hpp"

#include <numeric>

#include "lam/error.hpp"

namespace lam
{
namespace
{

__extension__ using Wide = __int128;

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator)
{
  if (denominator == 0) {
    throw Error("rational with zero denominator");
  }
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const std::int64_t g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

std::string Rational::to_string() const
{
  if (den_ == 1) {
    return std::to_string(num_);
  }
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator-(const Rational& a, const Rational& b)
{
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator+(const Rational& a, const Rational& b)
{
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
  const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  return lhs <=> rhs;
}

}  // namespace lam
