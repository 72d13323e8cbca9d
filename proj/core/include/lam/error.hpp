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

#ifndef LAM_ERROR_HPP_
#define LAM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lam
{

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// The input data cannot be used: unreadable file, bad value, empty table.
class DataError : public Error
{
public:
  using Error::Error;
};

/// A caller-supplied configuration (recipe, rule, parameter) is invalid.
class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace lam

#endif  // LAM_ERROR_HPP_
