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

#ifndef LAM_SRC_BUILTINS_HPP_
#define LAM_SRC_BUILTINS_HPP_

#include <string_view>

namespace lam::detail
{

/// Text of a shipped recipe (data/recipes/<name>.recipe), or nullptr.
const char* builtin_recipe_text(std::string_view name);
/// Text of a shipped rule (data/rules/<name>.rule), or nullptr.
const char* builtin_rule_text(std::string_view name);

}  // namespace lam::detail

#endif  // LAM_SRC_BUILTINS_HPP_
