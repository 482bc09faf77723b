// Copyright 2026 The mmsynth Authors.
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

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmsynth/dsl.hpp"

namespace mmsynth {

// One input/output example. For regexes the input is the string itself; for
// CSS selectors it is a node path such as "/0/2" (see css.hpp).
struct Example {
  std::string input;
  bool output = false;

  friend bool operator==(const Example&, const Example&) = default;
};

using Words = std::vector<std::uint64_t>;

// Denotation of terms over one fixed example set, split in two layers:
//
//  * a full value, rich enough to evaluate any parent operator, and
//  * an interpretation, the projection used for equivalence classes and the
//    consistency check.
//
// The engine memoizes full values only for terms it expands further, and
// asks for `interpret_apply` on freshly built terms, so domains should make
// that path cheap.
class Semantics {
 public:
  virtual ~Semantics() = default;

  virtual Words constant_value(const Term& c) = 0;
  virtual Words apply(OpIndex op, std::span<const Words* const> kids) = 0;
  virtual Words project(SortId sort, const Words& value) = 0;
  virtual Words interpret_apply(OpIndex op, SortId ret_sort,
                                std::span<const Words* const> kids) {
    return project(ret_sort, apply(op, kids));
  }
  // Whether a closed-sort interpretation agrees with every expected output.
  virtual bool consistent(const Words& interpretation) const = 0;
};

// Surface syntax of a DSL.
class Domain {
 public:
  virtual ~Domain() = default;
  virtual const Dsl& dsl() const = 0;
  virtual std::string name() const = 0;
  virtual std::string print(const Term& t) const = 0;
  // Throws ParseError.
  virtual Term parse(std::string_view src) const = 0;
};

// Interpretation of `t` computed bottom-up through `sem`.
// Unprojected value of `t`.
Words evaluate(Semantics& sem, const Term& t);
Words interpret(Semantics& sem, const Dsl& dsl, const Term& t);
bool consistent(Semantics& sem, const Dsl& dsl, const Term& t);

}  // namespace mmsynth
