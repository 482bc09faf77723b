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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmsynth/term.hpp"

namespace mmsynth {

struct Sort {
  std::string name;
};

struct Operator {
  std::string name;
  std::vector<SortId> arg_sorts;
  SortId ret_sort = 0;
  OpIndex index = 0;
  // Semantically symmetric in its two arguments; expansion generates only
  // one of op(a,b) / op(b,a).
  bool commutative = false;

  std::size_t arity() const { return arg_sorts.size(); }
};

// A DSL: sorts, operators with signatures, the closed sort and the standard
// components. Constants are intensional and never enumerated here.
class Dsl {
 public:
  explicit Dsl(std::string name) : name_(std::move(name)) {}

  SortId add_sort(std::string name);
  OpIndex add_operator(std::string name, std::vector<SortId> arg_sorts,
                       SortId ret_sort, bool commutative = false);
  void set_closed_sort(SortId s);
  void add_standard_component(Term t);

  const std::string& name() const { return name_; }
  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<Operator>& operators() const { return operators_; }
  const Operator& op(OpIndex i) const { return operators_.at(i); }
  SortId closed_sort() const { return closed_sort_; }
  const std::vector<Term>& standard_components() const { return standard_; }

  std::optional<SortId> find_sort(std::string_view name) const;
  std::optional<OpIndex> find_operator(std::string_view name) const;
  SortId sort(std::string_view name) const;      // throws if unknown
  OpIndex op_index(std::string_view name) const;  // throws if unknown

  // Checked construction: arity and argument sorts must match.
  Term make(OpIndex op, std::vector<Term> children) const;
  Term make(std::string_view op_name, std::vector<Term> children) const;
  Term constant(SortId sort, Literal value) const;

  // Prefix rendering, e.g. concat(quantMin(fromCharSet(range(0,9)),1),...).
  std::string describe(const Term& t) const;

 private:
  std::string name_;
  std::vector<Sort> sorts_;
  std::vector<Operator> operators_;
  SortId closed_sort_ = 0;
  std::vector<Term> standard_;
};

// Per-operator occurrence counts, indexed by Operator::index. Averages over a
// set of programs carry fractional values.
struct OpVector {
  std::vector<double> counts;

  friend bool operator==(const OpVector&, const OpVector&) = default;
};

// All t' with t' ⊑ t, including t itself.
TermSet subterms(const Term& t);
// True iff t' ⊑ t.
bool contains(const Term& t, const Term& sub);
bool is_atomic(const Term& t);
OpVector op_vector(const Term& t, const Dsl& dsl);
// Number of programs that contain t at least once.
std::size_t count_containing(const Term& t, std::span<const Term> programs);
// Componentwise mean; throws InputError("no candidates") on an empty set.
OpVector average_op_vector(std::span<const Term> programs, const Dsl& dsl);

}  // namespace mmsynth
