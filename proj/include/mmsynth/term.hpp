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
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

namespace mmsynth {

using SortId = std::uint32_t;
using OpIndex = std::uint32_t;

// Value carried by a constant: an integer or a string (characters are
// one-byte strings).
using Literal = std::variant<std::int64_t, std::string>;

// Immutable, structurally hashed syntax tree node.
//
// Copies share the underlying node. Equality and hashing are structural.
class Term {
 public:
  Term() = default;

  static Term constant(SortId sort, Literal value);
  // No sort checking here; use Dsl::make for checked construction.
  static Term apply(OpIndex op, SortId ret_sort, std::vector<Term> children);

  bool valid() const { return node_ != nullptr; }
  bool is_constant() const;
  SortId sort() const;
  // Operator index; only meaningful when !is_constant().
  OpIndex op() const;
  const Literal& literal() const;
  std::int64_t int_value() const;
  const std::string& str_value() const;
  const std::vector<Term>& children() const;
  std::size_t arity() const { return children().size(); }

  std::size_t hash() const;
  // Number of nodes in the tree.
  std::size_t size() const;
  std::size_t height() const;

  // Identity of the shared node; equal ids imply equal terms.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  // Total structural order, used wherever a deterministic order is needed.
  friend bool operator<(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

using TermSet = std::unordered_set<Term, TermHash>;

}  // namespace mmsynth
