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

#include "mmsynth/term.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace mmsynth {

namespace {

constexpr OpIndex kConstantHead = 0xFFFFFFFFu;

std::size_t mix(std::size_t h, std::size_t v) {
  // 64-bit variant of boost::hash_combine.
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4));
}

}  // namespace

struct Term::Node {
  OpIndex head = kConstantHead;
  SortId sort = 0;
  Literal literal;
  std::vector<Term> children;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t height = 1;
};

Term Term::constant(SortId sort, Literal value) {
  auto n = std::make_shared<Node>();
  n->sort = sort;
  n->literal = std::move(value);
  std::size_t h = mix(0x51ed270b27e2a1c5ULL, sort);
  if (const auto* i = std::get_if<std::int64_t>(&n->literal)) {
    h = mix(mix(h, 1), std::hash<std::int64_t>{}(*i));
  } else {
    h = mix(mix(h, 2), std::hash<std::string>{}(std::get<std::string>(n->literal)));
  }
  n->hash = h;
  return Term(std::move(n));
}

Term Term::apply(OpIndex op, SortId ret_sort, std::vector<Term> children) {
  auto n = std::make_shared<Node>();
  n->head = op;
  n->sort = ret_sort;
  std::size_t h = mix(mix(0x2545f4914f6cdd1dULL, op), ret_sort);
  std::size_t height = 0;
  for (const Term& c : children) {
    if (!c.valid()) throw std::invalid_argument("Term::apply: null child");
    h = mix(h, c.hash());
    n->size += c.size();
    height = std::max(height, c.height());
  }
  n->height = height + 1;
  n->hash = h;
  n->children = std::move(children);
  return Term(std::move(n));
}

bool Term::is_constant() const { return node_->head == kConstantHead; }
SortId Term::sort() const { return node_->sort; }
OpIndex Term::op() const { return node_->head; }
const Literal& Term::literal() const { return node_->literal; }

std::int64_t Term::int_value() const {
  if (const auto* i = std::get_if<std::int64_t>(&node_->literal)) return *i;
  throw std::logic_error("Term::int_value on a non-integer constant");
}

const std::string& Term::str_value() const {
  if (const auto* s = std::get_if<std::string>(&node_->literal)) return *s;
  throw std::logic_error("Term::str_value on a non-string constant");
}

const std::vector<Term>& Term::children() const { return node_->children; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
std::size_t Term::size() const { return node_ ? node_->size : 0; }
std::size_t Term::height() const { return node_ ? node_->height : 0; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.head != y.head || x.sort != y.sort ||
      x.size != y.size || x.children.size() != y.children.size()) {
    return false;
  }
  if (x.head == kConstantHead) return x.literal == y.literal;
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!(x.children[i] == y.children[i])) return false;
  }
  return true;
}

bool operator<(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return false;
  if (!a.node_) return true;
  if (!b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.sort != y.sort) return x.sort < y.sort;
  if (x.head != y.head) return x.head < y.head;
  if (x.head == kConstantHead) return x.literal < y.literal;
  return std::lexicographical_compare(x.children.begin(), x.children.end(),
                                      y.children.begin(), y.children.end());
}

}  // namespace mmsynth
