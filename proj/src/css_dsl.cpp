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

#include "mmsynth/css.hpp"

namespace mmsynth::css {

namespace {

struct Registry {
  Dsl dsl{"css"};
  SortIds sorts{};
  OpIds ops{};

  Registry() {
    sorts.s = dsl.add_sort("s");
    sorts.i = dsl.add_sort("i");
    sorts.n = dsl.add_sort("n");
    const SortId s = sorts.s, i = sorts.i, n = sorts.n;
    ops.multiple_offset = dsl.add_operator("MultipleOffset", {i, i}, i);
    ops.any = dsl.add_operator("Any", {}, n);
    ops.union_ = dsl.add_operator("Union", {n, n}, n, true);
    ops.not_ = dsl.add_operator("Not", {n, n}, n);
    ops.tag_equals = dsl.add_operator("TagEquals", {n, s}, n);
    ops.nth_child = dsl.add_operator("nthChild", {n, i}, n);
    ops.nth_last_child = dsl.add_operator("nthLastChild", {n, i}, n);
    ops.attr_equals = dsl.add_operator("AttributeEquals", {n, s, s}, n);
    ops.attr_contains = dsl.add_operator("AttributeContains", {n, s, s}, n);
    ops.attr_starts_with = dsl.add_operator("AttributeStartsWith", {n, s, s}, n);
    ops.attr_ends_with = dsl.add_operator("AttributeEndsWith", {n, s, s}, n);
    ops.right_sibling = dsl.add_operator("RightSibling", {n, n}, n);
    ops.children = dsl.add_operator("Children", {n, n}, n);
    ops.descendants = dsl.add_operator("Descendants", {n, n}, n);
    ops.attr_has_token = dsl.add_operator("AttributeHasToken", {n, s, s}, n);
    dsl.set_closed_sort(n);
    dsl.add_standard_component(Term::apply(ops.any, n, {}));
    dsl.add_standard_component(Term::constant(i, std::int64_t{1}));
    dsl.add_standard_component(Term::constant(s, std::string()));
  }
};

const Registry& registry() {
  static const Registry r;
  return r;
}

Term node_op(OpIndex op, std::vector<Term> kids) {
  return Term::apply(op, sorts().n, std::move(kids));
}

}  // namespace

const Dsl& dsl() { return registry().dsl; }
const SortIds& sorts() { return registry().sorts; }
const OpIds& ops() { return registry().ops; }

Term str(std::string s) { return Term::constant(sorts().s, std::move(s)); }
Term num(std::int64_t v) { return Term::constant(sorts().i, v); }

Term multiple_offset(std::int64_t a, std::int64_t b) {
  return Term::apply(ops().multiple_offset, sorts().i, {num(a), num(b)});
}

Term any() { return node_op(ops().any, {}); }
Term union_of(const Term& a, const Term& b) { return node_op(ops().union_, {a, b}); }
Term not_of(const Term& a, const Term& b) { return node_op(ops().not_, {a, b}); }
Term tag_equals(const Term& n, std::string tag) {
  return node_op(ops().tag_equals, {n, str(std::move(tag))});
}
Term nth_child(const Term& n, const Term& i) { return node_op(ops().nth_child, {n, i}); }
Term nth_last_child(const Term& n, const Term& i) {
  return node_op(ops().nth_last_child, {n, i});
}
Term attr_equals(const Term& n, std::string attr, std::string value) {
  return node_op(ops().attr_equals, {n, str(std::move(attr)), str(std::move(value))});
}
Term attr_contains(const Term& n, std::string attr, std::string value) {
  return node_op(ops().attr_contains, {n, str(std::move(attr)), str(std::move(value))});
}
Term attr_starts_with(const Term& n, std::string attr, std::string value) {
  return node_op(ops().attr_starts_with, {n, str(std::move(attr)), str(std::move(value))});
}
Term attr_ends_with(const Term& n, std::string attr, std::string value) {
  return node_op(ops().attr_ends_with, {n, str(std::move(attr)), str(std::move(value))});
}
Term attr_has_token(const Term& n, std::string attr, std::string value) {
  return node_op(ops().attr_has_token, {n, str(std::move(attr)), str(std::move(value))});
}
Term right_sibling(const Term& a, const Term& b) { return node_op(ops().right_sibling, {a, b}); }
Term children(const Term& a, const Term& b) { return node_op(ops().children, {a, b}); }
Term descendants(const Term& a, const Term& b) { return node_op(ops().descendants, {a, b}); }

}  // namespace mmsynth::css
