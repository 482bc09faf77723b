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

#include <stdexcept>

#include "mmsynth/regex.hpp"
#include "regex_internal.hpp"

namespace mmsynth::regex {

namespace {

struct Registry {
  Dsl dsl{"regex"};
  SortIds sorts{};
  OpIds ops{};

  Registry() {
    sorts.i = dsl.add_sort("i");
    sorts.c = dsl.add_sort("c");
    sorts.s = dsl.add_sort("s");
    sorts.e = dsl.add_sort("e");
    ops.from_char = dsl.add_operator("fromChar", {sorts.c}, sorts.s);
    ops.range = dsl.add_operator("range", {sorts.c, sorts.c}, sorts.s);
    ops.union_ = dsl.add_operator("union", {sorts.s, sorts.s}, sorts.s, true);
    ops.negate = dsl.add_operator("negate", {sorts.s}, sorts.s);
    ops.any = dsl.add_operator("any", {}, sorts.s);
    ops.quant = dsl.add_operator("quant", {sorts.e, sorts.i, sorts.i}, sorts.e);
    ops.quant_min = dsl.add_operator("quantMin", {sorts.e, sorts.i}, sorts.e);
    ops.alter = dsl.add_operator("alter", {sorts.e, sorts.e}, sorts.e, true);
    ops.concat = dsl.add_operator("concat", {sorts.e, sorts.e}, sorts.e);
    ops.from_char_set = dsl.add_operator("fromCharSet", {sorts.s}, sorts.e);
    dsl.set_closed_sort(sorts.e);
    dsl.add_standard_component(Term::constant(sorts.i, std::int64_t{0}));
    dsl.add_standard_component(Term::constant(sorts.i, std::int64_t{1}));
    for (const char* n : {"\\d", "\\s", "\\w"}) {
      dsl.add_standard_component(Term::constant(sorts.s, std::string(n)));
    }
  }
};

const Registry& registry() {
  static const Registry r;
  return r;
}

}  // namespace

CharSet printable_ascii() {
  CharSet cs;
  for (int c = 0x20; c <= 0x7E; ++c) cs.set(c);
  return cs;
}

const Dsl& dsl() { return registry().dsl; }
const SortIds& sorts() { return registry().sorts; }
const OpIds& ops() { return registry().ops; }

Term int_const(std::int64_t v) { return Term::constant(sorts().i, v); }
Term char_const(char c) { return Term::constant(sorts().c, std::string(1, c)); }

Term named_class(char which) {
  if (which != 'd' && which != 's' && which != 'w') {
    throw std::invalid_argument("unknown named class");
  }
  return Term::constant(sorts().s, std::string{'\\', which});
}

Term from_char(char c) { return Term::apply(ops().from_char, sorts().s, {char_const(c)}); }
Term range(char lo, char hi) {
  return Term::apply(ops().range, sorts().s, {char_const(lo), char_const(hi)});
}
Term union_of(const Term& a, const Term& b) { return dsl().make(ops().union_, {a, b}); }
Term negate(const Term& s) { return dsl().make(ops().negate, {s}); }
Term any() { return Term::apply(ops().any, sorts().s, {}); }
Term quant(const Term& e, std::int64_t lo, std::int64_t hi) {
  return dsl().make(ops().quant, {e, int_const(lo), int_const(hi)});
}
Term quant_min(const Term& e, std::int64_t lo) {
  return dsl().make(ops().quant_min, {e, int_const(lo)});
}
Term alter(const Term& a, const Term& b) { return dsl().make(ops().alter, {a, b}); }
Term concat(const Term& a, const Term& b) { return dsl().make(ops().concat, {a, b}); }
Term from_char_set(const Term& s) { return dsl().make(ops().from_char_set, {s}); }
Term literal(char c) { return from_char_set(from_char(c)); }

CharSet detail::named_class_set(char which) {
  CharSet cs;
  switch (which) {
    case 'd':
      for (int c = '0'; c <= '9'; ++c) cs.set(c);
      break;
    case 's':
      for (unsigned char c : std::string(" \t\n\r\f\v")) cs.set(c);
      break;
    case 'w':
      for (int c = '0'; c <= '9'; ++c) cs.set(c);
      for (int c = 'a'; c <= 'z'; ++c) cs.set(c);
      for (int c = 'A'; c <= 'Z'; ++c) cs.set(c);
      cs.set('_');
      break;
    default:
      break;
  }
  return cs;
}

CharSet char_set(const Term& t, const CharSet& alphabet) {
  const OpIds& o = ops();
  if (t.sort() != sorts().s) return {};
  if (t.is_constant()) {
    const std::string& name = t.str_value();
    return name.size() == 2 ? detail::named_class_set(name[1]) : CharSet{};
  }
  const OpIndex op = t.op();
  const auto& k = t.children();
  auto ch = [](const Term& c) { return static_cast<unsigned char>(c.str_value().at(0)); };
  if (op == o.from_char) {
    CharSet cs;
    cs.set(ch(k[0]));
    return cs;
  }
  if (op == o.range) {
    CharSet cs;
    for (unsigned c = ch(k[0]); c <= ch(k[1]); ++c) cs.set(c);
    return cs;
  }
  if (op == o.union_) return char_set(k[0], alphabet) | char_set(k[1], alphabet);
  if (op == o.negate) return alphabet & ~char_set(k[0], alphabet);
  if (op == o.any) return alphabet;
  return {};
}

}  // namespace mmsynth::regex
