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

#include "mmsynth/dsl.hpp"

#include <stdexcept>

#include "mmsynth/error.hpp"

namespace mmsynth {

SortId Dsl::add_sort(std::string name) {
  if (find_sort(name)) throw std::invalid_argument("duplicate sort " + name);
  sorts_.push_back(Sort{std::move(name)});
  return static_cast<SortId>(sorts_.size() - 1);
}

OpIndex Dsl::add_operator(std::string name, std::vector<SortId> arg_sorts,
                          SortId ret_sort, bool commutative) {
  if (find_operator(name)) throw std::invalid_argument("duplicate operator " + name);
  for (SortId s : arg_sorts) {
    if (s >= sorts_.size()) throw std::invalid_argument("unknown argument sort");
  }
  if (ret_sort >= sorts_.size()) throw std::invalid_argument("unknown return sort");
  if (commutative && (arg_sorts.size() != 2 || arg_sorts[0] != arg_sorts[1])) {
    throw std::invalid_argument("commutative operator must be binary over one sort");
  }
  const auto index = static_cast<OpIndex>(operators_.size());
  operators_.push_back(Operator{std::move(name), std::move(arg_sorts), ret_sort, index, commutative});
  return index;
}

void Dsl::set_closed_sort(SortId s) {
  if (s >= sorts_.size()) throw std::invalid_argument("unknown closed sort");
  closed_sort_ = s;
}

void Dsl::add_standard_component(Term t) { standard_.push_back(std::move(t)); }

std::optional<SortId> Dsl::find_sort(std::string_view name) const {
  for (std::size_t i = 0; i < sorts_.size(); ++i) {
    if (sorts_[i].name == name) return static_cast<SortId>(i);
  }
  return std::nullopt;
}

std::optional<OpIndex> Dsl::find_operator(std::string_view name) const {
  for (const Operator& op : operators_) {
    if (op.name == name) return op.index;
  }
  return std::nullopt;
}

SortId Dsl::sort(std::string_view name) const {
  if (auto s = find_sort(name)) return *s;
  throw std::invalid_argument("unknown sort " + std::string(name));
}

OpIndex Dsl::op_index(std::string_view name) const {
  if (auto o = find_operator(name)) return *o;
  throw std::invalid_argument("unknown operator " + std::string(name));
}

Term Dsl::make(OpIndex index, std::vector<Term> children) const {
  const Operator& o = op(index);
  if (children.size() != o.arity()) {
    throw std::invalid_argument(o.name + ": expected " + std::to_string(o.arity()) +
                                " arguments, got " + std::to_string(children.size()));
  }
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (!children[i].valid() || children[i].sort() != o.arg_sorts[i]) {
      throw std::invalid_argument(o.name + ": argument " + std::to_string(i) + " has the wrong sort");
    }
  }
  return Term::apply(index, o.ret_sort, std::move(children));
}

Term Dsl::make(std::string_view op_name, std::vector<Term> children) const {
  return make(op_index(op_name), std::move(children));
}

Term Dsl::constant(SortId s, Literal value) const {
  if (s >= sorts_.size()) throw std::invalid_argument("unknown sort");
  return Term::constant(s, std::move(value));
}

namespace {

bool plain_literal(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == '(' || c == ')' || c == ',' || c == '"' || c == ' ' || c == '\\') return false;
  }
  return true;
}

void describe_into(const Dsl& dsl, const Term& t, std::string& out) {
  if (t.is_constant()) {
    if (const auto* i = std::get_if<std::int64_t>(&t.literal())) {
      out += std::to_string(*i);
      return;
    }
    const std::string& s = t.str_value();
    if (plain_literal(s)) {
      out += s;
      return;
    }
    out += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    out += '"';
    return;
  }
  out += dsl.op(t.op()).name;
  out += '(';
  bool first = true;
  for (const Term& c : t.children()) {
    if (!first) out += ',';
    first = false;
    describe_into(dsl, c, out);
  }
  out += ')';
}

void collect(const Term& t, TermSet& out) {
  if (!out.insert(t).second) return;
  for (const Term& c : t.children()) collect(c, out);
}

void count_ops(const Term& t, std::vector<double>& counts) {
  if (t.is_constant()) return;
  counts.at(t.op()) += 1.0;
  for (const Term& c : t.children()) count_ops(c, counts);
}

}  // namespace

std::string Dsl::describe(const Term& t) const {
  std::string out;
  describe_into(*this, t, out);
  return out;
}

TermSet subterms(const Term& t) {
  TermSet out;
  collect(t, out);
  return out;
}

bool contains(const Term& t, const Term& sub) {
  if (sub.size() > t.size()) return false;
  if (t == sub) return true;
  for (const Term& c : t.children()) {
    if (contains(c, sub)) return true;
  }
  return false;
}

bool is_atomic(const Term& t) { return t.children().empty(); }

OpVector op_vector(const Term& t, const Dsl& dsl) {
  OpVector v;
  v.counts.assign(dsl.operators().size(), 0.0);
  count_ops(t, v.counts);
  return v;
}

std::size_t count_containing(const Term& t, std::span<const Term> programs) {
  std::size_t n = 0;
  for (const Term& p : programs) {
    if (contains(p, t)) ++n;
  }
  return n;
}

OpVector average_op_vector(std::span<const Term> programs, const Dsl& dsl) {
  if (programs.empty()) throw InputError("no candidates");
  OpVector avg;
  avg.counts.assign(dsl.operators().size(), 0.0);
  for (const Term& p : programs) count_ops(p, avg.counts);
  for (double& c : avg.counts) c /= static_cast<double>(programs.size());
  return avg;
}

}  // namespace mmsynth
