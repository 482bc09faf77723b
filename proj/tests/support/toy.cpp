// SPDX-License-Identifier: Apache-2.0

#include "support/toy.hpp"

#include <cctype>
#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "mmsynth/error.hpp"

namespace toy {

using mmsynth::Term;
using mmsynth::Words;

namespace {

struct Registry {
  mmsynth::Dsl dsl{"toy"};
  Ops ops{};
  Registry() {
    const mmsynth::SortId n = dsl.add_sort("n");
    ops.add = dsl.add_operator("add", {n, n}, n, true);
    ops.mul = dsl.add_operator("mul", {n, n}, n, true);
    ops.sub = dsl.add_operator("sub", {n, n}, n);
    dsl.set_closed_sort(n);
  }
};

const Registry& registry() {
  static const Registry r;
  return r;
}

std::uint64_t combine(mmsynth::OpIndex op, std::uint64_t a, std::uint64_t b) {
  if (op == ops().add) return a + b;
  if (op == ops().mul) return a * b;
  return a - b;
}

}  // namespace

const mmsynth::Dsl& dsl() { return registry().dsl; }
const Ops& ops() { return registry().ops; }

Term x() { return Term::constant(0, std::string("x")); }
Term num(std::int64_t v) { return Term::constant(0, v); }
Term add(const Term& a, const Term& b) { return Term::apply(ops().add, 0, {a, b}); }
Term mul(const Term& a, const Term& b) { return Term::apply(ops().mul, 0, {a, b}); }
Term sub(const Term& a, const Term& b) { return Term::apply(ops().sub, 0, {a, b}); }

std::uint64_t eval(const Term& t, std::int64_t xv) {
  if (t.is_constant()) {
    if (std::holds_alternative<std::string>(t.literal())) return static_cast<std::uint64_t>(xv);
    return static_cast<std::uint64_t>(t.int_value());
  }
  return combine(t.op(), eval(t.children()[0], xv), eval(t.children()[1], xv));
}

Words Semantics::constant_value(const Term& c) {
  Words w;
  for (const auto& [xv, out] : examples_) w.push_back(eval(c, xv));
  return w;
}

Words Semantics::apply(mmsynth::OpIndex op, std::span<const Words* const> kids) {
  ++apply_calls;
  Words w(kids[0]->size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = combine(op, (*kids[0])[i], (*kids[1])[i]);
  return w;
}

bool Semantics::consistent(const Words& interpretation) const {
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    if (interpretation[i] != static_cast<std::uint64_t>(examples_[i].second)) return false;
  }
  return true;
}

std::vector<std::int64_t> distinguishing_points(std::span<const Term> atoms,
                                                std::span<const std::int64_t> points,
                                                std::size_t depth,
                                                const std::vector<std::uint64_t>& target) {
  std::vector<bool> chosen(points.size(), false);
  auto visit = [&](const std::vector<std::uint64_t>& v) {
    std::size_t first_diff = points.size();
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (v[k] == target[k]) continue;
      if (chosen[k]) return;
      if (first_diff == points.size()) first_diff = k;
    }
    if (first_diff < points.size()) chosen[first_diff] = true;
  };
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<std::vector<std::uint64_t>> all;
  for (const Term& a : atoms) {
    std::vector<std::uint64_t> v;
    for (std::int64_t p : points) v.push_back(eval(a, p));
    visit(v);
    if (seen.insert(v).second) all.push_back(std::move(v));
  }
  const mmsynth::OpIndex op_list[] = {ops().add, ops().mul, ops().sub};
  std::vector<std::uint64_t> v(points.size());
  for (std::size_t round = 0; round < depth; ++round) {
    const bool last = round + 1 == depth;
    const std::size_t n = all.size();
    for (mmsynth::OpIndex op : op_list) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = 0; k < v.size(); ++k) v[k] = combine(op, all[i][k], all[j][k]);
          visit(v);
          if (!last && seen.insert(v).second) all.push_back(v);
        }
      }
    }
  }
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (chosen[k]) out.push_back(points[k]);
  }
  return out;
}

std::string Domain::print(const Term& t) const {
  if (t.is_constant()) {
    if (std::holds_alternative<std::string>(t.literal())) return t.str_value();
    return std::to_string(t.int_value());
  }
  return dsl().operators()[t.op()].name + "(" + print(t.children()[0]) + "," +
         print(t.children()[1]) + ")";
}

namespace {

Term parse_at(std::string_view s, std::size_t& i) {
  if (i >= s.size()) throw mmsynth::ParseError("unexpected end", i);
  if (s[i] == 'x' && (i + 1 == s.size() || s[i + 1] != '(')) {
    ++i;
    return x();
  }
  if (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '-') {
    const std::size_t start = i++;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return num(std::stoll(std::string(s.substr(start, i - start))));
  }
  const std::size_t start = i;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
  const std::string name(s.substr(start, i - start));
  if (i >= s.size() || s[i] != '(') throw mmsynth::ParseError("expected (", i);
  ++i;
  Term a = parse_at(s, i);
  if (i >= s.size() || s[i] != ',') throw mmsynth::ParseError("expected ,", i);
  ++i;
  Term b = parse_at(s, i);
  if (i >= s.size() || s[i] != ')') throw mmsynth::ParseError("expected )", i);
  ++i;
  if (name == "add") return add(a, b);
  if (name == "mul") return mul(a, b);
  if (name == "sub") return sub(a, b);
  throw mmsynth::ParseError("unknown operator " + name, start);
}

}  // namespace

Term Domain::parse(std::string_view src) const {
  std::size_t i = 0;
  Term t = parse_at(src, i);
  if (i != src.size()) throw mmsynth::ParseError("trailing input", i);
  return t;
}

}  // namespace toy

#include "support/instances.hpp"

namespace toy {

namespace {

Term random_tree(std::mt19937_64& rng, std::size_t nops) {
  if (nops == 0) {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: return num(1);
      case 1: return num(2);
      default: return x();
    }
  }
  const std::size_t left = std::uniform_int_distribution<std::size_t>(0, nops - 1)(rng);
  Term a = random_tree(rng, left);
  Term b = random_tree(rng, nops - 1 - left);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return add(a, b);
    case 1: return mul(a, b);
    default: return sub(a, b);
  }
}

void proper_subterms(const Term& t, std::vector<Term>& out) {
  for (const Term& c : t.children()) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    proper_subterms(c, out);
  }
}

}  // namespace

Instance random_instance(std::mt19937_64& rng, std::size_t max_ops, std::size_t depth) {
  Instance inst;
  const std::size_t nops = std::uniform_int_distribution<std::size_t>(1, max_ops)(rng);
  inst.truth = random_tree(rng, nops);
  std::vector<Term> parts;
  proper_subterms(inst.truth, parts);
  std::vector<Term> atoms;
  for (const Term& p : parts) {
    if (p.is_constant()) {
      atoms.push_back(p);
      inst.candidates.push_back(p);
    } else if (std::bernoulli_distribution(0.5)(rng)) {
      inst.candidates.push_back(p);
    }
  }
  std::shuffle(inst.candidates.begin(), inst.candidates.end(), rng);
  const std::vector<std::int64_t> points = {-3, -2, -1, 0, 1, 2, 3, 4};
  std::vector<std::uint64_t> target;
  for (std::int64_t p : points) target.push_back(eval(inst.truth, p));
  for (std::int64_t p : distinguishing_points(atoms, points, depth, target)) {
    inst.examples.emplace_back(p, static_cast<std::int64_t>(eval(inst.truth, p)));
  }
  return inst;
}

}  // namespace toy
