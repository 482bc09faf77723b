// SPDX-License-Identifier: Apache-2.0
//
// A one-sort arithmetic DSL used to exercise the engine on instances small
// enough to enumerate exhaustively.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmsynth/dsl.hpp"
#include "mmsynth/semantics.hpp"
#include "mmsynth/term.hpp"

namespace toy {

struct Ops {
  mmsynth::OpIndex add, mul, sub;
};

// Sort 0 ("n") only; add and mul are commutative; no standard components.
const mmsynth::Dsl& dsl();
const Ops& ops();

mmsynth::Term x();
mmsynth::Term num(std::int64_t v);
mmsynth::Term add(const mmsynth::Term& a, const mmsynth::Term& b);
mmsynth::Term mul(const mmsynth::Term& a, const mmsynth::Term& b);
mmsynth::Term sub(const mmsynth::Term& a, const mmsynth::Term& b);

// Wrapping 64-bit evaluation at one value of x.
std::uint64_t eval(const mmsynth::Term& t, std::int64_t xv);

// (x, expected output) pairs.
using Examples = std::vector<std::pair<std::int64_t, std::int64_t>>;

class Semantics final : public mmsynth::Semantics {
 public:
  explicit Semantics(Examples examples) : examples_(std::move(examples)) {}
  mmsynth::Words constant_value(const mmsynth::Term& c) override;
  mmsynth::Words apply(mmsynth::OpIndex op, std::span<const mmsynth::Words* const> kids) override;
  mmsynth::Words project(mmsynth::SortId, const mmsynth::Words& value) override { return value; }
  bool consistent(const mmsynth::Words& interpretation) const override;

  std::size_t apply_calls = 0;

 private:
  Examples examples_;
};

// Subset of `points` separating `target` from the value vector of every
// term built from `atoms` in at most `depth` rounds of applying each operator
// to all pairs, wherever that vector differs from `target`.
std::vector<std::int64_t> distinguishing_points(std::span<const mmsynth::Term> atoms,
                                                std::span<const std::int64_t> points,
                                                std::size_t depth,
                                                const std::vector<std::uint64_t>& target);

class Domain final : public mmsynth::Domain {
 public:
  const mmsynth::Dsl& dsl() const override { return toy::dsl(); }
  std::string name() const override { return "toy"; }
  std::string print(const mmsynth::Term& t) const override;
  mmsynth::Term parse(std::string_view src) const override;
};

}  // namespace toy
