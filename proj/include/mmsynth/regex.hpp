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

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmsynth/dsl.hpp"
#include "mmsynth/semantics.hpp"

namespace mmsynth::regex {

using CharSet = std::bitset<256>;

// Printable ASCII 0x20-0x7E: the universe for any() and negate().
CharSet printable_ascii();

struct SortIds {
  SortId i, c, s, e;
};

struct OpIds {
  OpIndex from_char, range, union_, negate, any, quant, quant_min, alter,
      concat, from_char_set;
};

// Sorts i (integers), c (characters), s (character sets), e (expressions);
// e is closed. Standard components: 0, 1, \d, \s, \w.
const Dsl& dsl();
const SortIds& sorts();
const OpIds& ops();

// Constructors. Named classes are s-sort constants "\d", "\s", "\w".
Term int_const(std::int64_t v);
Term char_const(char c);
Term named_class(char which);
Term from_char(char c);
Term range(char lo, char hi);
Term union_of(const Term& a, const Term& b);
Term negate(const Term& s);
Term any();
Term quant(const Term& e, std::int64_t lo, std::int64_t hi);
Term quant_min(const Term& e, std::int64_t lo);
Term alter(const Term& a, const Term& b);
Term concat(const Term& a, const Term& b);
Term from_char_set(const Term& s);
// fromCharSet(fromChar(c)).
Term literal(char c);

// Standard regex notation to AST. `|` is left-associative, juxtaposition
// builds right-nested concat. `(...)` only groups. Throws ParseError.
Term parse(std::string_view src);
// Canonical surface syntax; parse(print(t)) == t for parser-produced terms.
std::string print(const Term& t);

// Characters denoted by an s-sort term.
CharSet char_set(const Term& s, const CharSet& alphabet = printable_ascii());

// Anchored acceptance of the whole string.
bool match_full(const Term& t, std::string_view s,
                const CharSet& alphabet = printable_ascii());

std::vector<std::pair<std::string, bool>> interpretation(
    const Term& t, std::span<const Example> examples,
    const CharSet& alphabet = printable_ascii());

class RegexDomain final : public Domain {
 public:
  const Dsl& dsl() const override { return regex::dsl(); }
  std::string name() const override { return "regex"; }
  std::string print(const Term& t) const override { return regex::print(t); }
  Term parse(std::string_view src) const override { return regex::parse(src); }
};

std::unique_ptr<Semantics> make_semantics(std::span<const Example> examples,
                                          const CharSet& alphabet = printable_ascii());

enum class Verdict { kEqual, kDifferent, kUnknown };

struct BoundedComparison {
  Verdict verdict = Verdict::kUnknown;
  // Shortest (then lexicographically least) string accepted by the first
  // term only, and by the second term only.
  std::optional<std::string> first_only;
  std::optional<std::string> second_only;
};

// Compares two terms on every string up to `max_len` over one representative
// per class of characters the two terms cannot tell apart. Exploration of
// automaton configurations is capped by `max_configs`.
BoundedComparison compare_bounded(const Term& p, const Term& g, std::size_t max_len,
                                  std::size_t max_configs,
                                  const CharSet& alphabet = printable_ascii());

// Representative characters used by compare_bounded, in ascending order.
std::vector<unsigned char> relevant_alphabet(const Term& p, const Term& g,
                                             const CharSet& alphabet = printable_ascii());

}  // namespace mmsynth::regex
