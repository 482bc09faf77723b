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

#include <algorithm>
#include <cstring>

#include "mmsynth/regex.hpp"
#include "regex_internal.hpp"

namespace mmsynth::regex {

namespace {

using detail::SpanTable;
using detail::words_for;

Words from_set(const CharSet& cs) {
  Words w(4, 0);
  for (std::size_t c = 0; c < 256; ++c) {
    if (cs.test(c)) w[c >> 6] |= std::uint64_t{1} << (c & 63);
  }
  return w;
}

CharSet to_set(const Words& w) {
  CharSet cs;
  for (std::size_t c = 0; c < 256; ++c) {
    if ((w[c >> 6] >> (c & 63)) & 1U) cs.set(c);
  }
  return cs;
}

// Full value of an e-sort term: for each example, its span table followed by
// one column word block (bit i set iff [i, n) is accepted).
class RegexSemantics final : public Semantics {
 public:
  RegexSemantics(std::span<const Example> examples, const CharSet& alphabet)
      : examples_(examples.begin(), examples.end()), alphabet_(alphabet) {
    CharSet seen;
    std::size_t off = 0;
    for (const Example& ex : examples_) {
      Slot s;
      s.n = ex.input.size();
      s.w = words_for(s.n + 1);
      s.offset = off;
      off += (s.n + 2) * s.w;
      slots_.push_back(s);
      for (unsigned char c : ex.input) seen.set(c);
    }
    total_ = off;
    seen_mask_ = from_set(seen);
  }

  Words constant_value(const Term& c) override {
    if (c.sort() == sorts().i) return {static_cast<std::uint64_t>(c.int_value())};
    if (c.sort() == sorts().c) return {static_cast<unsigned char>(c.str_value().at(0))};
    if (c.sort() == sorts().s) return from_set(char_set(c, alphabet_));
    return Words(total_, 0);
  }

  Words apply(OpIndex op, std::span<const Words* const> k) override {
    const OpIds& o = ops();
    if (op == o.from_char) {
      CharSet cs;
      cs.set((*k[0])[0]);
      return from_set(cs);
    }
    if (op == o.range) {
      CharSet cs;
      for (std::uint64_t c = (*k[0])[0]; c <= (*k[1])[0]; ++c) cs.set(c);
      return from_set(cs);
    }
    if (op == o.union_) return or_words(*k[0], *k[1]);
    if (op == o.negate) return from_set(alphabet_ & ~to_set(*k[0]));
    if (op == o.any) return from_set(alphabet_);
    if (op == o.alter) return or_words(*k[0], *k[1]);

    Words out(total_, 0);
    for (std::size_t x = 0; x < slots_.size(); ++x) {
      const Slot& s = slots_[x];
      SpanTable t;
      if (op == o.from_char_set) {
        t = detail::single_chars(examples_[x].input, to_set(*k[0]));
      } else if (op == o.concat) {
        t = detail::compose(table(*k[0], s), table(*k[1], s));
      } else if (op == o.quant) {
        t = detail::repeat(table(*k[0], s), as_int(*k[1]), as_int(*k[2]));
      } else if (op == o.quant_min) {
        t = detail::repeat(table(*k[0], s), as_int(*k[1]), -1);
      } else {
        continue;
      }
      std::copy(t.raw().begin(), t.raw().end(), out.begin() + s.offset);
      std::uint64_t* col = out.data() + s.offset + (s.n + 1) * s.w;
      for (std::size_t i = 0; i <= s.n; ++i) {
        if (t.get(i, s.n)) col[i >> 6] |= std::uint64_t{1} << (i & 63);
      }
    }
    return out;
  }

  Words project(SortId sort, const Words& v) override {
    if (sort == sorts().s) {
      Words w(4);
      for (std::size_t i = 0; i < 4; ++i) w[i] = v[i] & seen_mask_[i];
      return w;
    }
    if (sort != sorts().e) return v;
    Words bits(words_for(slots_.size()), 0);
    for (std::size_t x = 0; x < slots_.size(); ++x) {
      if (accepts(v, slots_[x])) bits[x >> 6] |= std::uint64_t{1} << (x & 63);
    }
    return bits;
  }

  Words interpret_apply(OpIndex op, SortId ret_sort, std::span<const Words* const> k) override {
    const OpIds& o = ops();
    if (ret_sort != sorts().e) return project(ret_sort, apply(op, k));
    Words bits(words_for(slots_.size()), 0);
    std::vector<std::uint64_t> scratch;
    for (std::size_t x = 0; x < slots_.size(); ++x) {
      const Slot& s = slots_[x];
      bool hit = false;
      if (op == o.alter) {
        hit = accepts(*k[0], s) || accepts(*k[1], s);
      } else if (op == o.concat) {
        const std::uint64_t* row0 = k[0]->data() + s.offset;
        const std::uint64_t* col = k[1]->data() + s.offset + (s.n + 1) * s.w;
        for (std::size_t i = 0; i < s.w && !hit; ++i) hit = (row0[i] & col[i]) != 0;
      } else if (op == o.quant || op == o.quant_min) {
        scratch.assign(s.w, 0);
        const std::int64_t hi = op == o.quant ? as_int(*k[2]) : -1;
        detail::repeat_row(k[0]->data() + s.offset, s.n, s.w, 0, as_int(*k[1]), hi,
                           scratch.data());
        hit = (scratch[s.n >> 6] >> (s.n & 63)) & 1U;
      } else if (op == o.from_char_set) {
        const std::string& in = examples_[x].input;
        hit = in.size() == 1 && (((*k[0])[static_cast<unsigned char>(in[0]) >> 6] >>
                                  (static_cast<unsigned char>(in[0]) & 63)) & 1U);
      }
      if (hit) bits[x >> 6] |= std::uint64_t{1} << (x & 63);
    }
    return bits;
  }

  bool consistent(const Words& interp) const override {
    for (std::size_t x = 0; x < examples_.size(); ++x) {
      const bool got = (interp[x >> 6] >> (x & 63)) & 1U;
      if (got != examples_[x].output) return false;
    }
    return true;
  }

 private:
  struct Slot {
    std::size_t n = 0, w = 1, offset = 0;
  };

  static std::int64_t as_int(const Words& v) { return static_cast<std::int64_t>(v[0]); }

  static Words or_words(const Words& a, const Words& b) {
    Words out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] |= b[i];
    return out;
  }

  static bool accepts(const Words& v, const Slot& s) {
    const std::uint64_t* row0 = v.data() + s.offset;
    return (row0[s.n >> 6] >> (s.n & 63)) & 1U;
  }

  static SpanTable table(const Words& v, const Slot& s) {
    SpanTable t(s.n);
    std::copy(v.begin() + static_cast<std::ptrdiff_t>(s.offset),
              v.begin() + static_cast<std::ptrdiff_t>(s.offset + (s.n + 1) * s.w), t.raw().begin());
    return t;
  }

  std::vector<Example> examples_;
  CharSet alphabet_;
  std::vector<Slot> slots_;
  std::size_t total_ = 0;
  Words seen_mask_;
};

}  // namespace

std::unique_ptr<Semantics> make_semantics(std::span<const Example> examples,
                                          const CharSet& alphabet) {
  return std::make_unique<RegexSemantics>(examples, alphabet);
}

}  // namespace mmsynth::regex
