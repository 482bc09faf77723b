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
#include <unordered_map>

#include "mmsynth/regex.hpp"
#include "regex_internal.hpp"

namespace mmsynth::regex {

namespace detail {

void repeat_row(const std::uint64_t* table, std::size_t n, std::size_t w, std::size_t start,
                std::int64_t lo, std::int64_t hi, std::uint64_t* out) {
  std::fill(out, out + w, 0);
  if (lo < 0 || (hi >= 0 && lo > hi)) return;
  std::vector<std::uint64_t> cur(w, 0), nxt(w, 0);
  cur[start >> 6] |= std::uint64_t{1} << (start & 63);
  for (std::int64_t k = 0; k < lo; ++k) {
    step_row(cur.data(), table, n, w, nxt.data());
    if (nxt == cur) break;  // stationary from here on
    cur.swap(nxt);
    if (std::all_of(cur.begin(), cur.end(), [](std::uint64_t x) { return x == 0; })) return;
  }
  std::copy(cur.begin(), cur.end(), out);
  // Once a new block adds nothing to the accumulated set, later blocks
  // cannot either.
  for (std::int64_t k = lo; hi < 0 || k < hi; ++k) {
    step_row(cur.data(), table, n, w, nxt.data());
    bool grows = false;
    for (std::size_t x = 0; x < w; ++x) {
      if (nxt[x] & ~out[x]) grows = true;
    }
    if (!grows) break;
    for (std::size_t x = 0; x < w; ++x) out[x] |= nxt[x];
    cur.swap(nxt);
  }
}

SpanTable compose(const SpanTable& a, const SpanTable& b) {
  SpanTable c(a.n());
  const std::size_t n = a.n(), w = a.w();
  for (std::size_t i = 0; i <= n; ++i) step_row(a.row(i), b.row(0), n, w, c.row(i));
  return c;
}

SpanTable repeat(const SpanTable& e, std::int64_t lo, std::int64_t hi) {
  SpanTable r(e.n());
  for (std::size_t i = 0; i <= e.n(); ++i) {
    repeat_row(e.row(0), e.n(), e.w(), i, lo, hi, r.row(i));
  }
  return r;
}

SpanTable single_chars(std::string_view s, const CharSet& cs) {
  SpanTable t(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (cs.test(static_cast<unsigned char>(s[i]))) t.set(i, i + 1);
  }
  return t;
}

}  // namespace detail

namespace {

using detail::SpanTable;

class Matcher {
 public:
  Matcher(std::string_view s, const CharSet& alphabet) : s_(s), alphabet_(alphabet) {}

  const SpanTable& eval(const Term& t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    SpanTable r = compute(t);
    return memo_.emplace(t, std::move(r)).first->second;
  }

 private:
  SpanTable compute(const Term& t) {
    const OpIds& o = ops();
    if (t.is_constant() || t.sort() != sorts().e) return SpanTable(s_.size());
    const auto& k = t.children();
    const OpIndex op = t.op();
    if (op == o.from_char_set) return detail::single_chars(s_, char_set(k[0], alphabet_));
    if (op == o.concat) return detail::compose(eval(k[0]), eval(k[1]));
    if (op == o.alter) {
      SpanTable r = eval(k[0]);
      const auto& b = eval(k[1]).raw();
      for (std::size_t x = 0; x < b.size(); ++x) r.raw()[x] |= b[x];
      return r;
    }
    if (op == o.quant) {
      return detail::repeat(eval(k[0]), k[1].int_value(), k[2].int_value());
    }
    if (op == o.quant_min) return detail::repeat(eval(k[0]), k[1].int_value(), -1);
    return SpanTable(s_.size());
  }

  std::string_view s_;
  const CharSet& alphabet_;
  std::unordered_map<Term, SpanTable, TermHash> memo_;
};

}  // namespace

bool match_full(const Term& t, std::string_view s, const CharSet& alphabet) {
  if (t.sort() == sorts().s) {
    return s.size() == 1 && char_set(t, alphabet).test(static_cast<unsigned char>(s[0]));
  }
  if (t.sort() != sorts().e) return false;
  Matcher m(s, alphabet);
  return m.eval(t).accepts();
}

std::vector<std::pair<std::string, bool>> interpretation(const Term& t,
                                                         std::span<const Example> examples,
                                                         const CharSet& alphabet) {
  std::vector<std::pair<std::string, bool>> out;
  out.reserve(examples.size());
  for (const Example& ex : examples) out.emplace_back(ex.input, match_full(t, ex.input, alphabet));
  return out;
}

}  // namespace mmsynth::regex
