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

// Span tables shared by the matcher and the synthesis semantics.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mmsynth/regex.hpp"

namespace mmsynth::regex::detail {

CharSet named_class_set(char which);

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

// Row i holds the set of j such that the span [i, j) is accepted.
class SpanTable {
 public:
  SpanTable() = default;
  explicit SpanTable(std::size_t n) : n_(n), w_(words_for(n + 1)), bits_((n + 1) * w_, 0) {}

  std::size_t n() const { return n_; }
  std::size_t w() const { return w_; }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * w_; }
  std::uint64_t* row(std::size_t i) { return bits_.data() + i * w_; }
  bool get(std::size_t i, std::size_t j) const { return (row(i)[j >> 6] >> (j & 63)) & 1U; }
  void set(std::size_t i, std::size_t j) { row(i)[j >> 6] |= std::uint64_t{1} << (j & 63); }
  bool accepts() const { return get(0, n_); }
  std::vector<std::uint64_t>& raw() { return bits_; }
  const std::vector<std::uint64_t>& raw() const { return bits_; }

  static SpanTable identity(std::size_t n) {
    SpanTable t(n);
    for (std::size_t i = 0; i <= n; ++i) t.set(i, i);
    return t;
  }

 private:
  std::size_t n_ = 0;
  std::size_t w_ = 1;
  std::vector<std::uint64_t> bits_;
};

// dst = {j | exists k in src: j in table.row(k)}; all rows have `w` words.
inline void step_row(const std::uint64_t* src, const std::uint64_t* table, std::size_t n,
                     std::size_t w, std::uint64_t* dst) {
  for (std::size_t x = 0; x < w; ++x) dst[x] = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    if ((src[k >> 6] >> (k & 63)) & 1U) {
      const std::uint64_t* r = table + k * w;
      for (std::size_t x = 0; x < w; ++x) dst[x] |= r[x];
    }
  }
}

// Ends reachable from the single start position `start` by k blocks of
// `table` with lo <= k <= hi (hi < 0 means unbounded). Writes `w` words.
void repeat_row(const std::uint64_t* table, std::size_t n, std::size_t w, std::size_t start,
                std::int64_t lo, std::int64_t hi, std::uint64_t* out);

SpanTable compose(const SpanTable& a, const SpanTable& b);
SpanTable repeat(const SpanTable& e, std::int64_t lo, std::int64_t hi);
SpanTable single_chars(std::string_view s, const CharSet& cs);

}  // namespace mmsynth::regex::detail
