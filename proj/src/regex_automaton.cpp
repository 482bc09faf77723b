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

#include <deque>
#include <map>
#include <unordered_map>

#include "mmsynth/regex.hpp"
#include "regex_internal.hpp"

namespace mmsynth::regex {

namespace {

constexpr std::size_t kMaxStates = 200000;

struct TooLarge {};

// Thompson automaton with character-set labelled edges.
struct Nfa {
  std::vector<std::vector<int>> eps;
  std::vector<std::vector<std::pair<CharSet, int>>> edges;
  int start = 0;
  int accept = 0;

  int state() {
    if (eps.size() >= kMaxStates) throw TooLarge{};
    eps.emplace_back();
    edges.emplace_back();
    return static_cast<int>(eps.size() - 1);
  }
};

struct Frag {
  int s, f;
};

class Builder {
 public:
  Builder(Nfa& nfa, const CharSet& alphabet) : nfa_(nfa), alphabet_(alphabet) {}

  Frag build(const Term& t) {
    const OpIds& o = ops();
    if (t.sort() == sorts().s) return symbol(char_set(t, alphabet_));
    if (t.sort() != sorts().e || t.is_constant()) return disconnected();
    const auto& k = t.children();
    const OpIndex op = t.op();
    if (op == o.from_char_set) return symbol(char_set(k[0], alphabet_));
    if (op == o.concat) {
      Frag a = build(k[0]);
      Frag b = build(k[1]);
      nfa_.eps[a.f].push_back(b.s);
      return {a.s, b.f};
    }
    if (op == o.alter) {
      Frag a = build(k[0]);
      Frag b = build(k[1]);
      Frag r{nfa_.state(), nfa_.state()};
      nfa_.eps[r.s] = {a.s, b.s};
      nfa_.eps[a.f].push_back(r.f);
      nfa_.eps[b.f].push_back(r.f);
      return r;
    }
    if (op == o.quant) return repeat(k[0], k[1].int_value(), k[2].int_value());
    if (op == o.quant_min) return repeat(k[0], k[1].int_value(), -1);
    return disconnected();
  }

 private:
  Frag symbol(const CharSet& cs) {
    Frag r{nfa_.state(), nfa_.state()};
    nfa_.edges[r.s].emplace_back(cs, r.f);
    return r;
  }

  Frag disconnected() { return {nfa_.state(), nfa_.state()}; }

  Frag repeat(const Term& e, std::int64_t lo, std::int64_t hi) {
    if (lo < 0 || (hi >= 0 && lo > hi)) return disconnected();
    const int s = nfa_.state();
    int cur = s;
    for (std::int64_t i = 0; i < lo; ++i) {
      Frag f = build(e);
      nfa_.eps[cur].push_back(f.s);
      cur = f.f;
    }
    const int end = nfa_.state();
    if (hi < 0) {
      const int hub = nfa_.state();
      Frag f = build(e);
      nfa_.eps[cur].push_back(hub);
      nfa_.eps[hub].push_back(f.s);
      nfa_.eps[hub].push_back(end);
      nfa_.eps[f.f].push_back(hub);
      return {s, end};
    }
    nfa_.eps[cur].push_back(end);
    for (std::int64_t i = lo; i < hi; ++i) {
      Frag f = build(e);
      nfa_.eps[cur].push_back(f.s);
      cur = f.f;
      nfa_.eps[cur].push_back(end);
    }
    return {s, end};
  }

  Nfa& nfa_;
  const CharSet& alphabet_;
};

using Bits = std::vector<std::uint64_t>;

bool test(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1U; }
void put(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }

// Subset simulation over a fixed list of representative characters.
class Simulator {
 public:
  Simulator(const Term& t, const CharSet& alphabet, const std::vector<unsigned char>& reps) {
    Builder b(nfa_, alphabet);
    Frag f = b.build(t);
    nfa_.start = f.s;
    nfa_.accept = f.f;
    const std::size_t n = nfa_.eps.size();
    words_ = detail::words_for(n);
    closure_.assign(n, Bits(words_, 0));
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<int> stack{static_cast<int>(q)};
      put(closure_[q], q);
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : nfa_.eps[u]) {
          if (!test(closure_[q], v)) {
            put(closure_[q], v);
            stack.push_back(v);
          }
        }
      }
    }
    step_.assign(reps.size(), std::vector<Bits>(n, Bits(words_, 0)));
    for (std::size_t r = 0; r < reps.size(); ++r) {
      for (std::size_t q = 0; q < n; ++q) {
        for (const auto& [cs, to] : nfa_.edges[q]) {
          if (!cs.test(reps[r])) continue;
          for (std::size_t x = 0; x < words_; ++x) step_[r][q][x] |= closure_[to][x];
        }
      }
    }
  }

  Bits initial() const { return closure_[nfa_.start]; }
  bool accepting(const std::uint64_t* set) const {
    return (set[nfa_.accept >> 6] >> (nfa_.accept & 63)) & 1U;
  }
  std::size_t words() const { return words_; }

  void advance(const std::uint64_t* set, std::size_t rep, std::uint64_t* out) const {
    std::fill(out, out + words_, 0);
    for (std::size_t x = 0; x < words_; ++x) {
      std::uint64_t w = set[x];
      while (w) {
        const std::size_t q = x * 64 + static_cast<std::size_t>(__builtin_ctzll(w));
        w &= w - 1;
        const Bits& tgt = step_[rep][q];
        for (std::size_t y = 0; y < words_; ++y) out[y] |= tgt[y];
      }
    }
  }

 private:
  Nfa nfa_;
  std::size_t words_ = 1;
  std::vector<Bits> closure_;
  std::vector<std::vector<Bits>> step_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t w : b) h = (h ^ w) * 0x100000001b3ULL;
    return h;
  }
};

void collect_sets(const Term& t, const CharSet& alphabet, std::vector<CharSet>& out) {
  if (t.sort() == sorts().s) {
    out.push_back(char_set(t, alphabet));
    return;
  }
  for (const Term& c : t.children()) collect_sets(c, alphabet, out);
}

}  // namespace

std::vector<unsigned char> relevant_alphabet(const Term& p, const Term& g,
                                             const CharSet& alphabet) {
  std::vector<CharSet> sets;
  collect_sets(p, alphabet, sets);
  collect_sets(g, alphabet, sets);
  CharSet universe = alphabet;
  for (const CharSet& s : sets) universe |= s;
  // One representative (the smallest member) per membership signature.
  std::map<std::vector<bool>, unsigned char> classes;
  for (int c = 0; c < 256; ++c) {
    if (!universe.test(c)) continue;
    std::vector<bool> sig(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) sig[i] = sets[i].test(c);
    classes.emplace(std::move(sig), static_cast<unsigned char>(c));
  }
  std::vector<unsigned char> reps;
  for (const auto& [sig, c] : classes) reps.push_back(c);
  std::sort(reps.begin(), reps.end());
  return reps;
}

BoundedComparison compare_bounded(const Term& p, const Term& g, std::size_t max_len,
                                  std::size_t max_configs, const CharSet& alphabet) {
  BoundedComparison out;
  const std::vector<unsigned char> reps = relevant_alphabet(p, g, alphabet);
  std::optional<Simulator> sp, sg;
  try {
    sp.emplace(p, alphabet, reps);
    sg.emplace(g, alphabet, reps);
  } catch (const TooLarge&) {
    return out;
  }
  const std::size_t wp = sp->words(), wg = sg->words();

  struct Config {
    Bits sets;
    std::size_t parent;
    unsigned char via;
    std::size_t depth;
  };
  std::vector<Config> configs;
  std::unordered_map<Bits, std::size_t, BitsHash> seen;
  auto spell = [&](std::size_t idx) {
    std::string s;
    while (idx != 0) {
      s.push_back(static_cast<char>(configs[idx].via));
      idx = configs[idx].parent;
    }
    return std::string(s.rbegin(), s.rend());
  };

  Bits init = sp->initial();
  const Bits ig = sg->initial();
  init.insert(init.end(), ig.begin(), ig.end());
  seen.emplace(init, 0);
  configs.push_back({std::move(init), 0, 0, 0});

  bool exhausted = true;
  for (std::size_t head = 0; head < configs.size(); ++head) {
    const std::uint64_t* setp = configs[head].sets.data();
    const std::uint64_t* setg = setp + wp;
    const bool ap = sp->accepting(setp), ag = sg->accepting(setg);
    if (ap && !ag && !out.first_only) out.first_only = spell(head);
    if (ag && !ap && !out.second_only) out.second_only = spell(head);
    if (out.first_only && out.second_only) break;
    if (configs[head].depth >= max_len) continue;
    bool live = false;
    for (std::size_t x = 0; x < wp + wg && !live; ++x) live = configs[head].sets[x] != 0;
    if (!live) continue;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      Bits next(wp + wg, 0);
      sp->advance(configs[head].sets.data(), r, next.data());
      sg->advance(configs[head].sets.data() + wp, r, next.data() + wp);
      if (seen.count(next)) continue;
      if (configs.size() >= max_configs) {
        exhausted = false;
        break;
      }
      seen.emplace(next, configs.size());
      configs.push_back({std::move(next), head, reps[r], configs[head].depth + 1});
    }
    if (!exhausted) break;
  }

  if (out.first_only || out.second_only) {
    out.verdict = Verdict::kDifferent;
  } else {
    out.verdict = exhausted ? Verdict::kEqual : Verdict::kUnknown;
  }
  return out;
}

}  // namespace mmsynth::regex
