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

#include "mmsynth/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <tuple>
#include <unordered_map>

#include "engine_session.hpp"
#include "mmsynth/error.hpp"
#include "mmsynth/prompt.hpp"

namespace mmsynth {

namespace {

using detail::NodeId;
using detail::Session;

OpVector average_or_zero(std::span<const Term> programs, const Dsl& dsl) {
  if (programs.empty()) return OpVector{std::vector<double>(dsl.operators().size(), 0.0)};
  return average_op_vector(programs, dsl);
}

// Distinct sub-terms of `t` in post-order, appended to `out`.
void collect_postorder(const Term& t, TermSet& seen, std::vector<Term>& out) {
  if (seen.count(t)) return;
  for (const Term& c : t.children()) collect_postorder(c, seen, out);
  if (seen.insert(t).second) out.push_back(t);
}

void load(Session& s, const Cache& cache) {
  for (SortId sort = 0; sort < cache.num_sorts(); ++sort) {
    for (const Term& t : cache.sort(sort)) s.add_to_cache(s.intern(t));
  }
}

Cache to_cache(Session& s, const std::vector<std::vector<NodeId>>& ids) {
  Cache out(ids.size());
  for (const auto& v : ids) {
    for (NodeId id : v) out.insert(s.materialize(id));
  }
  return out;
}

void validate(const SynthesisConfig& cfg) {
  if (cfg.synth_depth == 0) throw InputError("synth_depth must be at least 1");
  if (cfg.beam_size == 0) throw InputError("beam_size must be at least 1");
  if (!(cfg.pr_occ >= 0.0 && cfg.pr_occ <= 1.0)) throw InputError("pr_occ must be in [0, 1]");
  if (!(cfg.pr_red >= 0.0 && cfg.pr_red <= 1.0)) throw InputError("pr_red must be in [0, 1]");
  if (std::isnan(cfg.op_th) || cfg.op_th < 0.0) throw InputError("op_th must be non-negative");
  if (cfg.time_budget.count() <= 0) throw InputError("time_budget must be positive");
}

}  // namespace

bool Cache::insert(const Term& t) {
  if (t.sort() >= by_sort_.size()) throw std::out_of_range("cache sort out of range");
  if (!index_.insert(t).second) return false;
  by_sort_[t.sort()].push_back(t);
  return true;
}

std::size_t hamming_distance(const OpVector& avg, const Term& t, double op_th, const Dsl& dsl) {
  const OpVector v = op_vector(t, dsl);
  std::size_t n = 0;
  for (std::size_t i = 0; i < v.counts.size(); ++i) {
    if (v.counts[i] > op_th && avg.counts[i] < op_th) ++n;
  }
  return n;
}

std::size_t hamming_distance(std::span<const Term> programs, const Term& t, double op_th,
                             const Dsl& dsl) {
  return hamming_distance(average_or_zero(programs, dsl), t, op_th, dsl);
}

double euclidean_distance(const OpVector& avg, const Term& t, const Dsl& dsl) {
  const OpVector v = op_vector(t, dsl);
  double sq = 0.0;
  for (std::size_t i = 0; i < v.counts.size(); ++i) {
    const double d = v.counts[i] - avg.counts[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

double euclidean_distance(std::span<const Term> programs, const Term& t, const Dsl& dsl) {
  return euclidean_distance(average_or_zero(programs, dsl), t, dsl);
}

Cache initialize(std::span<const Term> programs, const SynthesisConfig& cfg, const Dsl& dsl,
                 std::vector<std::string>* warnings) {
  Cache cache(dsl.sorts().size());
  if (programs.empty() && warnings) {
    warnings->push_back("no candidates; starting from standard components only");
  }

  std::vector<Term> v1;
  TermSet seen;
  std::unordered_map<Term, std::size_t, TermHash> cnt;
  for (const Term& p : programs) {
    collect_postorder(p, seen, v1);
    for (const Term& t : subterms(p)) ++cnt[t];
  }

  if (cfg.init_all_atoms) {
    for (const Term& t : v1) {
      if (is_atomic(t)) cache.insert(t);
    }
  } else {
    // s(t): members of v1 containing t; s_r(t): those other than t with the
    // same occurrence count.
    std::unordered_map<Term, std::size_t, TermHash> s_all;
    std::unordered_map<Term, std::size_t, TermHash> s_red;
    for (const Term& sup : v1) {
      const std::size_t c = cnt[sup];
      for (const Term& t : subterms(sup)) {
        ++s_all[t];
        if (t != sup && cnt[t] == c) ++s_red[t];
      }
    }
    const double n = static_cast<double>(programs.size());
    for (const Term& t : v1) {
      const double occ = static_cast<double>(cnt[t]) / n;
      const double red = static_cast<double>(s_red[t]) / static_cast<double>(s_all[t]);
      if (occ >= cfg.pr_occ && red <= cfg.pr_red) cache.insert(t);
    }
  }
  for (const Term& t : dsl.standard_components()) cache.insert(t);
  return cache;
}

Cache prune(const Cache& cache, std::span<const Term> programs, Semantics& sem,
            const SynthesisConfig& cfg, const Dsl& dsl) {
  Session s(dsl, sem, programs, cfg);
  load(s, cache);
  return to_cache(s, s.prune());
}

Cache expand(const Cache& cache, std::span<const Term> programs, Semantics& sem,
             const SynthesisConfig& cfg, const Dsl& dsl) {
  Session s(dsl, sem, programs, cfg);
  load(s, cache);
  s.expand(s.prune(), false);
  std::vector<std::vector<NodeId>> all;
  for (SortId sort = 0; sort < dsl.sorts().size(); ++sort) all.push_back(s.cache(sort));
  return to_cache(s, all);
}

std::vector<Term> rank(std::span<const Term> terms, std::span<const Term> programs,
                       std::span<const std::string> sources, const Domain& domain) {
  const Dsl& dsl = domain.dsl();
  const OpVector avg = average_or_zero(programs, dsl);
  struct Keyed {
    double euclid;
    double lev;
    std::size_t size;
    std::string text;
    Term term;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(terms.size());
  for (const Term& t : terms) {
    std::string text = domain.print(t);
    double lev = 0.0;
    for (const std::string& src : sources) lev += static_cast<double>(levenshtein(text, src));
    if (!sources.empty()) lev /= static_cast<double>(sources.size());
    keyed.push_back({euclidean_distance(avg, t, dsl), lev, t.size(), std::move(text), t});
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.euclid, a.lev, a.size, a.text) < std::tie(b.euclid, b.lev, b.size, b.text);
  });
  std::vector<Term> out;
  out.reserve(keyed.size());
  for (Keyed& k : keyed) out.push_back(std::move(k.term));
  return out;
}

SynthesisResult synthesize(std::span<const Term> programs, std::span<const std::string> sources,
                           Semantics& sem, const Domain& domain, const SynthesisConfig& cfg) {
  if (programs.empty()) throw InputError("no candidates");
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  const Dsl& dsl = domain.dsl();
  SynthesisResult result;
  SynthesisStats& st = result.stats;
  st.candidates = programs.size();

  Session s(dsl, sem, programs, cfg);
  s.set_deadline(start + cfg.time_budget);
  const Cache init = initialize(programs, cfg, dsl, &st.warnings);
  st.initial_components = init.size();
  load(s, init);

  for (std::size_t it = 1; it <= cfg.synth_depth; ++it) {
    const auto pruned = s.prune();
    std::size_t total = 0;
    for (const auto& v : pruned) total += v.size();
    st.pruned_sizes.push_back(total);
    const bool ok = s.expand(pruned, it == cfg.synth_depth);
    st.iterations = it;
    st.cache_sizes.push_back(s.cache(dsl.closed_sort()).size());
    if (!ok) {
      st.timed_out = true;
      st.warnings.push_back("time budget exhausted in iteration " + std::to_string(it));
      break;
    }
    if (!cfg.exhaust_depth && !s.consistent_nodes().empty()) break;
  }
  st.warnings.insert(st.warnings.end(), s.warnings().begin(), s.warnings().end());

  const std::vector<NodeId> consistent = s.consistent_nodes();
  st.consistent = consistent.size();
  if (consistent.empty()) return result;

  if (cfg.random_rank) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, consistent.size() - 1);
    result.program = s.materialize(consistent[pick(rng)]);
    return result;
  }
  double best = s.node(consistent.front()).euclid;
  for (NodeId id : consistent) best = std::min(best, s.node(id).euclid);
  std::vector<Term> group;
  for (NodeId id : consistent) {
    if (s.node(id).euclid == best) group.push_back(s.materialize(id));
  }
  result.program = rank(group, programs, sources, domain).front();
  return result;
}

SynthesisResult synthesize(const CandidateSet& candidates, Semantics& sem, const Domain& domain,
                           const SynthesisConfig& cfg) {
  return synthesize(candidates.programs(), candidates.sources(), sem, domain, cfg);
}

}  // namespace mmsynth
