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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmsynth/candidates.hpp"
#include "mmsynth/dsl.hpp"
#include "mmsynth/semantics.hpp"

namespace mmsynth {

inline constexpr std::size_t kUnboundedBeam = std::numeric_limits<std::size_t>::max();

struct SynthesisConfig {
  std::size_t synth_depth = 3;
  double pr_occ = 0.1;
  double pr_red = 0.0;
  std::size_t beam_size = 2000;  // kUnboundedBeam disables the quota
  double op_th = 1.0;            // +infinity disables the operator filter
  std::chrono::milliseconds time_budget{60000};

  // Ablations: all atoms as initial components (v1), expansion without
  // pruning (v2), uniformly random choice among consistent programs (v3).
  bool init_all_atoms = false;
  bool full_expansion = false;
  bool random_rank = false;
  std::uint64_t seed = 0;

  // Merge expansion results into the pruned cache instead of the input cache.
  bool merge_into_pruned = false;
  // Run every iteration even after a consistent program appears.
  bool exhaust_depth = false;
  // New terms per operator and iteration before that operator is cut off.
  std::size_t max_terms_per_operator = 1'500'000;
};

// Terms bucketed by sort, deduplicated, in insertion order.
class Cache {
 public:
  explicit Cache(std::size_t num_sorts = 0) : by_sort_(num_sorts) {}

  bool insert(const Term& t);
  bool contains(const Term& t) const { return index_.count(t) > 0; }
  const std::vector<Term>& sort(SortId s) const { return by_sort_.at(s); }
  std::size_t num_sorts() const { return by_sort_.size(); }
  std::size_t size() const { return index_.size(); }

 private:
  std::vector<std::vector<Term>> by_sort_;
  TermSet index_;
};

std::size_t hamming_distance(const OpVector& avg, const Term& t, double op_th, const Dsl& dsl);
std::size_t hamming_distance(std::span<const Term> programs, const Term& t, double op_th,
                             const Dsl& dsl);
double euclidean_distance(const OpVector& avg, const Term& t, const Dsl& dsl);
double euclidean_distance(std::span<const Term> programs, const Term& t, const Dsl& dsl);

// Maximal components of the candidates plus standard components. An empty
// candidate list yields the standard components only.
Cache initialize(std::span<const Term> programs, const SynthesisConfig& cfg, const Dsl& dsl,
                 std::vector<std::string>* warnings = nullptr);

// Per sort: drop terms observationally equal to a proper same-sort sub-term,
// drop terms with nonzero Hamming distance, then keep each semantic class's
// beam share ordered by Euclidean distance.
Cache prune(const Cache& cache, std::span<const Term> programs, Semantics& sem,
            const SynthesisConfig& cfg, const Dsl& dsl);

// One round: prune, apply every operator to the pruned terms, merge.
Cache expand(const Cache& cache, std::span<const Term> programs, Semantics& sem,
             const SynthesisConfig& cfg, const Dsl& dsl);

// Ascending by (Euclidean distance, mean edit distance of the printed term
// to `sources`, size, printed form).
std::vector<Term> rank(std::span<const Term> terms, std::span<const Term> programs,
                       std::span<const std::string> sources, const Domain& domain);

struct SynthesisStats {
  std::size_t candidates = 0;
  std::size_t initial_components = 0;
  // Closed-sort cache size after each iteration.
  std::vector<std::size_t> cache_sizes;
  // Terms handed to expansion in each iteration.
  std::vector<std::size_t> pruned_sizes;
  std::size_t iterations = 0;
  std::size_t consistent = 0;
  bool timed_out = false;
  std::vector<std::string> warnings;
};

struct SynthesisResult {
  std::optional<Term> program;
  SynthesisStats stats;
};

// `sem` carries the examples. Returns no program when nothing in the cache
// is consistent. Throws InputError when `programs` is empty.
SynthesisResult synthesize(std::span<const Term> programs, std::span<const std::string> sources,
                           Semantics& sem, const Domain& domain, const SynthesisConfig& cfg);
SynthesisResult synthesize(const CandidateSet& candidates, Semantics& sem, const Domain& domain,
                           const SynthesisConfig& cfg);

}  // namespace mmsynth
