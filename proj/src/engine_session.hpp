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

// Arena-backed search state shared by the public engine entry points.

#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmsynth/engine.hpp"

namespace mmsynth::detail {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xFFFFFFFFu;
inline constexpr std::uint32_t kConstHead = 0xFFFFFFFFu;
inline constexpr std::size_t kMaxArity = 4;

struct WordsHash {
  std::size_t operator()(const Words& w) const;
};

struct Node {
  std::uint32_t head = kConstHead;
  SortId sort = 0;
  std::uint32_t lit = 0;
  std::array<NodeId, kMaxArity> kids{kNoNode, kNoNode, kNoNode, kNoNode};
  std::uint8_t arity = 0;
  std::uint32_t size = 1;
  std::uint32_t interp = 0;
  // Bit per (sort, interpretation) over the subtree, for the sub-term check.
  std::uint64_t bloom = 0;
  double euclid = 0.0;
  std::uint16_t hamming = 0;
  bool in_cache = false;
  bool redundant = false;
  bool consistent = false;
};

class Session {
 public:
  Session(const Dsl& dsl, Semantics& sem, std::span<const Term> programs,
          const SynthesisConfig& cfg);

  const Node& node(NodeId id) const { return nodes_[id]; }
  std::size_t num_nodes() const { return nodes_.size(); }
  const OpVector& average() const { return avg_; }

  // Adds `t` (and its sub-terms to the arena); returns its id.
  NodeId intern(const Term& t);
  // Marks `id` as a cache member; false if it already was one.
  bool add_to_cache(NodeId id);
  const std::vector<NodeId>& cache(SortId s) const { return cache_[s]; }
  std::size_t cache_size() const;

  // Survivors per sort, ordered by (euclid, size, id).
  std::vector<std::vector<NodeId>> prune() const;

  // One expansion round over `pruned`. With `fused`, only closed-sort
  // results are built and only consistent ones are kept. Returns false on
  // timeout.
  bool expand(const std::vector<std::vector<NodeId>>& pruned, bool fused);

  std::vector<NodeId> consistent_nodes() const;
  Term materialize(NodeId id);

  void set_deadline(std::chrono::steady_clock::time_point d) { deadline_ = d; }
  bool timed_out() const { return timed_out_; }
  std::vector<std::string>& warnings() { return warnings_; }

 private:
  NodeId find(std::uint32_t head, std::uint32_t lit, const NodeId* kids, std::size_t arity) const;
  NodeId create(std::uint32_t head, SortId sort, std::uint32_t lit, const NodeId* kids,
                std::size_t arity, const Words& interp);
  const Words& full(NodeId id);
  std::uint32_t intern_interp(SortId sort, const Words& w);
  bool sub_interp_match(NodeId root, SortId sort, std::uint32_t interp) const;
  void table_insert(NodeId id);
  std::size_t key_hash(std::uint32_t head, std::uint32_t lit, const NodeId* kids,
                       std::size_t arity) const;
  bool past_deadline();

  const Dsl& dsl_;
  Semantics& sem_;
  SynthesisConfig cfg_;
  std::size_t nops_;
  OpVector avg_;

  std::vector<Node> nodes_;
  std::vector<std::uint16_t> opcounts_;
  std::vector<NodeId> table_;
  std::vector<Term> literals_;
  std::unordered_map<Term, std::uint32_t, TermHash> literal_ids_;
  std::vector<std::unordered_map<Words, std::uint32_t, WordsHash>> interps_;
  std::unordered_map<NodeId, Words> full_;
  std::unordered_map<NodeId, Term> terms_;
  std::vector<std::vector<NodeId>> cache_;

  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t ticks_ = 0;
  bool timed_out_ = false;
  std::vector<std::string> warnings_;
};

}  // namespace mmsynth::detail
