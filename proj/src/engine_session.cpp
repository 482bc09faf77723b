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

#include "engine_session.hpp"

#include <algorithm>
#include <cmath>

namespace mmsynth::detail {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t bloom_bit(SortId sort, std::uint32_t interp) {
  const std::uint64_t h = (static_cast<std::uint64_t>(interp) * 0x9E3779B97F4A7C15ull) ^
                          (static_cast<std::uint64_t>(sort) * 0xC2B2AE3D27D4EB4Full);
  return std::uint64_t{1} << (h >> 58);
}

bool node_less(const Node& a, NodeId ia, const Node& b, NodeId ib) {
  if (a.euclid != b.euclid) return a.euclid < b.euclid;
  if (a.size != b.size) return a.size < b.size;
  return ia < ib;
}

}  // namespace

std::size_t WordsHash::operator()(const Words& w) const {
  std::uint64_t h = w.size();
  for (std::uint64_t x : w) h = mix(h, x);
  return static_cast<std::size_t>(h);
}

Session::Session(const Dsl& dsl, Semantics& sem, std::span<const Term> programs,
                 const SynthesisConfig& cfg)
    : dsl_(dsl),
      sem_(sem),
      cfg_(cfg),
      nops_(dsl.operators().size()),
      interps_(dsl.sorts().size()),
      cache_(dsl.sorts().size()) {
  avg_ = programs.empty() ? OpVector{std::vector<double>(nops_, 0.0)}
                          : average_op_vector(programs, dsl);
  table_.assign(1u << 12, kNoNode);
}

std::size_t Session::key_hash(std::uint32_t head, std::uint32_t lit, const NodeId* kids,
                              std::size_t arity) const {
  std::uint64_t h = mix(head, lit);
  for (std::size_t k = 0; k < arity; ++k) h = mix(h, kids[k]);
  return static_cast<std::size_t>(h * 0xFF51AFD7ED558CCDull);
}

NodeId Session::find(std::uint32_t head, std::uint32_t lit, const NodeId* kids,
                     std::size_t arity) const {
  const std::size_t mask = table_.size() - 1;
  for (std::size_t i = key_hash(head, lit, kids, arity) & mask;; i = (i + 1) & mask) {
    const NodeId id = table_[i];
    if (id == kNoNode) return kNoNode;
    const Node& n = nodes_[id];
    if (n.head != head || n.lit != lit || n.arity != arity) continue;
    if (std::equal(kids, kids + arity, n.kids.begin())) return id;
  }
}

void Session::table_insert(NodeId id) {
  if ((nodes_.size() + 1) * 2 > table_.size()) {
    std::vector<NodeId> old(table_.size() * 2, kNoNode);
    old.swap(table_);
    for (NodeId x : old) {
      if (x == kNoNode) continue;
      const Node& n = nodes_[x];
      const std::size_t mask = table_.size() - 1;
      std::size_t i = key_hash(n.head, n.lit, n.kids.data(), n.arity) & mask;
      while (table_[i] != kNoNode) i = (i + 1) & mask;
      table_[i] = x;
    }
  }
  const Node& n = nodes_[id];
  const std::size_t mask = table_.size() - 1;
  std::size_t i = key_hash(n.head, n.lit, n.kids.data(), n.arity) & mask;
  while (table_[i] != kNoNode) i = (i + 1) & mask;
  table_[i] = id;
}

std::uint32_t Session::intern_interp(SortId sort, const Words& w) {
  auto& m = interps_[sort];
  return m.try_emplace(w, static_cast<std::uint32_t>(m.size())).first->second;
}

bool Session::sub_interp_match(NodeId root, SortId sort, std::uint32_t interp) const {
  const std::uint64_t bit = bloom_bit(sort, interp);
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    if (n.sort == sort && n.interp == interp) return true;
    for (std::size_t k = 0; k < n.arity; ++k) {
      if (nodes_[n.kids[k]].bloom & bit) stack.push_back(n.kids[k]);
    }
  }
  return false;
}

NodeId Session::create(std::uint32_t head, SortId sort, std::uint32_t lit, const NodeId* kids,
                       std::size_t arity, const Words& interp) {
  if (nodes_.size() >= kNoNode - 1) throw std::length_error("term arena exhausted");
  Node n;
  n.head = head;
  n.sort = sort;
  n.lit = lit;
  n.arity = static_cast<std::uint8_t>(arity);
  n.interp = intern_interp(sort, interp);
  const std::uint64_t bit = bloom_bit(sort, n.interp);
  n.bloom = bit;
  const NodeId id = static_cast<NodeId>(nodes_.size());
  const std::size_t base = opcounts_.size();
  opcounts_.resize(base + nops_, 0);
  for (std::size_t k = 0; k < arity; ++k) {
    const Node& c = nodes_[kids[k]];
    n.kids[k] = kids[k];
    n.size += c.size;
    n.bloom |= c.bloom;
    const std::size_t cb = static_cast<std::size_t>(kids[k]) * nops_;
    for (std::size_t i = 0; i < nops_; ++i) {
      const std::uint32_t sum = opcounts_[base + i] + opcounts_[cb + i];
      opcounts_[base + i] = static_cast<std::uint16_t>(std::min<std::uint32_t>(sum, 0xFFFF));
    }
  }
  if (head != kConstHead && opcounts_[base + head] < 0xFFFF) ++opcounts_[base + head];
  double sq = 0.0;
  std::size_t ham = 0;
  for (std::size_t i = 0; i < nops_; ++i) {
    const double v = opcounts_[base + i];
    const double d = v - avg_.counts[i];
    sq += d * d;
    if (v > cfg_.op_th && avg_.counts[i] < cfg_.op_th) ++ham;
  }
  n.euclid = std::sqrt(sq);
  n.hamming = static_cast<std::uint16_t>(std::min<std::size_t>(ham, 0xFFFF));
  for (std::size_t k = 0; k < arity && !n.redundant; ++k) {
    if ((nodes_[kids[k]].bloom & bit) && sub_interp_match(kids[k], sort, n.interp)) {
      n.redundant = true;
    }
  }
  n.consistent = sort == dsl_.closed_sort() && sem_.consistent(interp);
  nodes_.push_back(n);
  table_insert(id);
  return id;
}

const Words& Session::full(NodeId id) {
  if (auto it = full_.find(id); it != full_.end()) return it->second;
  const Node n = nodes_[id];
  Words v;
  if (n.head == kConstHead) {
    v = sem_.constant_value(literals_[n.lit]);
  } else {
    std::array<const Words*, kMaxArity> ptrs{};
    for (std::size_t k = 0; k < n.arity; ++k) ptrs[k] = &full(n.kids[k]);
    v = sem_.apply(n.head, std::span<const Words* const>(ptrs.data(), n.arity));
  }
  return full_.emplace(id, std::move(v)).first->second;
}

NodeId Session::intern(const Term& t) {
  if (t.is_constant()) {
    auto [it, fresh] = literal_ids_.try_emplace(t, static_cast<std::uint32_t>(literals_.size()));
    if (fresh) literals_.push_back(t);
    const std::uint32_t lit = it->second;
    const NodeId found = find(kConstHead, lit, nullptr, 0);
    if (found != kNoNode) return found;
    return create(kConstHead, t.sort(), lit, nullptr, 0,
                  sem_.project(t.sort(), sem_.constant_value(t)));
  }
  if (t.arity() > kMaxArity) throw std::invalid_argument("operator arity above 4");
  std::array<NodeId, kMaxArity> kids{};
  for (std::size_t k = 0; k < t.arity(); ++k) kids[k] = intern(t.children()[k]);
  const NodeId found = find(t.op(), 0, kids.data(), t.arity());
  if (found != kNoNode) return found;
  std::array<const Words*, kMaxArity> ptrs{};
  for (std::size_t k = 0; k < t.arity(); ++k) ptrs[k] = &full(kids[k]);
  const Words w =
      sem_.interpret_apply(t.op(), t.sort(), std::span<const Words* const>(ptrs.data(), t.arity()));
  return create(t.op(), t.sort(), 0, kids.data(), t.arity(), w);
}

bool Session::add_to_cache(NodeId id) {
  Node& n = nodes_[id];
  if (n.in_cache) return false;
  n.in_cache = true;
  cache_[n.sort].push_back(id);
  return true;
}

std::size_t Session::cache_size() const {
  std::size_t total = 0;
  for (const auto& v : cache_) total += v.size();
  return total;
}

std::vector<std::vector<NodeId>> Session::prune() const {
  std::vector<std::vector<NodeId>> out(cache_.size());
  auto less = [&](NodeId a, NodeId b) { return node_less(nodes_[a], a, nodes_[b], b); };
  for (std::size_t s = 0; s < cache_.size(); ++s) {
    std::vector<NodeId>& keep = out[s];
    if (cfg_.full_expansion) {
      keep = cache_[s];
    } else {
      std::vector<NodeId> v3;
      for (NodeId id : cache_[s]) {
        if (!nodes_[id].redundant && nodes_[id].hamming == 0) v3.push_back(id);
      }
      if (cfg_.beam_size == kUnboundedBeam) {
        keep = std::move(v3);
      } else {
        std::unordered_map<std::uint32_t, std::vector<NodeId>> classes;
        for (NodeId id : v3) classes[nodes_[id].interp].push_back(id);
        const auto total = static_cast<unsigned __int128>(v3.size());
        for (auto& [interp, members] : classes) {
          const auto share =
              (static_cast<unsigned __int128>(members.size()) * cfg_.beam_size + total - 1) / total;
          const std::size_t quota = std::max<std::size_t>(
              1, static_cast<std::size_t>(std::min<unsigned __int128>(share, members.size())));
          if (quota < members.size()) {
            std::partial_sort(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(quota),
                              members.end(), less);
            members.resize(quota);
          }
          keep.insert(keep.end(), members.begin(), members.end());
        }
      }
    }
    std::sort(keep.begin(), keep.end(), less);
  }
  return out;
}

bool Session::past_deadline() {
  if (!deadline_) return false;
  if (std::chrono::steady_clock::now() > *deadline_) timed_out_ = true;
  return timed_out_;
}

bool Session::expand(const std::vector<std::vector<NodeId>>& pruned, bool fused) {
  if (cfg_.merge_into_pruned) {
    for (std::size_t s = 0; s < cache_.size(); ++s) {
      for (NodeId id : cache_[s]) nodes_[id].in_cache = false;
      cache_[s] = pruned[s];
      for (NodeId id : cache_[s]) nodes_[id].in_cache = true;
    }
  }
  const SortId closed = dsl_.closed_sort();
  for (const Operator& op : dsl_.operators()) {
    if (fused && op.ret_sort != closed) continue;
    const std::size_t arity = op.arity();
    if (arity > kMaxArity) throw std::invalid_argument("operator arity above 4");
    std::array<const std::vector<NodeId>*, kMaxArity> lists{};
    bool empty = false;
    for (std::size_t k = 0; k < arity; ++k) {
      lists[k] = &pruned[op.arg_sorts[k]];
      empty = empty || lists[k]->empty();
    }
    if (empty) continue;
    const bool symmetric = op.commutative && arity == 2;
    std::size_t made = 0;
    bool capped = false;
    std::array<std::size_t, kMaxArity> idx{};
    std::array<NodeId, kMaxArity> kids{};
    std::array<const Words*, kMaxArity> ptrs{};
    for (;;) {
      if ((++ticks_ & 1023) == 0 && past_deadline()) return false;
      for (std::size_t k = 0; k < arity; ++k) kids[k] = (*lists[k])[idx[k]];
      const NodeId existing = find(op.index, 0, kids.data(), arity);
      if (existing != kNoNode) {
        if (!nodes_[existing].in_cache && (!fused || nodes_[existing].consistent)) {
          add_to_cache(existing);
          ++made;
        }
      } else {
        for (std::size_t k = 0; k < arity; ++k) ptrs[k] = &full(kids[k]);
        const Words w = sem_.interpret_apply(op.index, op.ret_sort,
                                             std::span<const Words* const>(ptrs.data(), arity));
        if (!fused || sem_.consistent(w)) {
          add_to_cache(create(op.index, op.ret_sort, 0, kids.data(), arity, w));
          ++made;
        }
      }
      if (made >= cfg_.max_terms_per_operator) {
        capped = true;
        break;
      }
      // Advance the odometer; symmetric operators keep idx[1] >= idx[0].
      std::size_t k = arity;
      while (k > 0) {
        --k;
        if (++idx[k] < lists[k]->size()) break;
        idx[k] = 0;
        if (k == 0) {
          k = arity + 1;
          break;
        }
      }
      if (arity == 0 || k == arity + 1) break;
      if (symmetric && idx[1] < idx[0]) idx[1] = idx[0];
    }
    if (capped) {
      warnings_.push_back("expansion of " + op.name + " truncated at " +
                          std::to_string(cfg_.max_terms_per_operator) + " terms");
    }
  }
  return true;
}

std::vector<NodeId> Session::consistent_nodes() const {
  std::vector<NodeId> out;
  for (NodeId id : cache_[dsl_.closed_sort()]) {
    if (nodes_[id].consistent) out.push_back(id);
  }
  return out;
}

Term Session::materialize(NodeId id) {
  if (auto it = terms_.find(id); it != terms_.end()) return it->second;
  const Node n = nodes_[id];
  Term t;
  if (n.head == kConstHead) {
    t = literals_[n.lit];
  } else {
    std::vector<Term> kids;
    for (std::size_t k = 0; k < n.arity; ++k) kids.push_back(materialize(n.kids[k]));
    t = Term::apply(n.head, n.sort, std::move(kids));
  }
  terms_.emplace(id, t);
  return t;
}

}  // namespace mmsynth::detail
