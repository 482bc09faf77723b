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
#include <cctype>
#include <unordered_map>

#include "mmsynth/css.hpp"
#include "mmsynth/error.hpp"

namespace mmsynth::css {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

bool test(const Words& w, std::size_t k) { return (w[k / 64] >> (k % 64)) & 1U; }
void set(Words& w, std::size_t k) { w[k / 64] |= std::uint64_t{1} << (k % 64); }

bool has_token(const std::string& value, const std::string& token) {
  if (token.empty()) return false;
  std::size_t k = 0;
  while (k < value.size()) {
    while (k < value.size() && std::isspace(static_cast<unsigned char>(value[k]))) ++k;
    std::size_t e = k;
    while (e < value.size() && !std::isspace(static_cast<unsigned char>(value[e]))) ++e;
    if (e > k && value.compare(k, e - k, token) == 0 && e - k == token.size()) return true;
    k = e;
  }
  return false;
}

// Value layouts: s is one interned string id; i is {is_literal, literal,
// position bits 0..max_children}; n is one bit per document node.
class CssSemantics final : public Semantics {
 public:
  CssSemantics(const DomDocument& doc, std::span<const Example> examples)
      : doc_(doc),
        n_(doc.size()),
        nw_(words_for(doc.size())),
        maxpos_(doc.max_children()),
        pw_(words_for(doc.max_children() + 1)) {
    for (const Example& e : examples) {
      auto id = doc.find(e.input);
      if (!id) throw InputError("unknown document node " + e.input);
      nodes_.push_back(*id);
      expected_.push_back(e.output);
    }
    last_position_.assign(n_, 0);
    for (const DomNode& node : doc.nodes()) {
      const std::size_t m = node.children.size();
      for (std::size_t k = 0; k < m; ++k) last_position_[node.children[k]] = m - k;
    }
  }

  Words constant_value(const Term& c) override {
    const SortIds& s = sorts();
    if (c.sort() == s.s) return {intern(c.str_value())};
    if (c.sort() == s.i) {
      Words v(2 + pw_, 0);
      v[0] = 1;
      v[1] = static_cast<std::uint64_t>(c.int_value());
      add_position(v, c.int_value());
      return v;
    }
    throw std::invalid_argument("css constant of node sort");
  }

  Words apply(OpIndex op, std::span<const Words* const> kids) override {
    const OpIds& o = ops();
    if (op == o.multiple_offset) return offsets(*kids[0], *kids[1]);
    if (op == o.any) return all();
    if (op == o.union_ || op == o.not_) {
      Words v = *kids[0];
      for (std::size_t k = 0; k < nw_; ++k) {
        v[k] = op == o.union_ ? v[k] | (*kids[1])[k] : v[k] & ~(*kids[1])[k];
      }
      return v;
    }
    if (op == o.tag_equals) return intersect(*kids[0], tag_mask((*kids[1])[0]));
    if (op == o.nth_child || op == o.nth_last_child) {
      const Words& pos = *kids[1];
      const auto& rank = op == o.nth_child ? nullptr : &last_position_;
      Words v(nw_, 0);
      for (std::size_t k = 0; k < n_; ++k) {
        if (!test(*kids[0], k)) continue;
        const std::size_t p = rank ? (*rank)[k] : doc_.node(k).position;
        if (p > 0 && (pos[2 + p / 64] >> (p % 64)) & 1U) set(v, k);
      }
      return v;
    }
    if (op == o.right_sibling || op == o.children || op == o.descendants) {
      return relation(op, *kids[0], *kids[1]);
    }
    return intersect(*kids[0], attr_mask(op, (*kids[1])[0], (*kids[2])[0]));
  }

  Words project(SortId sort, const Words& value) override {
    const SortIds& s = sorts();
    if (sort == s.s) return value;
    if (sort == s.i) return Words(value.begin() + 2, value.end());
    Words v(words_for(nodes_.size()), 0);
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (test(value, nodes_[k])) set(v, k);
    }
    return v;
  }

  bool consistent(const Words& interp) const override {
    if (interp.size() != words_for(nodes_.size())) return false;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (test(interp, k) != expected_[k]) return false;
    }
    return true;
  }

 private:
  std::uint64_t intern(const std::string& s) {
    auto [it, fresh] = ids_.emplace(s, strings_.size());
    if (fresh) strings_.push_back(s);
    return it->second;
  }

  void add_position(Words& v, std::int64_t p) const {
    if (p >= 1 && static_cast<std::uint64_t>(p) <= maxpos_) {
      v[2 + static_cast<std::size_t>(p) / 64] |= std::uint64_t{1} << (p % 64);
    }
  }

  Words offsets(const Words& a, const Words& b) const {
    Words v(2 + pw_, 0);
    if (!a[0] || !b[0]) return v;
    const auto step = static_cast<std::int64_t>(a[1]);
    const auto start = static_cast<std::int64_t>(b[1]);
    const auto hi = static_cast<std::int64_t>(maxpos_);
    if (step == 0) {
      add_position(v, start);
    } else if (step > 0) {
      std::int64_t p = start;
      if (p < 1) p += ((1 - p + step - 1) / step) * step;
      for (; p <= hi; p += step) add_position(v, p);
    } else {
      std::int64_t p = start;
      if (p > hi) p -= ((p - hi + (-step) - 1) / (-step)) * (-step);
      for (; p >= 1; p += step) add_position(v, p);
    }
    return v;
  }

  Words all() const {
    Words v(nw_, ~std::uint64_t{0});
    if (n_ % 64) v.back() = (std::uint64_t{1} << (n_ % 64)) - 1;
    if (n_ == 0) v.clear();
    return v;
  }

  Words intersect(const Words& a, const Words& b) const {
    Words v(nw_);
    for (std::size_t k = 0; k < nw_; ++k) v[k] = a[k] & b[k];
    return v;
  }

  const Words& tag_mask(std::uint64_t sid) {
    auto [it, fresh] = tag_masks_.try_emplace(sid);
    if (fresh) {
      it->second.assign(nw_, 0);
      for (std::size_t k = 0; k < n_; ++k) {
        if (doc_.node(k).tag == strings_[sid]) set(it->second, k);
      }
    }
    return it->second;
  }

  const Words& attr_mask(OpIndex op, std::uint64_t name, std::uint64_t value) {
    const std::uint64_t key = (static_cast<std::uint64_t>(op) << 56) ^ (name << 28) ^ value;
    auto [it, fresh] = attr_masks_.try_emplace(key);
    if (!fresh) return it->second;
    const OpIds& o = ops();
    const std::string& attr = strings_[name];
    const std::string& want = strings_[value];
    it->second.assign(nw_, 0);
    for (std::size_t k = 0; k < n_; ++k) {
      const auto& attrs = doc_.node(k).attrs;
      auto a = attrs.find(attr);
      if (a == attrs.end()) continue;
      const std::string& have = a->second;
      bool ok;
      if (op == o.attr_equals) {
        ok = have == want;
      } else if (op == o.attr_contains) {
        ok = have.find(want) != std::string::npos;
      } else if (op == o.attr_starts_with) {
        ok = have.starts_with(want);
      } else if (op == o.attr_ends_with) {
        ok = have.ends_with(want);
      } else {
        ok = has_token(have, want);
      }
      if (ok) set(it->second, k);
    }
    return it->second;
  }

  Words relation(OpIndex op, const Words& a, const Words& b) const {
    const OpIds& o = ops();
    Words reach(nw_, 0);
    if (op == o.children) {
      for (std::size_t k = 1; k < n_; ++k) {
        if (test(a, *doc_.node(k).parent)) set(reach, k);
      }
    } else if (op == o.descendants) {
      for (std::size_t k = 1; k < n_; ++k) {
        const std::size_t p = *doc_.node(k).parent;
        if (test(a, p) || test(reach, p)) set(reach, k);
      }
    } else {
      for (const DomNode& node : doc_.nodes()) {
        bool seen = false;
        for (std::size_t c : node.children) {
          if (seen) set(reach, c);
          seen = seen || test(a, c);
        }
      }
    }
    return intersect(reach, b);
  }

  const DomDocument& doc_;
  std::size_t n_, nw_, maxpos_, pw_;
  std::vector<std::size_t> nodes_;
  std::vector<bool> expected_;
  std::vector<std::size_t> last_position_;
  std::vector<std::string> strings_;
  std::unordered_map<std::string, std::uint64_t> ids_;
  std::unordered_map<std::uint64_t, Words> tag_masks_;
  std::unordered_map<std::uint64_t, Words> attr_masks_;
};

}  // namespace

std::unique_ptr<Semantics> make_semantics(const DomDocument& doc,
                                          std::span<const Example> examples) {
  return std::make_unique<CssSemantics>(doc, examples);
}

std::vector<std::size_t> evaluate_selector(const Term& t, const DomDocument& doc) {
  if (!t.valid() || t.sort() != sorts().n) {
    throw std::invalid_argument("evaluate_selector expects a node-set term");
  }
  CssSemantics sem(doc, {});
  const Words v = evaluate(sem, t);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    if (test(v, k)) out.push_back(k);
  }
  return out;
}

}  // namespace mmsynth::css
