// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cctype>
#include <functional>

namespace oracle {

using mmsynth::OpIndex;
using mmsynth::Term;
namespace rx = mmsynth::regex;
namespace css = mmsynth::css;

std::set<unsigned char> regex_chars(const Term& s) {
  std::set<unsigned char> out;
  auto printable = [] {
    std::set<unsigned char> p;
    for (int c = 32; c < 127; ++c) p.insert(static_cast<unsigned char>(c));
    return p;
  };
  if (s.is_constant()) {
    const std::string& v = s.str_value();
    if (v == "\\d") {
      for (char c = '0'; c <= '9'; ++c) out.insert(c);
    } else if (v == "\\s") {
      for (char c : std::string(" \t\n\r\f\v")) out.insert(c);
    } else if (v == "\\w") {
      for (int c = 0; c < 256; ++c) {
        if (std::isalnum(c) || c == '_') out.insert(static_cast<unsigned char>(c));
      }
    }
    return out;
  }
  const auto& o = rx::ops();
  const auto& k = s.children();
  if (s.op() == o.from_char) {
    out.insert(static_cast<unsigned char>(k[0].str_value()[0]));
  } else if (s.op() == o.range) {
    for (int c = static_cast<unsigned char>(k[0].str_value()[0]);
         c <= static_cast<unsigned char>(k[1].str_value()[0]); ++c) {
      out.insert(static_cast<unsigned char>(c));
    }
  } else if (s.op() == o.union_) {
    out = regex_chars(k[0]);
    for (auto c : regex_chars(k[1])) out.insert(c);
  } else if (s.op() == o.negate) {
    auto inner = regex_chars(k[0]);
    for (auto c : printable()) {
      if (!inner.count(c)) out.insert(c);
    }
  } else if (s.op() == o.any) {
    out = printable();
  }
  return out;
}

namespace {

std::set<std::size_t> ends(const Term& e, std::string_view s, std::size_t start) {
  const auto& o = rx::ops();
  std::set<std::size_t> out;
  if (e.sort() == rx::sorts().s) {
    if (start < s.size() && regex_chars(e).count(static_cast<unsigned char>(s[start]))) {
      out.insert(start + 1);
    }
    return out;
  }
  const auto& k = e.children();
  if (e.op() == o.from_char_set) return ends(k[0], s, start);
  if (e.op() == o.alter) {
    out = ends(k[0], s, start);
    for (auto p : ends(k[1], s, start)) out.insert(p);
    return out;
  }
  if (e.op() == o.concat) {
    for (auto mid : ends(k[0], s, start)) {
      for (auto p : ends(k[1], s, mid)) out.insert(p);
    }
    return out;
  }
  // Repetition. Any run longer than lo + |s| rounds contains an empty round
  // that can be dropped, so that many rounds suffice.
  const std::int64_t lo = k[1].int_value();
  std::int64_t hi = lo + static_cast<std::int64_t>(s.size());
  if (e.op() == o.quant) hi = std::min(hi, k[2].int_value());
  std::set<std::size_t> frontier{start};
  for (std::int64_t r = 0; r <= hi; ++r) {
    if (r >= lo) out.insert(frontier.begin(), frontier.end());
    std::set<std::size_t> next;
    for (auto p : frontier) {
      for (auto q : ends(k[0], s, p)) next.insert(q);
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

bool regex_match(const Term& e, std::string_view str) {
  if (e.sort() != rx::sorts().e && e.sort() != rx::sorts().s) return false;
  return ends(e, str, 0).count(str.size()) > 0;
}

Term random_regex(std::mt19937_64& rng, int depth, std::string_view alphabet) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto ch = [&] { return alphabet[pick(alphabet.size())]; };
  std::function<Term(int)> set_term = [&](int d) -> Term {
    switch (d <= 0 ? pick(3) : pick(6)) {
      case 0:
        return rx::from_char(ch());
      case 1: {
        char a = ch(), b = ch();
        if (a > b) std::swap(a, b);
        return rx::range(a, b);
      }
      case 2:
        return rx::named_class("dsw"[pick(3)]);
      case 3:
        return rx::union_of(set_term(d - 1), set_term(d - 1));
      case 4:
        return rx::negate(set_term(d - 1));
      default:
        return rx::any();
    }
  };
  if (depth <= 0 || pick(4) == 0) return rx::from_char_set(set_term(depth > 0 ? 1 : 0));
  switch (pick(5)) {
    case 0:
      return rx::concat(random_regex(rng, depth - 1, alphabet), random_regex(rng, depth - 1, alphabet));
    case 1:
      return rx::alter(random_regex(rng, depth - 1, alphabet), random_regex(rng, depth - 1, alphabet));
    case 2: {
      const auto lo = static_cast<std::int64_t>(pick(3));
      return rx::quant(random_regex(rng, depth - 1, alphabet), lo, lo + static_cast<std::int64_t>(pick(3)));
    }
    case 3:
      return rx::quant_min(random_regex(rng, depth - 1, alphabet), static_cast<std::int64_t>(pick(3)));
    default:
      return rx::from_char_set(set_term(1));
  }
}

std::string random_string(std::mt19937_64& rng, std::size_t max_len, std::string_view alphabet) {
  const auto n = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  std::string s;
  for (std::size_t k = 0; k < n; ++k) {
    s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
  }
  return s;
}

namespace {

std::set<std::int64_t> positions(const Term& i) {
  std::set<std::int64_t> out;
  if (i.is_constant()) {
    out.insert(i.int_value());
    return out;
  }
  const auto& k = i.children();
  if (!k[0].is_constant() || !k[1].is_constant()) return out;
  const std::int64_t a = k[0].int_value(), b = k[1].int_value();
  if (a == 0) {
    out.insert(b);
  } else {
    for (std::int64_t m = 0; m < 200; ++m) {
      const std::int64_t p = a * m + b;
      if (p >= 1 && p <= 100) out.insert(p);
    }
  }
  return out;
}

bool tokens_contain(const std::string& v, const std::string& tok) {
  std::size_t k = 0;
  while (k <= v.size()) {
    std::size_t e = k;
    while (e < v.size() && !std::isspace(static_cast<unsigned char>(v[e]))) ++e;
    if (e > k && v.substr(k, e - k) == tok) return true;
    k = e + 1;
  }
  return false;
}

}  // namespace

bool css_selects(const Term& t, const css::DomDocument& doc, std::size_t v) {
  const auto& o = css::ops();
  const auto& k = t.children();
  const auto& node = doc.node(v);
  const OpIndex op = t.op();
  if (op == o.any) return true;
  if (op == o.union_) return css_selects(k[0], doc, v) || css_selects(k[1], doc, v);
  if (op == o.not_) return css_selects(k[0], doc, v) && !css_selects(k[1], doc, v);
  if (!css_selects(k[0], doc, v) && op != o.right_sibling && op != o.children &&
      op != o.descendants) {
    return false;
  }
  if (op == o.tag_equals) return node.tag == k[1].str_value();
  if (op == o.nth_child || op == o.nth_last_child) {
    if (!node.parent) return false;
    const auto& sibs = doc.node(*node.parent).children;
    std::int64_t idx = 0;
    for (std::size_t j = 0; j < sibs.size(); ++j) {
      if (sibs[j] == v) idx = static_cast<std::int64_t>(j) + 1;
    }
    if (op == o.nth_last_child) idx = static_cast<std::int64_t>(sibs.size()) + 1 - idx;
    return positions(k[1]).count(idx) > 0;
  }
  if (op == o.right_sibling || op == o.children || op == o.descendants) {
    if (!css_selects(k[1], doc, v) || !node.parent) return false;
    if (op == o.children) return css_selects(k[0], doc, *node.parent);
    if (op == o.descendants) {
      for (auto u = node.parent; u; u = doc.node(*u).parent) {
        if (css_selects(k[0], doc, *u)) return true;
      }
      return false;
    }
    for (std::size_t u : doc.node(*node.parent).children) {
      if (u == v) return false;
      if (css_selects(k[0], doc, u)) return true;
    }
    return false;
  }
  const auto it = node.attrs.find(k[1].str_value());
  if (it == node.attrs.end()) return false;
  const std::string& have = it->second;
  const std::string& want = k[2].str_value();
  if (op == o.attr_equals) return have == want;
  if (op == o.attr_contains) return have.find(want) != std::string::npos;
  if (op == o.attr_starts_with) return have.substr(0, want.size()) == want;
  if (op == o.attr_ends_with) {
    return have.size() >= want.size() && have.substr(have.size() - want.size()) == want;
  }
  return !want.empty() && tokens_contain(have, want);
}

std::set<std::size_t> css_select(const Term& t, const css::DomDocument& doc) {
  std::set<std::size_t> out;
  for (std::size_t v = 0; v < doc.size(); ++v) {
    if (css_selects(t, doc, v)) out.insert(v);
  }
  return out;
}

namespace {

const char* kTags[] = {"div", "li", "td", "input"};
const char* kAttrs[] = {"class", "id", "type"};
const char* kValues[] = {"a", "b", "a b", "ab", "b c"};

}  // namespace

css::DomDocument random_document(std::mt19937_64& rng, std::size_t max_nodes) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::size_t n = 1 + pick(max_nodes);
  css::DomDocument::Builder b;
  auto attrs = [&] {
    std::map<std::string, std::string> m;
    for (const char* a : kAttrs) {
      if (pick(3) == 0) m[a] = kValues[pick(5)];
    }
    return m;
  };
  b.add_root(kTags[pick(4)], attrs());
  for (std::size_t k = 1; k < n; ++k) b.add_child(pick(k), kTags[pick(4)], attrs());
  return std::move(b).build();
}

Term random_selector(std::mt19937_64& rng, std::size_t max_nodes) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::function<Term(std::size_t)> gen = [&](std::size_t budget) -> Term {
    if (budget <= 1) return pick(3) == 0 ? css::any() : css::tag_equals(css::any(), kTags[pick(4)]);
    const std::size_t choice = pick(11);
    if (choice <= 3 || budget < 3) {
      Term base = gen(budget - 1);
      switch (choice) {
        case 0:
          return css::tag_equals(base, kTags[pick(4)]);
        case 1: {
          Term i = pick(2) ? css::num(static_cast<std::int64_t>(pick(4)))
                           : css::multiple_offset(static_cast<std::int64_t>(pick(5)) - 2,
                                                  static_cast<std::int64_t>(pick(5)) - 1);
          return pick(2) ? css::nth_child(base, i) : css::nth_last_child(base, i);
        }
        default: {
          const OpIndex ops[] = {css::ops().attr_equals, css::ops().attr_contains,
                                 css::ops().attr_starts_with, css::ops().attr_ends_with,
                                 css::ops().attr_has_token};
          const char* v = pick(4) == 0 ? "" : kValues[pick(5)];
          return Term::apply(ops[pick(5)], css::sorts().n,
                             {base, css::str(kAttrs[pick(3)]), css::str(v)});
        }
      }
    }
    const std::size_t left = 1 + pick(budget - 2);
    Term a = gen(left), b = gen(budget - 1 - left);
    const OpIndex bin[] = {css::ops().union_, css::ops().not_, css::ops().right_sibling,
                           css::ops().children, css::ops().descendants};
    return Term::apply(bin[pick(5)], css::sorts().n, {a, b});
  };
  return gen(1 + pick(max_nodes));
}

css::DomDocument reversed(const css::DomDocument& doc, std::vector<std::size_t>& map) {
  css::DomDocument::Builder b;
  map.assign(doc.size(), 0);
  map[0] = b.add_root(doc.node(0).tag, doc.node(0).attrs);
  // Insert children in reverse order; build() renumbers in preorder, so
  // track identities through a marker attribute.
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t old, std::size_t fresh) {
    const auto& kids = doc.node(old).children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      auto attrs = doc.node(*it).attrs;
      attrs["data-old"] = std::to_string(*it);
      walk(*it, b.add_child(fresh, doc.node(*it).tag, attrs));
    }
  };
  walk(0, 0);
  css::DomDocument out = std::move(b).build();
  for (std::size_t k = 1; k < out.size(); ++k) map[std::stoul(out.node(k).attrs.at("data-old"))] = k;
  return out;
}

std::vector<std::string> all_strings(std::string_view alphabet, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

}  // namespace oracle
