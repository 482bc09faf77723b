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

#include <cctype>
#include <cstdio>
#include <optional>
#include <string>

#include "mmsynth/error.hpp"
#include "mmsynth/regex.hpp"

namespace mmsynth::regex {

namespace {

constexpr std::int64_t kMaxRepeat = 100000;

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), end_(src.size()) {}

  Term run() {
    if (!src_.empty() && src_[0] == '^') pos_ = 1;
    if (end_ > pos_ && src_[end_ - 1] == '$' && !escaped(end_ - 1)) --end_;
    Term t = alternation();
    if (pos_ < end_) {
      if (src_[pos_] == ')') fail("unbalanced parenthesis");
      fail("unexpected character");
    }
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  bool escaped(std::size_t i) const {
    std::size_t n = 0;
    while (i > 0 && src_[i - 1] == '\\') {
      ++n;
      --i;
    }
    return n % 2 == 1;
  }

  bool at_end() const { return pos_ >= end_; }
  char peek() const { return src_[pos_]; }

  Term alternation() {
    Term left = sequence();
    while (!at_end() && peek() == '|') {
      ++pos_;
      left = alter(left, sequence());
    }
    return left;
  }

  Term sequence() {
    std::vector<Term> items;
    while (!at_end() && peek() != '|' && peek() != ')') items.push_back(repetition());
    if (items.empty()) fail("empty expression");
    Term t = items.back();
    for (std::size_t i = items.size() - 1; i-- > 0;) t = concat(items[i], t);
    return t;
  }

  // Parses "{m}", "{m,}" or "{m,n}" at pos_ without consuming on failure.
  bool brace_quantifier(std::int64_t& lo, std::int64_t& hi) {
    std::size_t p = pos_ + 1;
    auto number = [&](std::int64_t& out) {
      std::size_t start = p;
      out = 0;
      while (p < end_ && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        out = out * 10 + (src_[p] - '0');
        if (out > kMaxRepeat) throw ParseError("repetition bound too large", p);
        ++p;
      }
      return p > start;
    };
    if (!number(lo)) return false;
    hi = lo;
    if (p < end_ && src_[p] == ',') {
      ++p;
      if (!number(hi)) hi = -1;
    }
    if (p >= end_ || src_[p] != '}') return false;
    pos_ = p + 1;
    return true;
  }

  Term repetition() {
    Term t = atom();
    while (!at_end()) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        t = quant_min(t, 0);
      } else if (c == '+') {
        ++pos_;
        t = quant_min(t, 1);
      } else if (c == '?') {
        ++pos_;
        t = quant(t, 0, 1);
      } else if (c == '{') {
        std::int64_t lo = 0, hi = 0;
        if (!brace_quantifier(lo, hi)) break;
        t = hi < 0 ? quant_min(t, lo) : quant(t, lo, hi);
      } else {
        break;
      }
    }
    return t;
  }

  Term atom() {
    const char c = peek();
    switch (c) {
      case '(': {
        if (pos_ + 1 < end_ && src_[pos_ + 1] == '?') fail("unsupported group syntax");
        ++pos_;
        Term t = alternation();
        if (at_end() || peek() != ')') fail("unbalanced parenthesis");
        ++pos_;
        return t;
      }
      case '[':
        return from_char_set(char_class());
      case '.':
        ++pos_;
        return from_char_set(any());
      case '\\':
        return from_char_set(escape(false));
      case '*':
      case '+':
      case '?':
        fail("dangling quantifier");
      case '{': {
        std::int64_t lo = 0, hi = 0;
        const std::size_t save = pos_;
        if (brace_quantifier(lo, hi)) {
          pos_ = save;
          fail("dangling quantifier");
        }
        ++pos_;
        return literal('{');
      }
      case '^':
      case '$':
        fail("unsupported anchor");
      default:
        ++pos_;
        return literal(c);
    }
  }

  // Escape sequence at pos_ (the backslash); returns an s-sort term.
  Term escape(bool in_class) {
    ++pos_;
    if (at_end()) fail("dangling escape");
    const char c = peek();
    ++pos_;
    switch (c) {
      case 'd':
      case 's':
      case 'w':
        return named_class(c);
      case 'D':
      case 'S':
      case 'W':
        if (in_class) fail("negated class escape inside brackets");
        return negate(named_class(static_cast<char>(std::tolower(c))));
      case 'n':
        return from_char('\n');
      case 't':
        return from_char('\t');
      case 'r':
        return from_char('\r');
      case 'f':
        return from_char('\f');
      case 'v':
        return from_char('\v');
      case 'x': {
        if (pos_ + 2 > end_) fail("truncated hex escape");
        const int h = hex_value(src_[pos_]), l = hex_value(src_[pos_ + 1]);
        if (h < 0 || l < 0) fail("malformed hex escape");
        pos_ += 2;
        return from_char(static_cast<char>(h * 16 + l));
      }
      case 'b':
      case 'B':
      case 'A':
      case 'Z':
      case 'z':
      case 'G':
        --pos_;
        fail("unsupported anchor");
      default:
        if (std::isdigit(static_cast<unsigned char>(c))) {
          --pos_;
          fail("unsupported backreference");
        }
        return from_char(c);
    }
  }

  // One class member: a single character (returned in `ch`) or a named class.
  Term class_atom(std::optional<char>& ch) {
    ch.reset();
    if (peek() == '\\') {
      Term t = escape(true);
      if (t.op() == ops().from_char) ch = t.children()[0].str_value()[0];
      return t;
    }
    const char c = peek();
    ++pos_;
    ch = c;
    return from_char(c);
  }

  Term char_class() {
    const std::size_t open = pos_;
    ++pos_;
    bool negated = false;
    if (!at_end() && peek() == '^') {
      negated = true;
      ++pos_;
    }
    std::optional<Term> acc;
    bool first = true;
    while (true) {
      if (at_end()) {
        pos_ = open;
        fail("unterminated character class");
      }
      if (peek() == ']' && !first) break;
      first = false;
      std::optional<char> lo;
      Term item = class_atom(lo);
      if (lo && pos_ + 1 < end_ && peek() == '-' && src_[pos_ + 1] != ']') {
        ++pos_;
        std::optional<char> hi;
        class_atom(hi);
        if (!hi) fail("invalid range endpoint");
        if (static_cast<unsigned char>(*lo) > static_cast<unsigned char>(*hi)) {
          fail("inverted character range");
        }
        item = range(*lo, *hi);
      }
      acc = acc ? union_of(*acc, item) : item;
    }
    ++pos_;
    return negated ? negate(*acc) : *acc;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t end_;
};

// --- printing ---------------------------------------------------------------

std::string hex_escape(unsigned char c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\x%02X", c);
  return buf;
}

std::string escape_char(char c, bool in_class) {
  const auto u = static_cast<unsigned char>(c);
  switch (c) {
    case '\n':
      return "\\n";
    case '\t':
      return "\\t";
    case '\r':
      return "\\r";
    case '\f':
      return "\\f";
    case '\v':
      return "\\v";
    default:
      break;
  }
  if (u < 0x20 || u >= 0x7F) return hex_escape(u);
  const std::string_view special = in_class ? "]\\^-[" : "\\^$.|?*+()[]{}";
  if (special.find(c) != std::string_view::npos) return std::string{'\\', c};
  return std::string(1, c);
}

std::optional<std::string> class_items(const Term& s) {
  const OpIds& o = ops();
  if (s.is_constant()) return s.str_value();
  const OpIndex op = s.op();
  const auto& k = s.children();
  if (op == o.from_char) return escape_char(k[0].str_value()[0], true);
  if (op == o.range) {
    return escape_char(k[0].str_value()[0], true) + "-" + escape_char(k[1].str_value()[0], true);
  }
  if (op == o.union_) {
    auto a = class_items(k[0]);
    auto b = class_items(k[1]);
    if (a && b) return *a + *b;
  }
  return std::nullopt;
}

std::string explicit_class(const CharSet& cs) {
  if (cs.none()) return "[^ -~]";
  std::string out = "[";
  for (int c = 0; c < 256;) {
    if (!cs.test(c)) {
      ++c;
      continue;
    }
    int d = c;
    while (d + 1 < 256 && cs.test(d + 1)) ++d;
    out += escape_char(static_cast<char>(c), true);
    if (d > c) out += "-" + escape_char(static_cast<char>(d), true);
    c = d + 1;
  }
  return out + "]";
}

std::string print_set(const Term& s) {
  const OpIds& o = ops();
  if (s.is_constant()) return s.str_value();
  const OpIndex op = s.op();
  if (op == o.from_char) return escape_char(s.children()[0].str_value()[0], false);
  if (op == o.any) return ".";
  if (op == o.negate) {
    if (auto items = class_items(s.children()[0])) return "[^" + *items + "]";
  } else if (auto items = class_items(s)) {
    return "[" + *items + "]";
  }
  return explicit_class(char_set(s));
}

enum Prec { kAlt = 0, kCat = 1, kRep = 2, kAtom = 3 };

Prec prec_of(const Term& t) {
  const OpIds& o = ops();
  if (t.is_constant() || t.sort() != sorts().e) return kAtom;
  if (t.op() == o.alter) return kAlt;
  if (t.op() == o.concat) return kCat;
  if (t.op() == o.quant || t.op() == o.quant_min) return kRep;
  return kAtom;
}

std::string print_e(const Term& t);

std::string wrapped(const Term& t, Prec min) {
  std::string s = print_e(t);
  return prec_of(t) < min ? "(" + s + ")" : s;
}

std::string print_e(const Term& t) {
  const OpIds& o = ops();
  if (t.sort() == sorts().s) return print_set(t);
  if (t.is_constant()) {
    if (const auto* i = std::get_if<std::int64_t>(&t.literal())) return std::to_string(*i);
    return escape_char(t.str_value()[0], false);
  }
  const auto& k = t.children();
  const OpIndex op = t.op();
  if (op == o.from_char_set) return print_set(k[0]);
  if (op == o.alter) return print_e(k[0]) + "|" + wrapped(k[1], kCat);
  if (op == o.concat) {
    // A concat on the left needs parentheses to keep its nesting.
    std::string left = prec_of(k[0]) <= kCat ? "(" + print_e(k[0]) + ")" : print_e(k[0]);
    return left + wrapped(k[1], kCat);
  }
  const std::string body = wrapped(k[0], kAtom);
  const std::int64_t lo = k[1].int_value();
  if (op == o.quant_min) {
    if (lo == 0) return body + "*";
    if (lo == 1) return body + "+";
    return body + "{" + std::to_string(lo) + ",}";
  }
  const std::int64_t hi = k[2].int_value();
  if (lo == 0 && hi == 1) return body + "?";
  if (lo == hi) return body + "{" + std::to_string(lo) + "}";
  return body + "{" + std::to_string(lo) + "," + std::to_string(hi) + "}";
}

}  // namespace

Term parse(std::string_view src) {
  if (src.empty()) throw ParseError("empty expression", 0);
  return Parser(src).run();
}

std::string print(const Term& t) { return print_e(t); }

}  // namespace mmsynth::regex
