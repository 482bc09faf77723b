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
#include <charconv>
#include <optional>

#include "mmsynth/css.hpp"
#include "mmsynth/error.hpp"

namespace mmsynth::css {

namespace {

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

bool is_hex(unsigned char c) { return std::isxdigit(c) != 0; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Term run() {
    skip_ws();
    Term t = selector_list();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }
  bool eat(char c) {
    if (peek() != c || at_end()) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool skip_ws() {
    const std::size_t start = pos_;
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return pos_ != start;
  }

  Term selector_list() {
    Term t = complex();
    for (;;) {
      skip_ws();
      if (!eat(',')) return t;
      skip_ws();
      t = union_of(t, complex());
    }
  }

  Term complex() {
    Term t = compound();
    for (;;) {
      const std::size_t save = pos_;
      const bool ws = skip_ws();
      const char c = peek();
      OpIndex op;
      if (c == '>' || c == '+' || c == '~') {
        ++pos_;
        skip_ws();
        op = c == '>' ? ops().children : ops().right_sibling;
      } else if (ws && starts_compound()) {
        op = ops().descendants;
      } else {
        pos_ = save;
        return t;
      }
      Term rhs = compound();
      t = Term::apply(op, sorts().n, {t, rhs});
    }
  }

  bool starts_compound() const {
    const char c = peek();
    if (at_end()) return false;
    return c == '*' || c == '.' || c == '#' || c == '[' || c == ':' || c == '\\' ||
           is_ident_char(static_cast<unsigned char>(c));
  }

  Term compound() {
    if (!starts_compound()) fail("expected selector");
    Term cur = any();
    bool has_type = false;
    bool first = true;
    if (eat('*')) {
      has_type = true;
    } else if (peek() != '.' && peek() != '#' && peek() != '[' && peek() != ':') {
      cur = tag_equals(cur, ident());
      has_type = true;
    }
    for (;; first = false) {
      const char c = peek();
      if (at_end()) break;
      if (c == '.') {
        ++pos_;
        cur = attr_has_token(cur, "class", ident());
      } else if (c == '#') {
        ++pos_;
        cur = attr_equals(cur, "id", ident());
      } else if (c == '[') {
        cur = attribute(cur);
      } else if (c == ':') {
        cur = pseudo(cur, first && !has_type);
      } else {
        break;
      }
    }
    return cur;
  }

  Term attribute(const Term& cur) {
    expect('[');
    skip_ws();
    std::string name = ident();
    skip_ws();
    if (eat(']')) return attr_contains(cur, std::move(name), "");
    const std::size_t op_pos = pos_;
    char kind = peek();
    if (kind == '=') {
      ++pos_;
    } else if (kind == '^' || kind == '$' || kind == '*' || kind == '~') {
      ++pos_;
      expect('=');
    } else {
      if (kind == '|') fail("unsupported attribute operator |=");
      fail("expected attribute operator");
    }
    skip_ws();
    std::string value = (peek() == '"' || peek() == '\'') ? quoted() : ident();
    skip_ws();
    if (!at_end() && (peek() == 'i' || peek() == 'I' || peek() == 's' || peek() == 'S')) {
      fail("unsupported attribute modifier");
    }
    expect(']');
    switch (kind) {
      case '=':
        return attr_equals(cur, std::move(name), std::move(value));
      case '^':
        return attr_starts_with(cur, std::move(name), std::move(value));
      case '$':
        return attr_ends_with(cur, std::move(name), std::move(value));
      case '*':
        return attr_contains(cur, std::move(name), std::move(value));
      case '~':
        return attr_has_token(cur, std::move(name), std::move(value));
      default:
        pos_ = op_pos;
        fail("expected attribute operator");
    }
  }

  Term pseudo(const Term& cur, bool may_group) {
    const std::size_t start = pos_;
    expect(':');
    if (peek() == ':') fail("unsupported pseudo-element");
    std::string name = ident();
    for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (name == "first-child") return nth_child(cur, num(1));
    if (name == "last-child") return nth_last_child(cur, num(1));
    if (name == "nth-child" || name == "nth-last-child") {
      expect('(');
      skip_ws();
      Term i = nth_argument();
      skip_ws();
      expect(')');
      return name == "nth-child" ? nth_child(cur, i) : nth_last_child(cur, i);
    }
    if (name == "not" || name == "is" || name == "where") {
      expect('(');
      skip_ws();
      Term inner = selector_list();
      skip_ws();
      expect(')');
      if (name == "not") return not_of(cur, inner);
      if (may_group) return inner;
      return not_of(cur, not_of(any(), inner));
    }
    pos_ = start;
    fail("unsupported pseudo-class :" + name);
  }

  std::optional<std::int64_t> integer() {
    const std::size_t start = pos_;
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = src_[pos_++] == '-';
    const char* b = src_.data() + pos_;
    const char* e = src_.data() + src_.size();
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec == std::errc::result_out_of_range) fail("number out of range");
    if (ec != std::errc()) {
      pos_ = start;
      return std::nullopt;
    }
    pos_ += static_cast<std::size_t>(p - b);
    return neg ? -v : v;
  }

  Term nth_argument() {
    const std::size_t start = pos_;
    if (std::isalpha(static_cast<unsigned char>(peek())) && peek() != 'n' && peek() != 'N') {
      std::string w = ident();
      for (auto& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (w == "odd") return multiple_offset(2, 1);
      if (w == "even") return multiple_offset(2, 0);
      pos_ = start;
      fail("invalid nth-child argument");
    }
    // An+B with optional A and B; a bare sign before n means 1 or -1.
    std::int64_t a = 0;
    std::size_t sign_pos = pos_;
    bool neg = false;
    if (peek() == '+' || peek() == '-') {
      neg = peek() == '-';
      ++pos_;
    }
    if (peek() == 'n' || peek() == 'N') {
      ++pos_;
      a = neg ? -1 : 1;
    } else {
      pos_ = sign_pos;
      auto v = integer();
      if (!v) fail("invalid nth-child argument");
      if (peek() == 'n' || peek() == 'N') {
        ++pos_;
          a = *v;
      } else {
        return num(*v);
      }
    }
    std::int64_t b = 0;
    const std::size_t save = pos_;
    skip_ws();
    if (peek() == '+' || peek() == '-') {
      const bool minus = src_[pos_++] == '-';
      skip_ws();
      if (peek() == '+' || peek() == '-') fail("invalid nth-child argument");
      auto v = integer();
      if (!v) fail("invalid nth-child argument");
      b = minus ? -*v : *v;
    } else {
      pos_ = save;
    }
    return multiple_offset(a, b);
  }

  void escape(std::string& out) {
    ++pos_;  // backslash
    if (at_end()) fail("dangling escape");
    if (is_hex(static_cast<unsigned char>(peek()))) {
      unsigned v = 0;
      int n = 0;
      while (n < 6 && is_hex(static_cast<unsigned char>(peek()))) {
        const char c = src_[pos_++];
        v = v * 16 + static_cast<unsigned>(std::isdigit(static_cast<unsigned char>(c))
                                               ? c - '0'
                                               : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
        ++n;
      }
      if (v == 0 || v > 0xFF) fail("unsupported escape");
      if (peek() == ' ') ++pos_;
      out.push_back(static_cast<char>(v));
      return;
    }
    if (peek() == '\n') fail("invalid escape");
    out.push_back(src_[pos_++]);
  }

  std::string ident() {
    std::string out;
    const std::size_t start = pos_;
    while (!at_end()) {
      const auto c = static_cast<unsigned char>(peek());
      if (c == '\\') {
        escape(out);
      } else if (is_ident_char(c)) {
        out.push_back(static_cast<char>(c));
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected identifier");
    return out;
  }

  std::string quoted() {
    const char q = src_[pos_++];
    std::string out;
    for (;;) {
      if (at_end()) fail("unterminated string");
      const char c = peek();
      if (c == q) {
        ++pos_;
        return out;
      }
      if (c == '\n') fail("newline in string");
      if (c == '\\') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
          pos_ += 2;
          continue;
        }
        escape(out);
      } else {
        out.push_back(c);
        ++pos_;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Printing.

const char* kHex = "0123456789abcdef";

void hex_escape(std::string& out, unsigned char c) {
  out += '\\';
  if (c >= 16) out += kHex[c >> 4];
  out += kHex[c & 15];
  out += ' ';
}

std::string print_ident(const std::string& s) {
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto c = static_cast<unsigned char>(s[k]);
    const bool leading_digit =
        std::isdigit(c) && (k == 0 || (k == 1 && s[0] == '-'));
    if (c < 0x20 || c == 0x7F || leading_digit) {
      hex_escape(out, c);
    } else if (is_ident_char(c)) {
      out += static_cast<char>(c);
    } else {
      out += '\\';
      out += static_cast<char>(c);
    }
  }
  return out;
}

bool plain_ident(const std::string& s) {
  if (s.empty()) return false;
  return print_ident(s) == s;
}

std::string print_string(const std::string& s) {
  std::string out = "\"";
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '"' || c == '\\') {
      out += '\\';
      out += ch;
    } else if (c < 0x20 || c == 0x7F) {
      hex_escape(out, c);
    } else {
      out += ch;
    }
  }
  return out + "\"";
}

struct Compound {
  std::string type;
  std::string rest;
};

class Printer {
 public:
  std::string full(const Term& t) {
    if (is(t, ops().union_)) {
      const Term& b = t.children()[1];
      std::string right = is(b, ops().union_) ? ":is(" + full(b) + ")" : complex(b);
      return full(t.children()[0]) + ", " + right;
    }
    return complex(t);
  }

 private:
  static bool is(const Term& t, OpIndex op) { return !t.is_constant() && t.op() == op; }

  static bool is_combinator(const Term& t) {
    return is(t, ops().descendants) || is(t, ops().children) || is(t, ops().right_sibling);
  }

  std::string complex(const Term& t) {
    if (is_combinator(t)) {
      const Term& a = t.children()[0];
      std::string left = is(a, ops().union_) ? ":is(" + full(a) + ")" : complex(a);
      const char* sep = is(t, ops().descendants) ? " " : is(t, ops().children) ? " > " : " ~ ";
      return left + sep + compound_str(t.children()[1]);
    }
    return compound_str(t);
  }

  std::string compound_str(const Term& t) {
    Compound c = compound(t);
    std::string s = c.type + c.rest;
    return s.empty() ? "*" : s;
  }

  static std::optional<std::string> nth_arg(const Term& i) {
    if (i.is_constant()) return std::to_string(i.int_value());
    const Term& a = i.children()[0];
    const Term& b = i.children()[1];
    if (!a.is_constant() || !b.is_constant()) return std::nullopt;
    const std::int64_t av = a.int_value(), bv = b.int_value();
    std::string out = av == 1 ? "n" : av == -1 ? "-n" : std::to_string(av) + "n";
    if (bv > 0) out += "+" + std::to_string(bv);
    if (bv < 0) out += std::to_string(bv);
    return out;
  }

  Compound compound(const Term& t) {
    const OpIds& o = ops();
    if (is(t, o.any)) return {};
    if (is(t, o.union_) || is_combinator(t)) return {"", ":is(" + full(t) + ")"};
    const auto& kids = t.children();
    Compound c = compound(kids[0]);
    const OpIndex op = t.op();
    if (op == o.not_) {
      c.rest += ":not(" + full(kids[1]) + ")";
    } else if (op == o.tag_equals) {
      const std::string& tag = kids[1].str_value();
      if (tag.empty()) {
        c.rest += ":not(*)";
      } else if (c.type.empty()) {
        c.type = print_ident(tag);
      } else {
        c.rest += ":is(" + print_ident(tag) + ")";
      }
    } else if (op == o.nth_child || op == o.nth_last_child) {
      const bool last = op == o.nth_last_child;
      auto arg = nth_arg(kids[1]);
      if (!arg) {
        c.rest += ":not(*)";
      } else if (*arg == "1") {
        c.rest += last ? ":last-child" : ":first-child";
      } else {
        c.rest += (last ? ":nth-last-child(" : ":nth-child(") + *arg + ")";
      }
    } else {
      const std::string& name = kids[1].str_value();
      const std::string& value = kids[2].str_value();
      if (name.empty()) {
        c.rest += ":not(*)";
      } else if (op == o.attr_has_token && name == "class" && plain_ident(value)) {
        c.rest += "." + value;
      } else if (op == o.attr_equals && name == "id" && plain_ident(value)) {
        c.rest += "#" + value;
      } else if (op == o.attr_contains && value.empty()) {
        c.rest += "[" + print_ident(name) + "]";
      } else {
        const char* rel = op == o.attr_equals         ? "="
                          : op == o.attr_contains     ? "*="
                          : op == o.attr_starts_with  ? "^="
                          : op == o.attr_ends_with    ? "$="
                                                      : "~=";
        c.rest += "[" + print_ident(name) + rel + print_string(value) + "]";
      }
    }
    return c;
  }
};

}  // namespace

Term parse(std::string_view src) { return Parser(src).run(); }

std::string print(const Term& t) {
  if (!t.valid() || t.sort() != sorts().n) throw std::invalid_argument("css::print expects a node-set term");
  return Printer().full(t);
}

}  // namespace mmsynth::css
