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

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmsynth/dsl.hpp"
#include "mmsynth/semantics.hpp"

namespace mmsynth::css {

struct DomNode {
  std::string tag;
  std::map<std::string, std::string> attrs;
  std::vector<std::size_t> children;
  std::optional<std::size_t> parent;
  // 1-based position among the parent's children; 0 for the root.
  std::size_t position = 0;
  // Child indices from the root, e.g. "/" or "/0/2".
  std::string path;
  // Preorder index one past the last descendant.
  std::size_t subtree_end = 0;
};

// Immutable element tree. Node ids are preorder indices; the root is 0.
class DomDocument {
 public:
  const std::vector<DomNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const DomNode& node(std::size_t id) const { return nodes_.at(id); }
  // Resolves "/0/2"-style paths and "#id" references.
  std::optional<std::size_t> find(std::string_view ref) const;
  std::size_t max_children() const { return max_children_; }

  class Builder;

 private:
  std::vector<DomNode> nodes_;
  std::size_t max_children_ = 0;
};

// Incremental construction in document order.
class DomDocument::Builder {
 public:
  std::size_t add_root(std::string tag, std::map<std::string, std::string> attrs = {});
  std::size_t add_child(std::size_t parent, std::string tag,
                        std::map<std::string, std::string> attrs = {});
  DomDocument build() &&;

 private:
  struct Pending {
    std::string tag;
    std::map<std::string, std::string> attrs;
    std::vector<std::size_t> kids;
  };
  std::vector<Pending> pending_;
};

// Nested records {"tag": ..., "attrs": {k: v}, "children": [...]} in JSON.
// Throws FormatError on malformed input or duplicate attribute keys.
DomDocument parse_document(std::string_view text);
DomDocument load_document(const std::string& path);

struct SortIds {
  SortId s, i, n;
};

struct OpIds {
  OpIndex multiple_offset, any, union_, not_, tag_equals, nth_child, nth_last_child,
      attr_equals, attr_contains, attr_starts_with, attr_ends_with, right_sibling,
      children, descendants, attr_has_token;
};

// Sorts s (strings), i (numbers), n (node sets, closed). Standard
// components: Any(), 1 and "". The last operator, AttributeHasToken, is the
// whitespace-separated word match behind `.class` and `[a~=v]`.
const Dsl& dsl();
const SortIds& sorts();
const OpIds& ops();

Term str(std::string s);
Term num(std::int64_t v);
Term multiple_offset(std::int64_t a, std::int64_t b);
Term any();
Term union_of(const Term& a, const Term& b);
Term not_of(const Term& a, const Term& b);
Term tag_equals(const Term& n, std::string tag);
Term nth_child(const Term& n, const Term& i);
Term nth_last_child(const Term& n, const Term& i);
Term attr_equals(const Term& n, std::string attr, std::string value);
Term attr_contains(const Term& n, std::string attr, std::string value);
Term attr_starts_with(const Term& n, std::string attr, std::string value);
Term attr_ends_with(const Term& n, std::string attr, std::string value);
Term attr_has_token(const Term& n, std::string attr, std::string value);
Term right_sibling(const Term& a, const Term& b);
Term children(const Term& a, const Term& b);
Term descendants(const Term& a, const Term& b);

// Throws ParseError, including for dynamic pseudo-classes.
Term parse(std::string_view src);
std::string print(const Term& t);

// Selected node ids in document order.
std::vector<std::size_t> evaluate_selector(const Term& t, const DomDocument& doc);

class CssDomain final : public Domain {
 public:
  const Dsl& dsl() const override { return css::dsl(); }
  std::string name() const override { return "css"; }
  std::string print(const Term& t) const override { return css::print(t); }
  Term parse(std::string_view src) const override { return css::parse(src); }
};

// Example inputs are node references accepted by DomDocument::find; throws
// InputError for unknown nodes. `doc` must outlive the result.
std::unique_ptr<Semantics> make_semantics(const DomDocument& doc,
                                          std::span<const Example> examples);

}  // namespace mmsynth::css
