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

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmsynth/css.hpp"
#include "mmsynth/error.hpp"

namespace mmsynth::css {

using nlohmann::json;

std::optional<std::size_t> DomDocument::find(std::string_view ref) const {
  if (nodes_.empty()) return std::nullopt;
  if (!ref.empty() && ref.front() == '#') {
    const std::string id(ref.substr(1));
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      auto it = nodes_[k].attrs.find("id");
      if (it != nodes_[k].attrs.end() && it->second == id) return k;
    }
    return std::nullopt;
  }
  if (ref.empty() || ref.front() != '/') return std::nullopt;
  std::size_t cur = 0;
  std::size_t pos = 1;
  while (pos < ref.size()) {
    std::size_t slash = ref.find('/', pos);
    if (slash == std::string_view::npos) slash = ref.size();
    std::size_t idx = 0;
    const char* b = ref.data() + pos;
    const char* e = ref.data() + slash;
    auto [p, ec] = std::from_chars(b, e, idx);
    if (ec != std::errc() || p != e || b == e) return std::nullopt;
    if (idx >= nodes_[cur].children.size()) return std::nullopt;
    cur = nodes_[cur].children[idx];
    pos = slash + 1;
  }
  return cur;
}

std::size_t DomDocument::Builder::add_root(std::string tag,
                                           std::map<std::string, std::string> attrs) {
  if (!pending_.empty()) throw std::logic_error("root already added");
  pending_.push_back({std::move(tag), std::move(attrs), {}});
  return 0;
}

std::size_t DomDocument::Builder::add_child(std::size_t parent, std::string tag,
                                            std::map<std::string, std::string> attrs) {
  if (parent >= pending_.size()) throw std::out_of_range("unknown parent");
  pending_.push_back({std::move(tag), std::move(attrs), {}});
  pending_[parent].kids.push_back(pending_.size() - 1);
  return pending_.size() - 1;
}

DomDocument DomDocument::Builder::build() && {
  DomDocument doc;
  if (pending_.empty()) return doc;
  // Renumber in preorder regardless of insertion order.
  struct Frame {
    std::size_t src;
    std::optional<std::size_t> parent;
    std::size_t position;
    std::string path;
  };
  std::vector<Frame> stack{{0, std::nullopt, 0, "/"}};
  std::vector<std::size_t> open;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const std::size_t id = doc.nodes_.size();
    DomNode node;
    node.tag = std::move(pending_[f.src].tag);
    node.attrs = std::move(pending_[f.src].attrs);
    node.parent = f.parent;
    node.position = f.position;
    node.path = f.path;
    doc.nodes_.push_back(std::move(node));
    if (f.parent) doc.nodes_[*f.parent].children.push_back(id);
    const auto& kids = pending_[f.src].kids;
    doc.max_children_ = std::max(doc.max_children_, kids.size());
    for (std::size_t k = kids.size(); k-- > 0;) {
      std::string path = f.path == "/" ? "/" + std::to_string(k)
                                       : f.path + "/" + std::to_string(k);
      stack.push_back({kids[k], id, k + 1, std::move(path)});
    }
  }
  for (std::size_t k = doc.nodes_.size(); k-- > 0;) {
    auto& n = doc.nodes_[k];
    n.subtree_end = n.children.empty() ? k + 1 : doc.nodes_[n.children.back()].subtree_end;
  }
  return doc;
}

namespace {

std::string loc(const std::string& where) { return where.empty() ? "/" : where; }

std::string pointer_child(const std::string& base, const std::string& key) {
  return base + "/" + key;
}

void read_node(const json& j, const std::string& where, DomDocument::Builder& b,
               std::optional<std::size_t> parent) {
  if (!j.is_object()) throw FormatError("element must be an object", loc(where));
  for (const auto& [key, _] : j.items()) {
    if (key != "tag" && key != "attrs" && key != "children") {
      throw FormatError("unknown field \"" + key + "\"", loc(where));
    }
  }
  auto tag_it = j.find("tag");
  if (tag_it == j.end() || !tag_it->is_string()) {
    throw FormatError("missing string field \"tag\"", loc(where));
  }
  if (tag_it->get_ref<const std::string&>().empty()) {
    throw FormatError("empty tag", pointer_child(where, "tag"));
  }
  std::map<std::string, std::string> attrs;
  if (auto a = j.find("attrs"); a != j.end()) {
    const std::string aw = pointer_child(where, "attrs");
    if (!a->is_object()) throw FormatError("\"attrs\" must be an object", aw);
    for (const auto& [key, value] : a->items()) {
      if (key.empty()) throw FormatError("empty attribute name", aw);
      if (!value.is_string()) {
        throw FormatError("attribute value must be a string", pointer_child(aw, key));
      }
      attrs.emplace(key, value.get<std::string>());
    }
  }
  const std::size_t id = parent ? b.add_child(*parent, tag_it->get<std::string>(), std::move(attrs))
                                : b.add_root(tag_it->get<std::string>(), std::move(attrs));
  if (auto c = j.find("children"); c != j.end()) {
    const std::string cw = pointer_child(where, "children");
    if (!c->is_array()) throw FormatError("\"children\" must be an array", cw);
    for (std::size_t k = 0; k < c->size(); ++k) {
      read_node((*c)[k], pointer_child(cw, std::to_string(k)), b, id);
    }
  }
}

}  // namespace

DomDocument parse_document(std::string_view text) {
  // Duplicate keys are silently collapsed by the DOM parser, so detect them
  // while parsing.
  struct Frame {
    bool array = false;
    std::set<std::string> seen;
    std::string key;
    std::size_t index = 0;
  };
  std::vector<Frame> frames;
  std::optional<FormatError> dup;
  auto finish_value = [&] {
    if (!frames.empty() && frames.back().array) ++frames.back().index;
  };
  auto cb = [&](int, json::parse_event_t ev, json& parsed) {
    switch (ev) {
      case json::parse_event_t::object_start:
        frames.push_back({});
        break;
      case json::parse_event_t::array_start:
        frames.push_back({true, {}, {}, 0});
        break;
      case json::parse_event_t::object_end:
      case json::parse_event_t::array_end:
        if (!frames.empty()) frames.pop_back();
        finish_value();
        break;
      case json::parse_event_t::value:
        finish_value();
        break;
      case json::parse_event_t::key: {
        auto& top = frames.back();
        top.key = parsed.get<std::string>();
        if (!top.seen.insert(top.key).second && !dup) {
          std::string loc;
          for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
            loc += "/" + (frames[k].array ? std::to_string(frames[k].index) : frames[k].key);
          }
          dup.emplace("duplicate key \"" + top.key + "\"", loc.empty() ? "/" : loc);
        }
        break;
      }
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text.begin(), text.end(), cb);
  } catch (const json::parse_error& e) {
    throw FormatError(e.what(), "byte " + std::to_string(e.byte));
  }
  if (dup) throw *dup;
  DomDocument::Builder b;
  read_node(j, "", b, std::nullopt);
  return std::move(b).build();
}

DomDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open document " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

}  // namespace mmsynth::css
