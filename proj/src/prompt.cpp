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

#include "mmsynth/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmsynth/error.hpp"

namespace mmsynth {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace prompt {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t estimate_tokens(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t words = 0;
  for (std::string w; in >> w;) ++words;
  return static_cast<std::size_t>(std::ceil(static_cast<double>(words) * 1.33));
}

namespace {

std::set<std::string> token_set(std::string_view text) {
  auto v = tokenize(text);
  return {v.begin(), v.end()};
}

}  // namespace

QACorpus::QACorpus(std::vector<QAPair> pairs, std::string_view stop) : pairs_(std::move(pairs)) {
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    const QAPair& p = pairs_[k];
    if (p.question.empty() || p.answer.empty()) {
      throw InputError("corpus pair " + std::to_string(k) + " has an empty field");
    }
    if (!stop.empty() && p.answer.find(stop) != std::string::npos) {
      throw InputError("corpus answer " + std::to_string(k) + " contains the stop sequence");
    }
    for (const auto& t : token_set(p.question)) ++df_[t];
  }
}

std::size_t QACorpus::document_frequency(const std::string& token) const {
  auto it = df_.find(token);
  return it == df_.end() ? 0 : it->second;
}

double QACorpus::idf(const std::string& token) const {
  const std::size_t df = document_frequency(token);
  if (df == 0) return -std::log(1.0 / static_cast<double>(pairs_.size() + 1));
  return -std::log(static_cast<double>(df) / static_cast<double>(pairs_.size()));
}

QACorpus parse_corpus(std::string_view text) {
  std::vector<QAPair> pairs;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(e.what(), where);
    }
    if (!j.is_object() || !j.contains("question") || !j.contains("answer") ||
        !j["question"].is_string() || !j["answer"].is_string()) {
      throw FormatError("expected {\"question\": string, \"answer\": string}", where);
    }
    pairs.push_back({j["question"].get<std::string>(), j["answer"].get<std::string>()});
  }
  return QACorpus(std::move(pairs));
}

QACorpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str());
}

PromptConfig PromptConfig::for_domain(std::string_view domain) {
  PromptConfig cfg;
  if (domain == "css") {
    cfg.header =
        "Here are some examples of CSS selectors\n"
        "and their descriptions. Use them to generate a\n"
        "CSS selector that matches the description.";
    cfg.answer_marker = "Selector:";
  } else {
    cfg.header =
        "Here are some examples of regular expressions\n"
        "and their descriptions. Use them to generate a\n"
        "regular expression that matches the description.";
    cfg.answer_marker = "Regex:";
  }
  return cfg;
}

double relevance_tm(std::string_view q, std::string_view q_star) {
  const auto a = token_set(q);
  if (a.empty()) return 0.0;
  const auto b = token_set(q_star);
  std::size_t shared = 0;
  for (const auto& t : a) shared += b.count(t);
  return static_cast<double>(shared) / static_cast<double>(a.size());
}

double tfidf_score(const std::string& token, std::string_view q, const QACorpus& corpus) {
  const auto toks = tokenize(q);
  const auto tf = std::count(toks.begin(), toks.end(), token);
  return static_cast<double>(tf) * corpus.idf(token);
}

double relevance_tfidf(std::string_view q, std::string_view q_star, const QACorpus& corpus) {
  const auto a = token_set(q);
  const auto b = token_set(q_star);
  double shared = 0.0, total = 0.0;
  for (const auto& t : a) {
    const double s = tfidf_score(t, q, corpus);
    total += s;
    if (b.count(t)) shared += s;
  }
  return total > 0.0 ? shared / total : 0.0;
}

namespace {

std::string pair_block(const QAPair& p, const PromptConfig& cfg) {
  return cfg.question_marker + " " + p.question + "\n" + cfg.answer_marker + " " + p.answer +
         "\n\n";
}

std::string tail(std::string_view q_star, const PromptConfig& cfg) {
  return cfg.question_marker + " " + std::string(q_star) + "\n" + cfg.answer_marker;
}

}  // namespace

std::vector<QAPair> select_qa_pairs(const QACorpus& corpus, std::string_view q_star,
                                    const PromptConfig& cfg) {
  std::vector<double> score(corpus.size());
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& q = corpus.pairs()[k].question;
    score[k] = cfg.metric == Metric::kTokenMatch ? relevance_tm(q_star, q)
                                                 : relevance_tfidf(q_star, q, corpus);
  }
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  std::vector<QAPair> out;
  std::size_t used = estimate_tokens(cfg.header) + estimate_tokens(tail(q_star, cfg));
  for (std::size_t k : order) {
    if (out.size() >= cfg.k) break;
    const QAPair& p = corpus.pairs()[k];
    const bool similar = std::any_of(out.begin(), out.end(), [&](const QAPair& m) {
      return levenshtein(p.answer, m.answer) < cfg.similarity_threshold;
    });
    if (similar) continue;
    const std::size_t cost = estimate_tokens(pair_block(p, cfg));
    if (used + cost > cfg.max_prompt_tokens) break;
    used += cost;
    out.push_back(p);
  }
  return out;
}

std::string build_prompt(const std::vector<QAPair>& pairs, std::string_view q_star,
                         const PromptConfig& cfg) {
  const std::string end = tail(q_star, cfg);
  std::size_t used = estimate_tokens(cfg.header) + estimate_tokens(end);
  if (used > cfg.max_prompt_tokens) {
    throw InputError("header and question exceed the prompt token budget");
  }
  std::string out = cfg.header + "\n\n";
  for (const QAPair& p : pairs) {
    const std::string block = pair_block(p, cfg);
    used += estimate_tokens(block);
    if (used > cfg.max_prompt_tokens) throw InputError("prompt exceeds the token budget");
    out += block;
  }
  return out + end;
}

}  // namespace prompt
}  // namespace mmsynth
