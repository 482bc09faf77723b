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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mmsynth {

// Unit-cost edit distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

namespace prompt {

// Lowercase alphanumeric runs; everything else separates tokens.
std::vector<std::string> tokenize(std::string_view text);

// Whitespace-delimited words times 1.33, rounded up.
std::size_t estimate_tokens(std::string_view text);

struct QAPair {
  std::string question;
  std::string answer;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

class QACorpus {
 public:
  QACorpus() = default;
  // Throws InputError on empty fields or answers containing `stop`.
  explicit QACorpus(std::vector<QAPair> pairs, std::string_view stop = "NL:");

  const std::vector<QAPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  // Number of questions containing `token`.
  std::size_t document_frequency(const std::string& token) const;
  // -log(df / N), with df = 1 and N + 1 in place of N for unseen tokens.
  double idf(const std::string& token) const;

 private:
  std::vector<QAPair> pairs_;
  std::unordered_map<std::string, std::size_t> df_;
};

// One JSON object {"question", "answer"} per line; blank lines are skipped.
// Throws FormatError with a "line N" location.
QACorpus load_corpus(const std::string& path);
QACorpus parse_corpus(std::string_view text);

enum class Metric { kTokenMatch, kTfIdf };

struct PromptConfig {
  std::size_t k = 10;
  std::size_t similarity_threshold = 5;
  Metric metric = Metric::kTfIdf;
  std::string header;
  std::string question_marker = "NL:";
  std::string answer_marker = "Regex:";
  std::size_t max_prompt_tokens = 2048;

  // Header and answer marker for "regex" or "css".
  static PromptConfig for_domain(std::string_view domain);
};

// |CT(q, q*)| / |q| over distinct tokens; 0 when q has no tokens.
double relevance_tm(std::string_view q, std::string_view q_star);
// Occurrences of `token` in q times its corpus idf.
double tfidf_score(const std::string& token, std::string_view q, const QACorpus& corpus);
// TF-IDF mass of shared tokens over the mass of all tokens of q.
double relevance_tfidf(std::string_view q, std::string_view q_star, const QACorpus& corpus);

// Greedy relevance-ordered selection with answer diversity; ties keep corpus
// order.
std::vector<QAPair> select_qa_pairs(const QACorpus& corpus, std::string_view q_star,
                                    const PromptConfig& cfg);

// Throws InputError when the header and question alone exceed the budget.
std::string build_prompt(const std::vector<QAPair>& pairs, std::string_view q_star,
                         const PromptConfig& cfg);

}  // namespace prompt
}  // namespace mmsynth
