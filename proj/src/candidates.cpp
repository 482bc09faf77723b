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

#include "mmsynth/candidates.hpp"

#include <fstream>

#include "mmsynth/error.hpp"

namespace mmsynth {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(b, e - b + 1);
}

}  // namespace

void CandidateSet::add(const std::string& source, const Domain& domain) {
  raw_.push_back(source);
  Term t;
  try {
    t = domain.parse(source);
  } catch (const ParseError& e) {
    discarded_.push_back({source, e.what()});
    return;
  }
  if (seen_.insert(t).second) {
    programs_.push_back(t);
    sources_.push_back(source);
  }
}

void CandidateSet::discard(std::string source, std::string reason) {
  raw_.push_back(source);
  discarded_.push_back({std::move(source), std::move(reason)});
}

std::string extract_program(std::string_view completion, const CompletionConfig& cfg) {
  const auto m = completion.find(cfg.answer_marker);
  if (cfg.answer_marker.empty() || m == std::string_view::npos) {
    throw ExtractionError("missing answer marker \"" + cfg.answer_marker + "\"");
  }
  std::string_view rest = completion.substr(m + cfg.answer_marker.size());
  if (!cfg.stop_sequence.empty()) {
    if (auto s = rest.find(cfg.stop_sequence); s != std::string_view::npos) rest = rest.substr(0, s);
  }
  // A program is a single line; later lines are continuation prose.
  rest = trim(rest);
  if (auto nl = rest.find('\n'); nl != std::string_view::npos) rest = trim(rest.substr(0, nl));
  if (rest.empty()) throw ExtractionError("empty program");
  return std::string(rest);
}

CandidateSet load_fixture(const std::string& path, const Domain& domain) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open fixture " + path);
  CandidateSet set;
  for (std::string line; std::getline(in, line);) {
    const std::string_view t = trim(line);
    if (!t.empty()) set.add(std::string(t), domain);
  }
  if (set.raw().empty()) throw InputError("no candidates");
  return set;
}

CandidateSet get_candidates(const std::string& prompt, const CompletionConfig& cfg,
                            const Domain& domain, CompletionClient& client) {
  if (prompt.empty()) throw InputError("empty prompt");
  if (cfg.n_completions == 0) throw InputError("no candidates requested");
  std::vector<std::string> completions = client.complete(prompt, cfg);
  if (completions.size() > cfg.n_completions) completions.resize(cfg.n_completions);
  CandidateSet set;
  for (const std::string& c : completions) {
    try {
      set.add(extract_program(cfg.answer_marker + " " + c, cfg), domain);
    } catch (const ExtractionError& e) {
      set.discard(c, e.what());
    }
  }
  return set;
}

}  // namespace mmsynth
