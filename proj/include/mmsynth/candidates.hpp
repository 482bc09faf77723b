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

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mmsynth/semantics.hpp"

namespace mmsynth {

struct CompletionConfig {
  double temperature = 0.6;
  std::size_t n_completions = 20;
  std::size_t max_tokens = 64;
  std::string stop_sequence = "NL:";
  std::string answer_marker = "Regex:";
  // Full URL of a completions endpoint, e.g. https://api.openai.com/v1/completions.
  std::string endpoint;
  std::string api_key_env = "OPENAI_API_KEY";
  // Sent as "model" when non-empty.
  std::string model;
  std::chrono::milliseconds timeout{20000};
};

struct Discarded {
  std::string source;
  std::string reason;
};

// Parsed, structurally deduplicated candidate programs.
class CandidateSet {
 public:
  // Parses `source`; failures are recorded, never thrown.
  void add(const std::string& source, const Domain& domain);
  void discard(std::string source, std::string reason);

  const std::vector<Term>& programs() const { return programs_; }
  // Source string of each program (first occurrence).
  const std::vector<std::string>& sources() const { return sources_; }
  // Every string offered, including duplicates and failures.
  const std::vector<std::string>& raw() const { return raw_; }
  const std::vector<Discarded>& discarded() const { return discarded_; }
  std::size_t size() const { return programs_.size(); }
  bool empty() const { return programs_.empty(); }

 private:
  std::vector<Term> programs_;
  std::vector<std::string> sources_;
  std::vector<std::string> raw_;
  std::vector<Discarded> discarded_;
  TermSet seen_;
};

// Text after the first answer marker up to the stop sequence, trimmed.
// Throws ExtractionError when the marker is missing or the program is empty.
std::string extract_program(std::string_view completion, const CompletionConfig& cfg);

// One candidate per line; blank lines are ignored. Throws InputError for an
// unreadable file or one without candidates.
CandidateSet load_fixture(const std::string& path, const Domain& domain);

// Prompt in, raw completions out.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::vector<std::string> complete(const std::string& prompt,
                                            const CompletionConfig& cfg) = 0;
};

// POSTs {prompt, temperature, n, max_tokens, stop[, model]} as JSON and reads
// choices[].text. The bearer token comes from cfg.api_key_env when set. One
// retry with jittered backoff on connection errors, 429 and 5xx; other
// failures throw TransportError.
class HttpCompletionClient final : public CompletionClient {
 public:
  std::vector<std::string> complete(const std::string& prompt,
                                    const CompletionConfig& cfg) override;
};

// Each completion is read as if it followed the prompt's trailing answer
// marker. Throws InputError for an empty prompt or n_completions = 0.
CandidateSet get_candidates(const std::string& prompt, const CompletionConfig& cfg,
                            const Domain& domain, CompletionClient& client);

}  // namespace mmsynth
