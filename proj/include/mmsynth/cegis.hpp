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

#include <nlohmann/json.hpp>

#include "mmsynth/candidates.hpp"
#include "mmsynth/css.hpp"
#include "mmsynth/engine.hpp"
#include "mmsynth/prompt.hpp"
#include "mmsynth/semantics.hpp"

namespace mmsynth::cegis {

enum class Equivalence { kEqual, kDifferent, kUnknown };

struct EquivalenceConfig {
  // Longest string compared for regexes.
  std::size_t max_len = 8;
  // Cap on explored automaton configurations before the verdict is unknown.
  std::size_t max_configs = 200'000;
};

struct Comparison {
  Equivalence verdict = Equivalence::kUnknown;
  // Accepted by the program but not the target, labelled negative, then
  // accepted by the target only, labelled positive.
  std::vector<Example> witnesses;
};

// Per-domain services the harness needs: parsing, semantics over a fixed
// example set, evaluation of single examples and bounded comparison.
class TaskContext {
 public:
  virtual ~TaskContext() = default;
  virtual const Domain& domain() const = 0;
  virtual std::unique_ptr<Semantics> semantics(std::span<const Example> examples) const = 0;
  // Output of `t` on the example's input; throws InputError for an input
  // that does not belong to the domain.
  virtual bool accepts(const Term& t, const Example& e) const = 0;
  virtual Comparison compare(const Term& p, const Term& g, const EquivalenceConfig& cfg) const = 0;
};

std::unique_ptr<TaskContext> regex_context();
std::unique_ptr<TaskContext> css_context(std::shared_ptr<const css::DomDocument> doc);

Equivalence bounded_equivalent(const Term& p, const Term& g, const TaskContext& ctx,
                               const EquivalenceConfig& cfg = {});
// Shortest witnesses, program-only first; empty when none exists in bounds.
std::vector<Example> distinguishing_examples(const Term& p, const Term& g,
                                             const TaskContext& ctx,
                                             const EquivalenceConfig& cfg = {});

enum class Variant { kDefault, kV1, kV2, kV3, kV4 };

Variant parse_variant(std::string_view name);
std::string variant_name(Variant v);
// Engine flags of an ablation; v4 only changes prompt construction.
SynthesisConfig apply_variant(SynthesisConfig cfg, Variant v);

struct BenchmarkTask {
  std::string name;
  std::string domain = "regex";
  std::string nl;
  std::vector<Example> examples;
  std::optional<std::string> ground_truth;
  // Candidate file, one program per line.
  std::optional<std::string> fixture;
  // Inline candidates, used when no fixture is given.
  std::optional<std::vector<std::string>> candidates;
  // Document for the css domain.
  std::optional<std::string> document;
  // Engine settings for this task, applied over the suite defaults.
  nlohmann::json engine = nlohmann::json::object();
};

struct HarnessConfig {
  SynthesisConfig engine;
  // Engine settings applied after each task's own overrides.
  nlohmann::json engine_overrides = nlohmann::json::object();
  EquivalenceConfig equivalence;
  std::size_t max_rounds = 10;
  Variant variant = Variant::kDefault;
  std::uint64_t seed = 0;
  bool record_timing = false;

  // Live candidate generation for tasks without fixture or inline
  // candidates. Both must be set for such tasks to run.
  const prompt::QACorpus* corpus = nullptr;
  CompletionClient* client = nullptr;
  prompt::PromptConfig prompt;
  CompletionConfig completion;
};

enum class Status { kSolved, kUnsolved, kUnknown, kSkipped, kError };
std::string status_name(Status s);

struct TaskResult {
  std::string name;
  std::string domain;
  Status status = Status::kUnsolved;
  std::string reason;
  // Refinement rounds before the final attempt; 0 when the first guess held.
  std::size_t iterations = 0;
  std::size_t attempts = 0;
  std::optional<std::string> program;
  std::size_t candidates = 0;
  std::size_t discarded = 0;
  std::size_t initial_components = 0;
  std::vector<std::size_t> cache_sizes;
  std::vector<Example> added_examples;
  std::size_t final_examples = 0;
  std::vector<std::string> warnings;
  double wall_ms = 0.0;
  double max_attempt_ms = 0.0;
};

struct SuiteReport {
  Variant variant = Variant::kDefault;
  std::uint64_t seed = 0;
  std::vector<TaskResult> tasks;

  std::size_t solved() const;
  double accuracy() const;
  // Solved tasks per iteration count.
  std::map<std::size_t, std::size_t> histogram() const;
};

// Context for the task's domain, loading its document for css.
std::unique_ptr<TaskContext> make_context(const BenchmarkTask& task);
// Candidates from the fixture, the inline list, or the live client. Throws
// InputError when no source is available.
CandidateSet task_candidates(const BenchmarkTask& task, const TaskContext& ctx,
                             const HarnessConfig& cfg);
// Prompt for live candidate generation; v4 takes the first k corpus pairs.
std::string task_prompt(const std::string& nl, const prompt::QACorpus& corpus,
                        const prompt::PromptConfig& cfg, Variant variant);

// Runs the refinement loop for one task; failures are recorded in the
// result, never thrown.
TaskResult run_task(const BenchmarkTask& task, const HarnessConfig& cfg);
// Throws InputError("no tasks") for an empty suite.
SuiteReport run_suite(std::span<const BenchmarkTask> tasks, const HarnessConfig& cfg);

// {"engine": {...}, "tasks": [...]}; relative paths resolve against the
// directory of `path`. Throws FormatError with a JSON pointer location.
std::vector<BenchmarkTask> load_suite(const std::string& path, SynthesisConfig* defaults = nullptr);
std::vector<BenchmarkTask> parse_suite(std::string_view text, const std::string& base_dir,
                                       SynthesisConfig* defaults = nullptr);
BenchmarkTask parse_task(const nlohmann::json& j, const std::string& base_dir,
                         const std::string& location = "");
// A single task object read from a file; paths resolve against its directory.
BenchmarkTask load_task(const std::string& path);

// Overlays known engine keys from `j` onto `cfg`; unknown keys throw
// FormatError.
void apply_engine_overrides(SynthesisConfig& cfg, const nlohmann::json& j,
                            const std::string& location = "/engine");

nlohmann::json to_json(const TaskResult& r, bool timing);
nlohmann::json to_json(const SuiteReport& r, bool timing);
// Fixed-width summary with one row per task and the iteration histogram.
std::string summary_table(const SuiteReport& r);

}  // namespace mmsynth::cegis
