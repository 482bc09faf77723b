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

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmsynth/candidates.hpp"
#include "mmsynth/cegis.hpp"
#include "mmsynth/engine.hpp"
#include "mmsynth/error.hpp"
#include "mmsynth/prompt.hpp"

namespace {

using nlohmann::json;
using namespace mmsynth;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoProgram = 2;

struct EngineFlags {
  std::optional<std::string> beam_size;
  std::optional<std::size_t> depth;
  std::optional<double> pr_occ;
  std::optional<double> pr_red;
  std::optional<std::string> op_th;
  std::optional<std::size_t> time_budget_ms;

  void add(CLI::App& app) {
    app.add_option("--beam-size", beam_size, "Beam size, or \"unbounded\"");
    app.add_option("--depth", depth, "Synthesis depth")->check(CLI::PositiveNumber);
    app.add_option("--pr-occ", pr_occ, "Occurrence threshold")->check(CLI::Range(0.0, 1.0));
    app.add_option("--pr-red", pr_red, "Redundancy threshold")->check(CLI::Range(0.0, 1.0));
    app.add_option("--op-th", op_th, "Operator threshold, or \"inf\"");
    app.add_option("--time-budget", time_budget_ms, "Per-attempt budget in milliseconds")
        ->check(CLI::PositiveNumber);
  }

  json overrides() const {
    json j = json::object();
    if (beam_size) {
      if (*beam_size == "unbounded") {
        j["beam_size"] = "unbounded";
      } else {
        j["beam_size"] = parse_count(*beam_size, "--beam-size");
      }
    }
    if (depth) j["synth_depth"] = *depth;
    if (pr_occ) j["pr_occ"] = *pr_occ;
    if (pr_red) j["pr_red"] = *pr_red;
    if (op_th) {
      if (*op_th == "inf") {
        j["op_th"] = "inf";
      } else {
        j["op_th"] = parse_number(*op_th, "--op-th");
      }
    }
    if (time_budget_ms) j["time_budget_ms"] = *time_budget_ms;
    return j;
  }

  static std::size_t parse_count(const std::string& s, const char* flag) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || s.front() == '-') {
      throw InputError(std::string(flag) + " expects a non-negative integer");
    }
    return static_cast<std::size_t>(v);
  }

  static double parse_number(const std::string& s, const char* flag) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || std::isnan(v)) {
      throw InputError(std::string(flag) + " expects a number");
    }
    return v;
  }
};

struct PromptFlags {
  std::optional<std::string> corpus;
  std::size_t k = 10;
  std::size_t sim_threshold = 5;
  std::string metric = "tfidf";

  void add(CLI::App& app) {
    app.add_option("--corpus", corpus, "Question/answer corpus (JSON lines)");
    app.add_option("--k", k, "Number of prompt pairs")->check(CLI::PositiveNumber);
    app.add_option("--sim-threshold", sim_threshold, "Minimum edit distance between answers");
    app.add_option("--metric", metric, "Relevance metric")
        ->check(CLI::IsMember({"tm", "tfidf"}));
  }

  prompt::PromptConfig config(const std::string& domain) const {
    prompt::PromptConfig cfg = prompt::PromptConfig::for_domain(domain);
    cfg.k = k;
    cfg.similarity_threshold = sim_threshold;
    cfg.metric = metric == "tm" ? prompt::Metric::kTokenMatch : prompt::Metric::kTfIdf;
    return cfg;
  }
};

struct CompletionFlags {
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  double temperature = 0.6;
  std::size_t n = 20;

  void add(CLI::App& app) {
    app.add_option("--endpoint", endpoint, "Completion endpoint URL");
    app.add_option("--model", model, "Model name sent with each request");
    app.add_option("--temperature", temperature, "Sampling temperature")
        ->check(CLI::Range(0.0, 2.0));
    app.add_option("--n", n, "Completions per request")->check(CLI::PositiveNumber);
  }

  CompletionConfig config(const prompt::PromptConfig& p) const {
    CompletionConfig cfg;
    cfg.temperature = temperature;
    cfg.n_completions = n;
    cfg.stop_sequence = p.question_marker;
    cfg.answer_marker = p.answer_marker;
    if (endpoint) cfg.endpoint = *endpoint;
    if (model) cfg.model = *model;
    return cfg;
  }
};

struct TaskFlags {
  std::optional<std::string> task;
  std::optional<std::string> nl;
  std::optional<std::string> fixture;
  std::optional<std::string> document;
  std::optional<std::string> domain;

  void add(CLI::App& app, bool with_examples) {
    app.add_option("--task", task, "Task file (JSON)")->check(CLI::ExistingFile);
    app.add_option("--nl", nl, "Natural-language description");
    app.add_option("--fixture", fixture, "Candidate fixture, one program per line");
    app.add_option("--domain", domain, "Task domain")->check(CLI::IsMember({"regex", "css"}));
    if (with_examples) app.add_option("--document", document, "Document for css tasks");
  }

  cegis::BenchmarkTask load() const {
    cegis::BenchmarkTask t;
    if (task) t = cegis::load_task(*task);
    if (nl) t.nl = *nl;
    if (domain) t.domain = *domain;
    if (fixture) {
      t.fixture = *fixture;
      t.candidates.reset();
    }
    if (document) t.document = *document;
    if (t.domain == "css" && !t.document) throw InputError("css tasks need --document");
    return t;
  }
};

struct Live {
  std::optional<prompt::QACorpus> corpus;
  std::unique_ptr<HttpCompletionClient> client;
};

// Fills the live-generation part of `cfg` when a corpus and endpoint are given.
void setup_live(cegis::HarnessConfig& cfg, Live& live, const PromptFlags& pf,
                const CompletionFlags& cf, const std::string& domain) {
  cfg.prompt = pf.config(domain);
  cfg.completion = cf.config(cfg.prompt);
  if (pf.corpus && cf.endpoint) {
    live.corpus = prompt::load_corpus(*pf.corpus);
    live.client = std::make_unique<HttpCompletionClient>();
    cfg.corpus = &*live.corpus;
    cfg.client = live.client.get();
  }
}

void log_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_synth(const TaskFlags& tf, const EngineFlags& ef, const PromptFlags& pf,
              const CompletionFlags& cf, const std::string& variant, std::uint64_t seed) {
  const cegis::BenchmarkTask task = tf.load();
  const cegis::Variant v = cegis::parse_variant(variant);
  cegis::HarnessConfig hc;
  hc.variant = v;
  Live live;
  setup_live(hc, live, pf, cf, task.domain);

  SynthesisConfig cfg;
  cegis::apply_engine_overrides(cfg, task.engine, "/engine");
  cegis::apply_engine_overrides(cfg, ef.overrides(), "flags");
  cfg = cegis::apply_variant(cfg, v);
  cfg.seed = seed;

  const auto ctx = cegis::make_context(task);
  const CandidateSet cs = cegis::task_candidates(task, *ctx, hc);
  for (const Discarded& d : cs.discarded()) {
    std::cerr << "discarded: " << d.source << " (" << d.reason << ")\n";
  }
  const auto sem = ctx->semantics(task.examples);
  const SynthesisResult res = synthesize(cs, *sem, ctx->domain(), cfg);
  const SynthesisStats& st = res.stats;
  std::cerr << "candidates: " << st.candidates << "\n"
            << "initial components: " << st.initial_components << "\n"
            << "cache sizes:";
  for (std::size_t n : st.cache_sizes) std::cerr << " " << n;
  std::cerr << "\nconsistent: " << st.consistent << "\n";
  log_warnings(st.warnings);
  if (!res.program) {
    std::cerr << (st.timed_out ? "time budget exhausted; " : "") << "no consistent program\n";
    return kExitNoProgram;
  }
  std::cout << ctx->domain().print(*res.program) << "\n";
  return kExitOk;
}

int cmd_prompt(const TaskFlags& tf, const PromptFlags& pf, const std::string& variant,
               bool explain) {
  if (!pf.corpus) throw InputError("--corpus is required");
  const cegis::BenchmarkTask task = tf.load();
  if (task.nl.empty()) throw InputError("a question is required (--nl or --task)");
  const prompt::QACorpus corpus = prompt::load_corpus(*pf.corpus);
  if (corpus.empty()) throw InputError("empty corpus");
  const prompt::PromptConfig cfg = pf.config(task.domain);
  std::cout << cegis::task_prompt(task.nl, corpus, cfg, cegis::parse_variant(variant)) << "\n";
  if (explain) {
    for (const prompt::QAPair& p : corpus.pairs()) {
      const double score = cfg.metric == prompt::Metric::kTokenMatch
                               ? prompt::relevance_tm(task.nl, p.question)
                               : prompt::relevance_tfidf(task.nl, p.question, corpus);
      std::cerr << score << "\t" << p.question << "\n";
    }
  }
  return kExitOk;
}

int cmd_candidates(const TaskFlags& tf, const PromptFlags& pf, const CompletionFlags& cf,
                   const std::string& variant) {
  const cegis::BenchmarkTask task = tf.load();
  cegis::HarnessConfig hc;
  hc.variant = cegis::parse_variant(variant);
  Live live;
  setup_live(hc, live, pf, cf, task.domain);
  cegis::BenchmarkTask t = task;
  if (!t.fixture && !t.candidates && !hc.client) {
    throw InputError("give --fixture, or --corpus with --endpoint");
  }
  const auto ctx = cegis::make_context(t);
  const CandidateSet cs = cegis::task_candidates(t, *ctx, hc);
  for (const std::string& s : cs.sources()) std::cout << s << "\n";
  for (const Discarded& d : cs.discarded()) {
    std::cerr << "discarded: " << d.source << " (" << d.reason << ")\n";
  }
  std::cerr << cs.size() << " programs, " << cs.discarded().size() << " discarded\n";
  return kExitOk;
}

int cmd_bench(const std::string& suite, const std::optional<std::string>& report_path,
              const EngineFlags& ef, const PromptFlags& pf, const CompletionFlags& cf,
              const std::string& variant, std::uint64_t seed, std::size_t max_rounds,
              bool timing) {
  cegis::HarnessConfig hc;
  const std::vector<cegis::BenchmarkTask> tasks = cegis::load_suite(suite, &hc.engine);
  hc.engine_overrides = ef.overrides();
  cegis::apply_engine_overrides(hc.engine, hc.engine_overrides, "flags");
  hc.variant = cegis::parse_variant(variant);
  hc.seed = seed;
  hc.max_rounds = max_rounds;
  hc.record_timing = timing;
  Live live;
  setup_live(hc, live, pf, cf, "regex");
  std::cerr << "seed " << seed << ", variant " << cegis::variant_name(hc.variant) << "\n";
  const cegis::SuiteReport report = cegis::run_suite(tasks, hc);
  for (const cegis::TaskResult& r : report.tasks) {
    std::cerr << r.name << ": " << cegis::status_name(r.status) << " in " << r.wall_ms
              << " ms (longest attempt " << r.max_attempt_ms << " ms), initial components "
              << r.initial_components << "\n";
  }
  const std::string text = cegis::to_json(report, timing).dump(2) + "\n";
  if (report_path) {
    std::ofstream out(*report_path, std::ios::binary);
    if (!out) throw InputError("cannot write report \"" + *report_path + "\"");
    out << text;
    std::cout << cegis::summary_table(report);
  } else {
    std::cout << text;
    std::cerr << cegis::summary_table(report);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-modal program synthesis for regular expressions and CSS selectors"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string variant = "default";

  auto add_common = [&](CLI::App& sub) {
    sub.add_option("--seed", seed, "Seed for randomized ranking")->capture_default_str();
    sub.add_option("--variant", variant, "Ablation: default, v1, v2, v3 or v4")
        ->check(CLI::IsMember({"default", "v1", "v2", "v3", "v4"}));
  };

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a program for one task");
  TaskFlags synth_task;
  EngineFlags synth_engine;
  PromptFlags synth_prompt;
  CompletionFlags synth_completion;
  synth_task.add(*synth, true);
  synth_engine.add(*synth);
  synth_prompt.add(*synth);
  synth_completion.add(*synth);
  add_common(*synth);
  synth->get_option("--task")->required();

  CLI::App* prompt_cmd = app.add_subcommand("prompt", "Print the prompt for a question");
  TaskFlags prompt_task;
  PromptFlags prompt_flags;
  bool explain = false;
  prompt_task.add(*prompt_cmd, false);
  prompt_flags.add(*prompt_cmd);
  add_common(*prompt_cmd);
  prompt_cmd->add_flag("--explain", explain, "Print each pair's relevance to stderr");
  prompt_cmd->get_option("--corpus")->required();

  CLI::App* cand = app.add_subcommand("candidates", "Fetch or replay candidate programs");
  TaskFlags cand_task;
  PromptFlags cand_prompt;
  CompletionFlags cand_completion;
  cand_task.add(*cand, true);
  cand_prompt.add(*cand);
  cand_completion.add(*cand);
  add_common(*cand);

  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark suite");
  std::string suite;
  std::optional<std::string> report;
  std::size_t max_rounds = 10;
  bool timing = false;
  EngineFlags bench_engine;
  PromptFlags bench_prompt;
  CompletionFlags bench_completion;
  bench->add_option("--suite", suite, "Suite file (JSON)")->required()->check(CLI::ExistingFile);
  bench->add_option("--report", report, "Write the JSON report here instead of stdout");
  bench->add_option("--max-rounds", max_rounds, "Refinement rounds per task")
      ->check(CLI::Range(0, 10));
  bench->add_flag("--timing", timing, "Include wall-clock times in the report");
  bench_engine.add(*bench);
  bench_prompt.add(*bench);
  bench_completion.add(*bench);
  add_common(*bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*synth) {
      return cmd_synth(synth_task, synth_engine, synth_prompt, synth_completion, variant, seed);
    }
    if (*prompt_cmd) return cmd_prompt(prompt_task, prompt_flags, variant, explain);
    if (*cand) return cmd_candidates(cand_task, cand_prompt, cand_completion, variant);
    if (*bench) {
      return cmd_bench(suite, report, bench_engine, bench_prompt, bench_completion, variant, seed,
                       max_rounds, timing);
    }
  } catch (const std::exception& e) {
    std::cerr << "mmsynth: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
