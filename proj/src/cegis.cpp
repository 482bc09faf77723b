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

#include "mmsynth/cegis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mmsynth/error.hpp"
#include "mmsynth/regex.hpp"

namespace mmsynth::cegis {

namespace {

using nlohmann::json;

constexpr std::size_t kRoundLimit = 10;

[[noreturn]] void hard_failure(const std::string& what) {
  std::fprintf(stderr, "mmsynth: invariant violated: %s\n", what.c_str());
  std::abort();
}

class RegexContext final : public TaskContext {
 public:
  const Domain& domain() const override { return domain_; }
  std::unique_ptr<Semantics> semantics(std::span<const Example> examples) const override {
    return regex::make_semantics(examples);
  }
  bool accepts(const Term& t, const Example& e) const override {
    return regex::match_full(t, e.input);
  }
  Comparison compare(const Term& p, const Term& g, const EquivalenceConfig& cfg) const override {
    const regex::BoundedComparison b = regex::compare_bounded(p, g, cfg.max_len, cfg.max_configs);
    Comparison out;
    if (b.first_only) out.witnesses.push_back({*b.first_only, false});
    if (b.second_only) out.witnesses.push_back({*b.second_only, true});
    switch (b.verdict) {
      case regex::Verdict::kEqual: out.verdict = Equivalence::kEqual; break;
      case regex::Verdict::kDifferent: out.verdict = Equivalence::kDifferent; break;
      case regex::Verdict::kUnknown: out.verdict = Equivalence::kUnknown; break;
    }
    return out;
  }

 private:
  regex::RegexDomain domain_;
};

class CssContext final : public TaskContext {
 public:
  explicit CssContext(std::shared_ptr<const css::DomDocument> doc) : doc_(std::move(doc)) {
    if (!doc_) throw InputError("css tasks need a document");
  }
  const Domain& domain() const override { return domain_; }
  std::unique_ptr<Semantics> semantics(std::span<const Example> examples) const override {
    return css::make_semantics(*doc_, examples);
  }
  bool accepts(const Term& t, const Example& e) const override {
    const auto id = doc_->find(e.input);
    if (!id) throw InputError("unknown node \"" + e.input + "\"");
    const std::vector<std::size_t> sel = css::evaluate_selector(t, *doc_);
    return std::binary_search(sel.begin(), sel.end(), *id);
  }
  Comparison compare(const Term& p, const Term& g, const EquivalenceConfig&) const override {
    const std::vector<std::size_t> a = css::evaluate_selector(p, *doc_);
    const std::vector<std::size_t> b = css::evaluate_selector(g, *doc_);
    Comparison out;
    std::vector<std::size_t> only_a, only_b;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
    if (!only_a.empty()) out.witnesses.push_back({doc_->node(only_a.front()).path, false});
    if (!only_b.empty()) out.witnesses.push_back({doc_->node(only_b.front()).path, true});
    out.verdict = out.witnesses.empty() ? Equivalence::kEqual : Equivalence::kDifferent;
    return out;
  }

 private:
  std::shared_ptr<const css::DomDocument> doc_;
  css::CssDomain domain_;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string child(const std::string& loc, const std::string& key) { return loc + "/" + key; }

const json& require(const json& j, const char* key, const std::string& loc) {
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field \"") + key + "\"", loc);
  return *it;
}

std::string as_string(const json& j, const std::string& loc) {
  if (!j.is_string()) throw FormatError("expected a string", loc);
  return j.get<std::string>();
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
  return path.lexically_normal().string();
}

json examples_json(const std::vector<Example>& ex) {
  json arr = json::array();
  for (const Example& e : ex) arr.push_back({{"input", e.input}, {"output", e.output}});
  return arr;
}

}  // namespace

std::unique_ptr<TaskContext> make_context(const BenchmarkTask& task) {
  if (task.domain == "regex") return regex_context();
  if (task.domain == "css") {
    if (!task.document) throw InputError("css task without a document");
    return css_context(std::make_shared<css::DomDocument>(css::load_document(*task.document)));
  }
  throw InputError("unknown domain \"" + task.domain + "\"");
}

CandidateSet task_candidates(const BenchmarkTask& task, const TaskContext& ctx,
                               const HarnessConfig& cfg) {
  if (task.fixture) return load_fixture(*task.fixture, ctx.domain());
  if (task.candidates) {
    CandidateSet cs;
    for (const std::string& c : *task.candidates) cs.add(c, ctx.domain());
    return cs;
  }
  if (!cfg.corpus || !cfg.client) throw InputError("no candidate source for task");
  return get_candidates(task_prompt(task.nl, *cfg.corpus, cfg.prompt, cfg.variant),
                        cfg.completion, ctx.domain(), *cfg.client);
}

std::string task_prompt(const std::string& nl, const prompt::QACorpus& corpus,
                        const prompt::PromptConfig& cfg, Variant variant) {
  std::vector<prompt::QAPair> pairs;
  if (variant == Variant::kV4) {
    const auto& all = corpus.pairs();
    pairs.assign(all.begin(),
                 all.begin() + static_cast<std::ptrdiff_t>(std::min(cfg.k, all.size())));
  } else {
    pairs = prompt::select_qa_pairs(corpus, nl, cfg);
  }
  return prompt::build_prompt(pairs, nl, cfg);
}

std::unique_ptr<TaskContext> regex_context() { return std::make_unique<RegexContext>(); }

std::unique_ptr<TaskContext> css_context(std::shared_ptr<const css::DomDocument> doc) {
  return std::make_unique<CssContext>(std::move(doc));
}

Equivalence bounded_equivalent(const Term& p, const Term& g, const TaskContext& ctx,
                               const EquivalenceConfig& cfg) {
  if (p == g) return Equivalence::kEqual;
  return ctx.compare(p, g, cfg).verdict;
}

std::vector<Example> distinguishing_examples(const Term& p, const Term& g,
                                             const TaskContext& ctx,
                                             const EquivalenceConfig& cfg) {
  if (p == g) return {};
  return ctx.compare(p, g, cfg).witnesses;
}

Variant parse_variant(std::string_view name) {
  if (name == "default" || name.empty()) return Variant::kDefault;
  if (name == "v1") return Variant::kV1;
  if (name == "v2") return Variant::kV2;
  if (name == "v3") return Variant::kV3;
  if (name == "v4") return Variant::kV4;
  throw InputError("unknown variant \"" + std::string(name) + "\"");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kDefault: return "default";
    case Variant::kV1: return "v1";
    case Variant::kV2: return "v2";
    case Variant::kV3: return "v3";
    case Variant::kV4: return "v4";
  }
  return "default";
}

SynthesisConfig apply_variant(SynthesisConfig cfg, Variant v) {
  cfg.init_all_atoms = cfg.init_all_atoms || v == Variant::kV1;
  cfg.full_expansion = cfg.full_expansion || v == Variant::kV2;
  cfg.random_rank = cfg.random_rank || v == Variant::kV3;
  return cfg;
}

std::string status_name(Status s) {
  switch (s) {
    case Status::kSolved: return "solved";
    case Status::kUnsolved: return "unsolved";
    case Status::kUnknown: return "unknown";
    case Status::kSkipped: return "skipped";
    case Status::kError: return "error";
  }
  return "error";
}

std::size_t SuiteReport::solved() const {
  return static_cast<std::size_t>(std::count_if(tasks.begin(), tasks.end(), [](const TaskResult& r) {
    return r.status == Status::kSolved;
  }));
}

double SuiteReport::accuracy() const {
  return tasks.empty() ? 0.0 : static_cast<double>(solved()) / static_cast<double>(tasks.size());
}

std::map<std::size_t, std::size_t> SuiteReport::histogram() const {
  std::map<std::size_t, std::size_t> h;
  for (const TaskResult& r : tasks) {
    if (r.status == Status::kSolved) ++h[r.iterations];
  }
  return h;
}

TaskResult run_task(const BenchmarkTask& task, const HarnessConfig& cfg) {
  TaskResult r;
  r.name = task.name;
  r.domain = task.domain;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (cfg.max_rounds > kRoundLimit) throw InputError("at most 10 refinement rounds");
    const std::unique_ptr<TaskContext> ctx = make_context(task);
    const Domain& domain = ctx->domain();

    SynthesisConfig ecfg = cfg.engine;
    apply_engine_overrides(ecfg, task.engine, "/engine");
    apply_engine_overrides(ecfg, cfg.engine_overrides, "/engine");
    ecfg = apply_variant(ecfg, cfg.variant);
    ecfg.seed = cfg.seed;

    std::optional<Term> gt;
    if (task.ground_truth) {
      try {
        gt = domain.parse(*task.ground_truth);
      } catch (const ParseError& e) {
        r.status = Status::kSkipped;
        r.reason = std::string("unparseable ground truth: ") + e.what();
        r.wall_ms = ms_since(t0);
        return r;
      }
      for (const Example& e : task.examples) {
        if (ctx->accepts(*gt, e) != e.output) {
          throw InputError("ground truth disagrees with example \"" + e.input + "\"");
        }
      }
    }

    CandidateSet cs;
    try {
      cs = task_candidates(task, *ctx, cfg);
    } catch (const InputError& e) {
      if (std::string(e.what()) != "no candidates") throw;
    }
    r.candidates = cs.size();
    r.discarded = cs.discarded().size();
    if (cs.empty()) {
      r.status = Status::kUnsolved;
      r.reason = "no candidates";
      r.wall_ms = ms_since(t0);
      return r;
    }

    std::vector<Example> examples = task.examples;
    for (std::size_t round = 0;; ++round) {
      const auto a0 = std::chrono::steady_clock::now();
      const std::unique_ptr<Semantics> sem = ctx->semantics(examples);
      SynthesisResult res = synthesize(cs, *sem, domain, ecfg);
      r.max_attempt_ms = std::max(r.max_attempt_ms, ms_since(a0));
      ++r.attempts;
      r.iterations = round;
      r.initial_components = res.stats.initial_components;
      r.cache_sizes = res.stats.cache_sizes;
      for (std::string& w : res.stats.warnings) r.warnings.push_back(std::move(w));
      if (!res.program) {
        r.status = Status::kUnsolved;
        r.reason = res.stats.timed_out ? "time budget exhausted" : "no consistent program";
        r.program.reset();
        break;
      }
      r.program = domain.print(*res.program);
      if (!gt) {
        r.status = Status::kUnknown;
        r.reason = "no ground truth";
        break;
      }
      const Comparison cmp = ctx->compare(*res.program, *gt, cfg.equivalence);
      if (cmp.verdict == Equivalence::kEqual) {
        r.status = Status::kSolved;
        break;
      }
      if (cmp.verdict == Equivalence::kUnknown && cmp.witnesses.empty()) {
        r.status = Status::kUnknown;
        r.reason = "equivalence check exceeded its budget";
        break;
      }
      if (round == cfg.max_rounds) {
        r.status = Status::kUnsolved;
        r.reason = "refinement limit reached";
        break;
      }
      for (const Example& w : cmp.witnesses) {
        const bool clash = std::any_of(examples.begin(), examples.end(),
                                       [&](const Example& e) { return e.input == w.input; });
        if (clash) hard_failure("witness \"" + w.input + "\" repeats an example input");
        examples.push_back(w);
        r.added_examples.push_back(w);
      }
    }
    r.final_examples = examples.size();
  } catch (const Error& e) {
    r.status = Status::kError;
    r.reason = e.what();
  } catch (const std::exception& e) {
    r.status = Status::kError;
    r.reason = std::string("internal error: ") + e.what();
  }
  if (r.iterations > kRoundLimit) hard_failure("task " + r.name + " exceeded 10 refinement rounds");
  r.wall_ms = ms_since(t0);
  return r;
}

SuiteReport run_suite(std::span<const BenchmarkTask> tasks, const HarnessConfig& cfg) {
  if (tasks.empty()) throw InputError("no tasks");
  SuiteReport report;
  report.variant = cfg.variant;
  report.seed = cfg.seed;
  for (const BenchmarkTask& t : tasks) report.tasks.push_back(run_task(t, cfg));
  return report;
}

void apply_engine_overrides(SynthesisConfig& cfg, const json& j, const std::string& location) {
  if (j.is_null()) return;
  if (!j.is_object()) throw FormatError("engine settings must be an object", location);
  for (const auto& [key, v] : j.items()) {
    const std::string loc = child(location, key);
    auto number = [&]() {
      if (!v.is_number()) throw FormatError("expected a number", loc);
      return v.get<double>();
    };
    auto count = [&]() {
      if (!v.is_number_unsigned()) throw FormatError("expected a non-negative integer", loc);
      return v.get<std::size_t>();
    };
    auto flag = [&]() {
      if (!v.is_boolean()) throw FormatError("expected a boolean", loc);
      return v.get<bool>();
    };
    if (key == "synth_depth") {
      cfg.synth_depth = count();
    } else if (key == "pr_occ") {
      cfg.pr_occ = number();
    } else if (key == "pr_red") {
      cfg.pr_red = number();
    } else if (key == "beam_size") {
      if (v.is_string() && v.get<std::string>() == "unbounded") {
        cfg.beam_size = kUnboundedBeam;
      } else {
        cfg.beam_size = count();
      }
    } else if (key == "op_th") {
      if (v.is_string() && v.get<std::string>() == "inf") {
        cfg.op_th = std::numeric_limits<double>::infinity();
      } else {
        cfg.op_th = number();
      }
    } else if (key == "time_budget_ms") {
      cfg.time_budget = std::chrono::milliseconds(count());
    } else if (key == "init_all_atoms") {
      cfg.init_all_atoms = flag();
    } else if (key == "full_expansion") {
      cfg.full_expansion = flag();
    } else if (key == "random_rank") {
      cfg.random_rank = flag();
    } else if (key == "merge_into_pruned") {
      cfg.merge_into_pruned = flag();
    } else if (key == "exhaust_depth") {
      cfg.exhaust_depth = flag();
    } else if (key == "max_terms_per_operator") {
      cfg.max_terms_per_operator = count();
    } else {
      throw FormatError("unknown engine setting \"" + key + "\"", loc);
    }
  }
}

BenchmarkTask parse_task(const json& j, const std::string& base_dir, const std::string& location) {
  const std::string loc0 = location.empty() ? "/" : location;
  if (!j.is_object()) throw FormatError("task must be an object", loc0);
  BenchmarkTask t;
  for (const auto& [key, v] : j.items()) {
    const std::string loc = child(location, key);
    if (key == "name") {
      t.name = as_string(v, loc);
    } else if (key == "domain") {
      t.domain = as_string(v, loc);
      if (t.domain != "regex" && t.domain != "css") {
        throw FormatError("domain must be \"regex\" or \"css\"", loc);
      }
    } else if (key == "nl") {
      t.nl = as_string(v, loc);
    } else if (key == "examples") {
      if (!v.is_array()) throw FormatError("expected an array", loc);
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string eloc = child(loc, std::to_string(i));
        const json& e = v[i];
        if (!e.is_object()) throw FormatError("example must be an object", eloc);
        for (const auto& [ek, ev] : e.items()) {
          if (ek != "input" && ek != "output") {
            throw FormatError("unknown field \"" + ek + "\"", child(eloc, ek));
          }
        }
        const json& out = require(e, "output", eloc);
        if (!out.is_boolean()) throw FormatError("expected a boolean", child(eloc, "output"));
        t.examples.push_back({as_string(require(e, "input", eloc), child(eloc, "input")),
                              out.get<bool>()});
      }
    } else if (key == "ground_truth") {
      t.ground_truth = as_string(v, loc);
    } else if (key == "fixture") {
      t.fixture = resolve(base_dir, as_string(v, loc));
    } else if (key == "candidates") {
      if (!v.is_array()) throw FormatError("expected an array", loc);
      std::vector<std::string> cands;
      for (std::size_t i = 0; i < v.size(); ++i) {
        cands.push_back(as_string(v[i], child(loc, std::to_string(i))));
      }
      t.candidates = std::move(cands);
    } else if (key == "document") {
      t.document = resolve(base_dir, as_string(v, loc));
    } else if (key == "engine") {
      SynthesisConfig probe;
      apply_engine_overrides(probe, v, loc);
      t.engine = v;
    } else {
      throw FormatError("unknown field \"" + key + "\"", loc);
    }
  }
  if (t.domain == "css" && !t.document) {
    throw FormatError("css task needs a \"document\"", loc0);
  }
  return t;
}

std::vector<BenchmarkTask> parse_suite(std::string_view text, const std::string& base_dir,
                                       SynthesisConfig* defaults) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(e.what(), "byte " + std::to_string(e.byte));
  }
  if (!j.is_object()) throw FormatError("suite must be an object", "/");
  for (const auto& [key, v] : j.items()) {
    if (key != "tasks" && key != "engine") throw FormatError("unknown field \"" + key + "\"", "/" + key);
  }
  if (auto it = j.find("engine"); it != j.end()) {
    SynthesisConfig probe;
    apply_engine_overrides(defaults ? *defaults : probe, *it, "/engine");
  }
  const json& tasks = require(j, "tasks", "/");
  if (!tasks.is_array()) throw FormatError("expected an array", "/tasks");
  std::vector<BenchmarkTask> out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    BenchmarkTask t = parse_task(tasks[i], base_dir, "/tasks/" + std::to_string(i));
    if (t.name.empty()) t.name = "task" + std::to_string(i);
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot open ") + what + " \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

BenchmarkTask load_task(const std::string& path) {
  const std::string text = read_file(path, "task file");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(e.what(), "byte " + std::to_string(e.byte));
  }
  BenchmarkTask t = parse_task(j, std::filesystem::path(path).parent_path().string());
  if (t.name.empty()) t.name = std::filesystem::path(path).stem().string();
  return t;
}

std::vector<BenchmarkTask> load_suite(const std::string& path, SynthesisConfig* defaults) {
  return parse_suite(read_file(path, "suite file"), std::filesystem::path(path).parent_path().string(), defaults);
}

json to_json(const TaskResult& r, bool timing) {
  json j = {
      {"name", r.name},
      {"domain", r.domain},
      {"status", status_name(r.status)},
      {"reason", r.reason},
      {"iterations", r.iterations},
      {"attempts", r.attempts},
      {"program", r.program ? json(*r.program) : json(nullptr)},
      {"candidates", r.candidates},
      {"discarded", r.discarded},
      {"initial_components", r.initial_components},
      {"cache_sizes", r.cache_sizes},
      {"added_examples", examples_json(r.added_examples)},
      {"final_examples", r.final_examples},
      {"warnings", r.warnings},
  };
  if (timing) {
    j["wall_ms"] = r.wall_ms;
    j["max_attempt_ms"] = r.max_attempt_ms;
  }
  return j;
}

json to_json(const SuiteReport& r, bool timing) {
  json hist = json::object();
  for (const auto& [iters, n] : r.histogram()) hist[std::to_string(iters)] = n;
  json statuses = json::object();
  for (const TaskResult& t : r.tasks) {
    const std::string s = status_name(t.status);
    statuses[s] = statuses.value(s, 0) + 1;
  }
  json tasks = json::array();
  for (const TaskResult& t : r.tasks) tasks.push_back(to_json(t, timing));
  return {
      {"variant", variant_name(r.variant)},
      {"seed", r.seed},
      {"summary",
       {{"tasks", r.tasks.size()},
        {"solved", r.solved()},
        {"accuracy", r.accuracy()},
        {"iteration_histogram", hist},
        {"statuses", statuses}}},
      {"tasks", tasks},
  };
}

std::string summary_table(const SuiteReport& r) {
  std::size_t wname = 4;
  for (const TaskResult& t : r.tasks) wname = std::max(wname, t.name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(wname)) << "task" << "  " << std::setw(8)
     << "status" << "  " << std::setw(5) << "iters" << "  program\n";
  for (const TaskResult& t : r.tasks) {
    os << std::setw(static_cast<int>(wname)) << t.name << "  " << std::setw(8)
       << status_name(t.status) << "  " << std::setw(5) << t.iterations << "  "
       << (t.program ? *t.program : "-");
    if (t.status != Status::kSolved && !t.reason.empty()) os << "  (" << t.reason << ")";
    os << "\n";
  }
  os << "accuracy " << r.solved() << "/" << r.tasks.size() << " = " << std::fixed
     << std::setprecision(3) << r.accuracy() << "\n";
  os << "iterations:";
  for (const auto& [iters, n] : r.histogram()) os << " " << iters << ":" << n;
  os << "\n";
  return os.str();
}

}  // namespace mmsynth::cegis
