// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "mmsynth/cegis.hpp"
#include "mmsynth/error.hpp"
#include "mmsynth/regex.hpp"
#include "support/oracles.hpp"

using namespace mmsynth;
using namespace mmsynth::cegis;

namespace {

const std::string kData = MMSYNTH_DATA_DIR;

std::vector<BenchmarkTask> bundled() { return load_suite(kData + "/suite.json"); }

BenchmarkTask find_task(const std::string& name) {
  for (BenchmarkTask& t : bundled()) {
    if (t.name == name) return t;
  }
  FAIL("missing task " << name);
  return {};
}

std::shared_ptr<const css::DomDocument> page() {
  return std::make_shared<css::DomDocument>(css::load_document(kData + "/css/page.json"));
}

}  // namespace

TEST_SUITE("cegis") {

TEST_CASE("bounded equivalence of regexes") {
  const auto ctx = regex_context();
  CHECK(bounded_equivalent(regex::parse("a*"), regex::parse("a*"), *ctx) == Equivalence::kEqual);
  CHECK(bounded_equivalent(regex::parse("a*"), regex::parse("a+"), *ctx) ==
        Equivalence::kDifferent);
  CHECK(bounded_equivalent(regex::parse("(ab)*a"), regex::parse("a(ba)*"), *ctx) ==
        Equivalence::kEqual);
  // Exhaustive oracle up to length 8 over {a, b, c}.
  const Term p = regex::parse("(ab)*a");
  const Term g = regex::parse("a(ba)*");
  for (const std::string& s : oracle::all_strings("abc", 8)) {
    CHECK(regex::match_full(p, s) == regex::match_full(g, s));
  }
}

TEST_CASE("distinguishing examples are genuine witnesses") {
  const auto ctx = regex_context();
  const auto w = distinguishing_examples(regex::parse("a*"), regex::parse("a+"), *ctx);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == Example{"", false});
  CHECK(distinguishing_examples(regex::parse("a|b"), regex::parse("a|b"), *ctx).empty());

  const Term p = regex::parse("[ab]c*");
  const Term g = regex::parse("ac|bd");
  const auto both = distinguishing_examples(p, g, *ctx);
  REQUIRE(both.size() == 2);
  CHECK(both[0] == Example{"a", false});
  CHECK(both[1].output);
  for (const Example& e : both) {
    CHECK(regex::match_full(g, e.input) == e.output);
    CHECK(regex::match_full(p, e.input) != e.output);
  }
}

TEST_CASE("the faulty decimal regex is separated by a 19-digit string") {
  const auto ctx = regex_context();
  const Term faulty = regex::parse("([0-9]{1,18})+(\\.[0-9]{1})?");
  const Term fixed = regex::parse("([0-9]{1,18})(\\.[0-9]{1})?");
  CHECK(bounded_equivalent(faulty, fixed, *ctx) == Equivalence::kEqual);
  EquivalenceConfig wide;
  wide.max_len = 20;
  wide.max_configs = 5'000'000;
  const auto w = distinguishing_examples(faulty, fixed, *ctx, wide);
  REQUIRE(w.size() == 1);
  CHECK_FALSE(w[0].output);
  CHECK(w[0].input.size() == 19);
  CHECK(w[0].input.find_first_not_of("0123456789") == std::string::npos);
  CHECK(regex::match_full(faulty, w[0].input));
}

TEST_CASE("css comparison on the session document") {
  const auto ctx = css_context(page());
  const Term a = css::parse(".a.c, .b.c");
  const Term b = css::parse(".c.b, .a.c");
  const Term c = css::parse(".c");
  CHECK(bounded_equivalent(a, b, *ctx) == Equivalence::kEqual);
  const auto w = distinguishing_examples(c, a, *ctx);
  REQUIRE(w.size() == 1);
  CHECK_FALSE(w[0].output);
  CHECK(ctx->accepts(c, w[0]));
  CHECK_FALSE(ctx->accepts(a, w[0]));
  CHECK_THROWS_AS(ctx->accepts(c, Example{"/9/9/9", true}), InputError);
}

TEST_CASE("bounded equivalence is reflexive and symmetric on random regexes") {
  const auto ctx = regex_context();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    const Term p = oracle::random_regex(rng, 6);
    const Term g = oracle::random_regex(rng, 6);
    CHECK(bounded_equivalent(p, p, *ctx) == Equivalence::kEqual);
    const Equivalence pg = bounded_equivalent(p, g, *ctx);
    CHECK(pg == bounded_equivalent(g, p, *ctx));
    for (const Example& e : distinguishing_examples(p, g, *ctx)) {
      CHECK(regex::match_full(g, e.input) == e.output);
      CHECK(regex::match_full(p, e.input) != e.output);
    }
  }
}

TEST_CASE("variants") {
  CHECK(parse_variant("v1") == Variant::kV1);
  CHECK(parse_variant("default") == Variant::kDefault);
  CHECK_THROWS_AS(parse_variant("v9"), InputError);
  const SynthesisConfig base;
  CHECK(apply_variant(base, Variant::kV1).init_all_atoms);
  CHECK(apply_variant(base, Variant::kV2).full_expansion);
  CHECK(apply_variant(base, Variant::kV3).random_rank);
  const SynthesisConfig v4 = apply_variant(base, Variant::kV4);
  CHECK_FALSE((v4.init_all_atoms || v4.full_expansion || v4.random_rank));
}

TEST_CASE("a task whose ground truth is a candidate is solved at iteration 0") {
  BenchmarkTask t;
  t.name = "direct";
  t.ground_truth = "[0-9]{3}";
  t.candidates = std::vector<std::string>{"[0-9]{3}", "[0-9]+"};
  t.examples = {{"123", true}, {"12", false}, {"1234", false}, {"", false}, {"12a", false}};
  const TaskResult r = run_task(t, HarnessConfig{});
  CHECK(r.status == Status::kSolved);
  CHECK(r.iterations == 0);
  CHECK(r.attempts == 1);
}

TEST_CASE("row III fixture task is solved within three rounds") {
  const TaskResult r = run_task(find_task("regex-row3"), HarnessConfig{});
  CHECK(r.status == Status::kSolved);
  CHECK(r.iterations <= 3);
  CHECK(r.candidates == 7);
  CHECK(r.discarded == 1);
  REQUIRE(r.program);
  CHECK(bounded_equivalent(regex::parse(*r.program), regex::parse("[0-9]+:?[0-9]*"),
                           *regex_context()) == Equivalence::kEqual);
}

TEST_CASE("examples grow monotonically without contradictions") {
  BenchmarkTask t = find_task("regex-row3");
  t.examples.resize(6);
  const TaskResult r = run_task(t, HarnessConfig{});
  CHECK(r.final_examples == 6 + r.added_examples.size());
  const Term gt = regex::parse(*t.ground_truth);
  std::set<std::string> inputs;
  for (const Example& e : t.examples) inputs.insert(e.input);
  for (const Example& e : r.added_examples) {
    CHECK(regex::match_full(gt, e.input) == e.output);
    CHECK(inputs.insert(e.input).second);
  }
  CHECK(r.iterations <= 10);
}

TEST_CASE("task failures are recorded, not thrown") {
  BenchmarkTask empty;
  empty.name = "empty";
  empty.ground_truth = "a";
  empty.fixture = std::filesystem::temp_directory_path() / "mmsynth_empty_fixture.txt";
  std::ofstream(*empty.fixture) << "\n";
  TaskResult r = run_task(empty, HarnessConfig{});
  CHECK(r.status == Status::kUnsolved);
  CHECK(r.reason == "no candidates");

  BenchmarkTask bad_gt;
  bad_gt.ground_truth = "(unclosed";
  bad_gt.candidates = std::vector<std::string>{"a"};
  r = run_task(bad_gt, HarnessConfig{});
  CHECK(r.status == Status::kSkipped);

  BenchmarkTask contradiction;
  contradiction.candidates = std::vector<std::string>{"a", "b"};
  contradiction.examples = {{"a", true}, {"a", false}};
  r = run_task(contradiction, HarnessConfig{});
  CHECK(r.status == Status::kUnsolved);
  CHECK(r.reason == "no consistent program");

  BenchmarkTask wrong;
  wrong.ground_truth = "a";
  wrong.candidates = std::vector<std::string>{"a"};
  wrong.examples = {{"b", true}};
  r = run_task(wrong, HarnessConfig{});
  CHECK(r.status == Status::kError);

  BenchmarkTask live;
  live.examples = {{"a", true}};
  r = run_task(live, HarnessConfig{});
  CHECK(r.status == Status::kError);

  HarnessConfig too_many;
  too_many.max_rounds = 11;
  r = run_task(find_task("regex-row3"), too_many);
  CHECK(r.status == Status::kError);
}

TEST_CASE("suite loading") {
  const auto tasks = bundled();
  REQUIRE(tasks.size() == 7);
  CHECK(tasks[0].fixture->find("/regex/row1.txt") != std::string::npos);
  CHECK(std::filesystem::exists(*tasks[4].document));
  CHECK(tasks[3].engine["pr_red"] == 1.0);

  SynthesisConfig defaults;
  const auto parsed = parse_suite(
      R"({"engine": {"beam_size": "unbounded", "op_th": "inf", "synth_depth": 2},
          "tasks": [{"candidates": ["a"], "examples": [{"input": "a", "output": true}]}]})",
      "/base", &defaults);
  CHECK(defaults.beam_size == kUnboundedBeam);
  CHECK(std::isinf(defaults.op_th));
  CHECK(defaults.synth_depth == 2);
  CHECK(parsed[0].name == "task0");
  CHECK(parsed[0].domain == "regex");

  auto location = [](const char* text) {
    try {
      parse_suite(text, "");
    } catch (const FormatError& e) {
      return e.location();
    }
    return std::string("none");
  };
  CHECK(location(R"({"tasks": [{"bogus": 1}]})") == "/tasks/0/bogus");
  CHECK(location(R"({"tasks": [{"examples": [{"input": "a"}]}]})") == "/tasks/0/examples/0");
  CHECK(location(R"({"tasks": [{"engine": {"beam": 3}}]})") == "/tasks/0/engine/beam");
  CHECK(location(R"({"tasks": [{"domain": "css"}]})") == "/tasks/0");
  CHECK(location(R"({"tasks": 3})") == "/tasks");
  CHECK(location(R"({"tasks": [)").rfind("byte", 0) == 0);
  CHECK_THROWS_AS(load_suite("/nonexistent/suite.json"), InputError);
}

TEST_CASE("empty suite is rejected") {
  CHECK_THROWS_WITH_AS(run_suite({}, HarnessConfig{}), "no tasks", InputError);
}

TEST_CASE("suite of one solved task has accuracy 1") {
  BenchmarkTask t;
  t.name = "one";
  t.ground_truth = "a+";
  t.candidates = std::vector<std::string>{"a+"};
  t.examples = {{"a", true}, {"aa", true}, {"", false}};
  const std::vector<BenchmarkTask> tasks = {t};
  const SuiteReport r = run_suite(tasks, HarnessConfig{});
  CHECK(r.accuracy() == 1.0);
  CHECK(r.histogram() == std::map<std::size_t, std::size_t>{{0, 1}});
  const auto j = to_json(r, false);
  CHECK(j["summary"]["accuracy"] == 1.0);
  CHECK_FALSE(j["tasks"][0].contains("wall_ms"));
  CHECK(to_json(r, true)["tasks"][0].contains("wall_ms"));
  CHECK(summary_table(r).find("accuracy 1/1") != std::string::npos);
}

TEST_CASE("random ranking does not beat the default on the quick fixture tasks") {
  std::vector<BenchmarkTask> tasks;
  for (const BenchmarkTask& t : bundled()) {
    if (t.name != "regex-row1" && t.name != "css-checkboxes" && t.name != "css-classes") {
      tasks.push_back(t);
    }
  }
  const HarnessConfig base;
  const double default_acc = run_suite(tasks, base).accuracy();
  double v3_total = 0;
  const int runs = 20;
  for (int seed = 0; seed < runs; ++seed) {
    HarnessConfig cfg = base;
    cfg.variant = Variant::kV3;
    cfg.seed = static_cast<std::uint64_t>(seed);
    v3_total += run_suite(tasks, cfg).accuracy();
  }
  CHECK(v3_total / runs <= default_acc);
}

}  // TEST_SUITE
