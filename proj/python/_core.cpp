// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmsynth/candidates.hpp"
#include "mmsynth/cegis.hpp"
#include "mmsynth/css.hpp"
#include "mmsynth/engine.hpp"
#include "mmsynth/error.hpp"
#include "mmsynth/prompt.hpp"
#include "mmsynth/regex.hpp"

namespace py = pybind11;
using namespace mmsynth;

namespace {

std::unique_ptr<cegis::TaskContext> context(const std::string& domain,
                                            const std::optional<std::string>& document) {
  if (domain == "regex") return cegis::regex_context();
  if (domain == "css") {
    if (!document) throw InputError("the css domain needs a document");
    return cegis::css_context(
        std::make_shared<const css::DomDocument>(css::parse_document(*document)));
  }
  throw InputError("unknown domain \"" + domain + "\"");
}

std::optional<std::string> synthesize_program(const std::string& domain,
                                              const std::vector<std::string>& candidates,
                                              const std::vector<std::pair<std::string, bool>>& examples,
                                              const std::optional<std::string>& document,
                                              const std::string& engine, std::uint64_t seed) {
  const auto ctx = context(domain, document);
  CandidateSet cs;
  for (const auto& c : candidates) cs.add(c, ctx->domain());
  std::vector<Example> ex;
  for (const auto& [in, out] : examples) ex.push_back({in, out});
  SynthesisConfig cfg;
  cegis::apply_engine_overrides(cfg, nlohmann::json::parse(engine), "/engine");
  cfg.seed = seed;
  const auto sem = ctx->semantics(ex);
  const SynthesisResult r = synthesize(cs, *sem, ctx->domain(), cfg);
  if (!r.program) return std::nullopt;
  return ctx->domain().print(*r.program);
}

std::string run_suite_json(const std::string& path, const std::string& variant, std::uint64_t seed) {
  SynthesisConfig defaults;
  const auto tasks = cegis::load_suite(path, &defaults);
  cegis::HarnessConfig cfg;
  cfg.engine = defaults;
  cfg.variant = cegis::parse_variant(variant);
  cfg.seed = seed;
  return cegis::to_json(cegis::run_suite(tasks, cfg), false).dump();
}

std::vector<std::pair<std::string, std::string>> select_pairs(const std::string& corpus_path,
                                                              const std::string& question,
                                                              std::size_t k, std::size_t threshold,
                                                              const std::string& metric,
                                                              const std::string& domain) {
  const prompt::QACorpus corpus = prompt::load_corpus(corpus_path);
  prompt::PromptConfig cfg = prompt::PromptConfig::for_domain(domain);
  cfg.k = k;
  cfg.similarity_threshold = threshold;
  if (metric == "tm") {
    cfg.metric = prompt::Metric::kTokenMatch;
  } else if (metric != "tfidf") {
    throw InputError("metric must be tm or tfidf");
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : prompt::select_qa_pairs(corpus, question, cfg)) {
    out.emplace_back(p.question, p.answer);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-modal program synthesis from candidate programs and examples";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def("regex_match", [](const std::string& pattern, const std::string& s) {
    return regex::match_full(regex::parse(pattern), s);
  }, py::arg("pattern"), py::arg("string"), "Whole-string match of `string` against `pattern`.");
  m.def("regex_normalize", [](const std::string& pattern) {
    return regex::print(regex::parse(pattern));
  }, py::arg("pattern"), "Canonical printed form of a regex.");
  m.def("css_normalize", [](const std::string& selector) {
    return css::print(css::parse(selector));
  }, py::arg("selector"), "Canonical printed form of a CSS selector.");
  m.def("css_select", [](const std::string& selector, const std::string& document) {
    const css::DomDocument doc = css::parse_document(document);
    std::vector<std::string> out;
    for (std::size_t id : css::evaluate_selector(css::parse(selector), doc)) {
      out.push_back(doc.node(id).path);
    }
    return out;
  }, py::arg("selector"), py::arg("document"),
        "Paths of the nodes of a JSON document selected by `selector`, in document order.");
  m.def("synthesize", &synthesize_program, py::arg("domain"), py::arg("candidates"),
        py::arg("examples"), py::arg("document") = std::nullopt, py::arg("engine") = "{}",
        py::arg("seed") = 0,
        "Best consistent program, or None. `engine` is a JSON object of engine settings.");
  m.def("run_suite_json", &run_suite_json, py::arg("path"), py::arg("variant") = "default",
        py::arg("seed") = 0, "Runs a benchmark suite and returns its JSON report.");
  m.def("select_qa_pairs", &select_pairs, py::arg("corpus"), py::arg("question"),
        py::arg("k") = 10, py::arg("threshold") = 5, py::arg("metric") = "tfidf",
        py::arg("domain") = "regex", "Few-shot pairs chosen for `question`.");
}
