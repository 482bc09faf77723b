// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmsynth/candidates.hpp"
#include "mmsynth/css.hpp"
#include "mmsynth/error.hpp"
#include "mmsynth/regex.hpp"

using namespace mmsynth;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("mmsynth_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

struct FakeClient final : CompletionClient {
  std::vector<std::string> replies;
  std::string last_prompt;
  std::vector<std::string> complete(const std::string& prompt, const CompletionConfig&) override {
    last_prompt = prompt;
    return replies;
  }
};

// Local completion endpoint serving canned replies.
class TestServer {
 public:
  explicit TestServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/v1/completions", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/completions"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string choices(const std::vector<std::string>& texts) {
  nlohmann::json j;
  j["choices"] = nlohmann::json::array();
  for (const auto& t : texts) j["choices"].push_back({{"text", t}});
  return j.dump();
}

}  // namespace

TEST_SUITE("candidates") {

TEST_CASE("extraction of the published completion") {
  CompletionConfig cfg;
  const std::string completion =
      "Regex: [AEIOU]{3}[0-9]{4}.*\n\nNL: lines starting with a digit followed by three\n"
      "upper case letters followed by two digits\nRegex: [0-9][A-Z][A-Z][A-Z][0-9]{2}";
  CHECK(extract_program(completion, cfg) == "[AEIOU]{3}[0-9]{4}.*");
  CHECK(extract_program("Regex: a", cfg) == "a");
  CHECK(extract_program("  Regex:   a|b  \nmore", cfg) == "a|b");
  CHECK_THROWS_AS(extract_program("no marker here", cfg), ExtractionError);
  CHECK_THROWS_AS(extract_program("Regex:   \nNL: x", cfg), ExtractionError);
  const std::string once = extract_program(completion, cfg);
  CHECK(extract_program(cfg.answer_marker + " " + once, cfg) == once);
}

TEST_CASE("fixture of the digit-colon task") {
  const CandidateSet cs =
      load_fixture(std::string(MMSYNTH_DATA_DIR) + "/regex/row3.txt", regex::RegexDomain());
  CHECK(cs.raw().size() == 8);
  CHECK(cs.size() == 7);
  REQUIRE(cs.discarded().size() == 1);
  CHECK(cs.discarded()[0].source == "([0-9]{1,}(?:.[0-9]{0,}))*");
}

TEST_CASE("fixture of the vowel task includes the vowel class") {
  const CandidateSet cs =
      load_fixture(std::string(MMSYNTH_DATA_DIR) + "/regex/row2.txt", regex::RegexDomain());
  CHECK(cs.size() == 8);
  const Term vowels = regex::parse("[aAeEiIoOuU]");
  bool found = false;
  for (const Term& p : cs.programs()) found = found || contains(p, vowels);
  CHECK(found);
}

TEST_CASE("fixture deduplication and discards") {
  std::string text;
  const char* good[] = {"a", "b", "a|b", "ab", "a*", "b+", "[0-9]", "[a-z]+", "x?", ".*",
                        "(ab)*", "a{2}", "a{2,}", "[^a]", "\\d+", "c", "d"};
  for (const char* g : good) text += std::string(g) + "\n";
  text += "(unclosed\n[z-a]\n*lead\n\n";
  const std::string path = write_temp("twenty.txt", text);
  const CandidateSet cs = load_fixture(path, regex::RegexDomain());
  CHECK(cs.raw().size() == 20);
  CHECK(cs.size() == 17);
  CHECK(cs.discarded().size() == 3);

  const std::string dup = write_temp("dup.txt", "a|b\na|b\n (a|b) \n");
  const CandidateSet d = load_fixture(dup, regex::RegexDomain());
  CHECK(d.raw().size() == 3);
  CHECK(d.size() == 1);
  CHECK(d.sources().front() == "a|b");
}

TEST_CASE("empty or missing fixtures are input errors") {
  CHECK_THROWS_AS(load_fixture(write_temp("empty.txt", "\n  \n"), regex::RegexDomain()),
                  InputError);
  CHECK_THROWS_AS(load_fixture("/nonexistent/fixture.txt", regex::RegexDomain()), InputError);
}

TEST_CASE("css fixture keeps parseable selectors") {
  const CandidateSet cs =
      load_fixture(std::string(MMSYNTH_DATA_DIR) + "/css/row3.txt", css::CssDomain());
  CHECK(cs.size() == 3);
  CHECK(cs.discarded().size() == 3);
}

TEST_CASE("get_candidates parses completions and records prose as discarded") {
  FakeClient client;
  client.replies = {" [0-9]+\n\nNL: next", " see (the docs", " [0-9]+", " (a|b)*c", "\n\n"};
  CompletionConfig cfg;
  const CandidateSet cs = get_candidates("prompt", cfg, regex::RegexDomain(), client);
  CHECK(cs.size() == 2);
  CHECK(cs.raw().size() == 5);
  CHECK(cs.discarded().size() == 2);
  CHECK(client.last_prompt == "prompt");
  cfg.n_completions = 2;
  CHECK(get_candidates("prompt", cfg, regex::RegexDomain(), client).raw().size() == 2);
  cfg.n_completions = 0;
  CHECK_THROWS_WITH_AS(get_candidates("prompt", cfg, regex::RegexDomain(), client),
                       "no candidates requested", InputError);
  cfg.n_completions = 20;
  CHECK_THROWS_AS(get_candidates("", cfg, regex::RegexDomain(), client), InputError);
}

TEST_CASE("http client sends the request and reads choices") {
  nlohmann::json seen;
  std::string auth;
  TestServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(choices({" a+", " b*"}), "application/json");
  });
  ::setenv("MMSYNTH_TEST_KEY", "secret", 1);
  CompletionConfig cfg;
  cfg.endpoint = server.url();
  cfg.api_key_env = "MMSYNTH_TEST_KEY";
  cfg.model = "m";
  cfg.n_completions = 2;
  HttpCompletionClient client;
  const CandidateSet cs = get_candidates("NL: q\nRegex:", cfg, regex::RegexDomain(), client);
  CHECK(cs.size() == 2);
  CHECK(seen["prompt"] == "NL: q\nRegex:");
  CHECK(seen["n"] == 2);
  CHECK(seen["temperature"].get<double>() == doctest::Approx(0.6));
  CHECK(seen["max_tokens"] == 64);
  CHECK(seen["stop"] == "NL:");
  CHECK(seen["model"] == "m");
  CHECK(auth == "Bearer secret");
}

TEST_CASE("http client retries once on server errors") {
  std::atomic<int> calls{0};
  TestServer server([&](const httplib::Request&, httplib::Response& res) {
    if (calls++ == 0) {
      res.status = 503;
      return;
    }
    res.set_content(choices({" a"}), "application/json");
  });
  CompletionConfig cfg;
  cfg.endpoint = server.url();
  HttpCompletionClient client;
  CHECK(client.complete("p", cfg) == std::vector<std::string>{" a"});
  CHECK(calls == 2);
}

TEST_CASE("http client reports persistent and client errors") {
  std::atomic<int> calls{0};
  TestServer server([&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    res.status = nlohmann::json::parse(req.body)["prompt"] == "bad" ? 400 : 500;
  });
  CompletionConfig cfg;
  cfg.endpoint = server.url();
  HttpCompletionClient client;
  CHECK_THROWS_AS(client.complete("bad", cfg), TransportError);
  CHECK(calls == 1);
  CHECK_THROWS_AS(client.complete("p", cfg), TransportError);
  CHECK(calls == 3);
  cfg.endpoint = "not a url";
  CHECK_THROWS_AS(client.complete("p", cfg), TransportError);
}

}  // TEST_SUITE
