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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "mmsynth/candidates.hpp"
#include "mmsynth/error.hpp"

namespace mmsynth {

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw TransportError("endpoint is not a URL: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

bool retryable(const httplib::Result& r) {
  return !r || r->status == 429 || r->status >= 500;
}

}  // namespace

std::vector<std::string> HttpCompletionClient::complete(const std::string& prompt,
                                                        const CompletionConfig& cfg) {
  if (cfg.endpoint.empty()) throw TransportError("no completion endpoint configured");
  const Url url = split_url(cfg.endpoint);
  httplib::Client client(url.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!cfg.api_key_env.empty()) {
    if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  nlohmann::json body = {{"prompt", prompt},
                         {"temperature", cfg.temperature},
                         {"n", cfg.n_completions},
                         {"max_tokens", cfg.max_tokens},
                         {"stop", cfg.stop_sequence}};
  if (!cfg.model.empty()) body["model"] = cfg.model;
  const std::string payload = body.dump();

  httplib::Result res = client.Post(url.path, headers, payload, "application/json");
  if (retryable(res)) {
    std::mt19937 rng(std::random_device{}());
    std::this_thread::sleep_for(
        std::chrono::milliseconds(std::uniform_int_distribution<int>(200, 600)(rng)));
    res = client.Post(url.path, headers, payload, "application/json");
  }
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("completion endpoint returned HTTP " + std::to_string(res->status));
  }
  std::vector<std::string> out;
  try {
    const auto j = nlohmann::json::parse(res->body);
    for (const auto& choice : j.at("choices")) out.push_back(choice.at("text").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") + e.what());
  }
  return out;
}

}  // namespace mmsynth
