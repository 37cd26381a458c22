#include <algorithm>
#include <future>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "gapbench/error.hpp"
#include "gapbench/scoring.hpp"

namespace gapbench {

using json = nlohmann::json;

HttpProvider::HttpProvider(std::string endpoint, HttpOptions options)
    : options_(std::move(options)) {
  if (endpoint.empty()) throw Error(ErrorKind::InvalidInput, "empty scoring endpoint");
  if (options_.batch_size == 0 || options_.attempts < 1 || options_.max_in_flight == 0) {
    throw Error(ErrorKind::InvalidInput, "invalid HTTP provider options");
  }
  // Split "http://host:port/prefix" into the base URL and the request path.
  const auto scheme = endpoint.find("://");
  const auto path_pos = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  base_url_ = endpoint.substr(0, path_pos);
  std::string prefix = path_pos == std::string::npos ? "" : endpoint.substr(path_pos);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  if (prefix.size() >= 6 && prefix.compare(prefix.size() - 6, 6, "/score") == 0) {
    prefix.resize(prefix.size() - 6);
  }
  path_ = prefix + "/score";
}

ProviderInfo HttpProvider::info() const {
  return {"http", options_.model + "@" + base_url_ + path_, true};
}

std::vector<ScoredSentence> HttpProvider::score_batch(
    std::span<const std::string> texts) const {
  const std::string body = json{{"texts", std::vector<std::string>(texts.begin(), texts.end())}}.dump();

  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(base_url_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    const auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      json payload;
      try {
        payload = json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Format, "unparseable /score response: " + std::string(e.what()));
      }
      if (!payload.is_object() || !payload.contains("sentences") ||
          !payload["sentences"].is_array()) {
        throw Error(ErrorKind::Format, "/score response lacks a 'sentences' array");
      }
      std::vector<ScoredSentence> out;
      std::size_t index = 0;
      for (const auto& s : payload["sentences"]) {
        try {
          out.push_back(parse_wire_sentence(s.dump()));
        } catch (const Error& e) {
          throw Error(ErrorKind::Format,
                      "response sentence " + std::to_string(index) + ": " + e.what());
        }
        ++index;
      }
      if (out.size() != texts.size()) {
        throw Error(ErrorKind::Format, "/score returned " + std::to_string(out.size()) +
                                           " sentences for " + std::to_string(texts.size()) +
                                           " texts");
      }
      return out;
    }

    std::string message = res->body;
    try {
      const auto err = json::parse(res->body);
      if (err.is_object() && err.contains("error") && err["error"].is_string()) {
        message = err["error"].get<std::string>();
      }
    } catch (const json::parse_error&) {
    }
    last_error = "HTTP " + std::to_string(res->status) + ": " + message;
    const bool retryable = res->status >= 500 || res->status == 429;
    if (!retryable) throw Error(ErrorKind::Provider, last_error, false);
  }
  throw Error(ErrorKind::Provider,
              "gave up after " + std::to_string(options_.attempts) + " attempts: " + last_error,
              true);
}

std::vector<ScoredSentence> HttpProvider::score(std::span<const std::string> texts) const {
  std::vector<std::span<const std::string>> batches;
  for (std::size_t i = 0; i < texts.size(); i += options_.batch_size) {
    batches.push_back(texts.subspan(i, std::min(options_.batch_size, texts.size() - i)));
  }

  std::vector<std::vector<ScoredSentence>> results(batches.size());
  for (std::size_t wave = 0; wave < batches.size(); wave += options_.max_in_flight) {
    const std::size_t end = std::min(batches.size(), wave + options_.max_in_flight);
    std::vector<std::future<std::vector<ScoredSentence>>> inflight;
    for (std::size_t b = wave; b < end; ++b) {
      inflight.push_back(std::async(std::launch::async,
                                    [this, batch = batches[b]] { return score_batch(batch); }));
    }
    // get() on every future before rethrowing so no request outlives us.
    std::exception_ptr first_error;
    for (std::size_t k = 0; k < inflight.size(); ++k) {
      try {
        results[wave + k] = inflight[k].get();
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  }

  std::vector<ScoredSentence> out;
  out.reserve(texts.size());
  for (auto& r : results) {
    for (auto& s : r) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gapbench
