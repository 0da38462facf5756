#include "propdetect/annotator_client.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <httplib.h>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "propdetect/error.hpp"

namespace propdetect {

using nlohmann::json;

void AnnotatorEndpoint::validate() const {
  if (base_url.empty()) throw ConfigError("annotator endpoint: empty base_url");
  if (timeout_seconds <= 0.0) {
    throw ConfigError("annotator endpoint: timeout must be positive");
  }
  if (retry_budget < 0) {
    throw ConfigError("annotator endpoint: negative retry budget");
  }
  if (requests_per_second <= 0.0) {
    throw ConfigError("annotator endpoint: rate limit must be positive");
  }
}

struct AnnotatorClient::Impl {
  AnnotatorEndpoint endpoint;
  const TechniqueRegistry* registry;
  std::atomic<long> retries{0};

  std::mutex rate_mutex;
  std::chrono::steady_clock::time_point next_allowed =
      std::chrono::steady_clock::now();

  // Blocks until the shared rate limit admits one more request.
  void acquire_slot() {
    const auto interval = std::chrono::duration_cast<
        std::chrono::steady_clock::duration>(std::chrono::duration<double>(
        1.0 / endpoint.requests_per_second));
    std::chrono::steady_clock::time_point wake;
    {
      std::lock_guard<std::mutex> lock(rate_mutex);
      const auto now = std::chrono::steady_clock::now();
      wake = std::max(now, next_allowed);
      next_allowed = wake + interval;
    }
    std::this_thread::sleep_until(wake);
  }

  json post(const std::string& path, const std::string& body) {
    const int attempts = endpoint.retry_budget + 1;
    double backoff = endpoint.backoff_initial_seconds;
    std::string last_failure;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      if (attempt > 0) {
        retries.fetch_add(1);
        std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
        backoff *= 2.0;
      }
      acquire_slot();

      httplib::Client client(endpoint.base_url);
      client.set_connection_timeout(std::chrono::duration<double>(
          endpoint.timeout_seconds));
      client.set_read_timeout(
          std::chrono::duration<double>(endpoint.timeout_seconds));
      httplib::Headers headers;
      if (!endpoint.token.empty()) {
        headers.emplace("Authorization", "Bearer " + endpoint.token);
      }
      auto res = client.Post(path, headers, body, "application/json");
      if (!res) {
        last_failure = path + ": " + httplib::to_string(res.error());
        continue;  // transport failure, retryable
      }
      if (res->status == 429 || res->status >= 500) {
        last_failure =
            path + ": HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw ProtocolError(path + ": HTTP " + std::to_string(res->status));
      }
      try {
        return json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw ProtocolError(path + ": unparsable response: " + e.what());
      }
    }
    throw NetworkError("annotator request failed after " +
                       std::to_string(endpoint.retry_budget) + " retries (" +
                       last_failure + ")");
  }
};

AnnotatorClient::AnnotatorClient(AnnotatorEndpoint endpoint,
                                 const TechniqueRegistry& registry)
    : impl_(std::make_unique<Impl>()) {
  endpoint.validate();
  impl_->endpoint = std::move(endpoint);
  impl_->registry = &registry;
}

AnnotatorClient::~AnnotatorClient() = default;

std::string AnnotatorClient::annotator_id() const {
  return "remote:" + impl_->endpoint.base_url;
}

long AnnotatorClient::retries_performed() const {
  return impl_->retries.load();
}

ConceptAnnotation AnnotatorClient::annotate(const Article& article) {
  const TechniqueRegistry& registry = *impl_->registry;
  const std::string body = json{{"text", article.text}}.dump();

  ConceptAnnotation annotation;
  annotation.persuasion_fine.assign(registry.fine_count(), 0);

  const json genre_doc = impl_->post(impl_->endpoint.genre_path, body);
  try {
    const std::string genre = genre_doc.at("genre").get<std::string>();
    const auto id = registry.genre_id(genre);
    if (!id) {
      throw TaxonomyError("annotator returned unknown genre '" + genre + "'");
    }
    annotation.genre = *id;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("genre response: ") + e.what());
  }

  const json topic_doc = impl_->post(impl_->endpoint.topic_path, body);
  try {
    const std::string topic = topic_doc.at("topic").get<std::string>();
    const auto id = registry.topic_id(topic);
    if (!id) {
      throw TaxonomyError("annotator returned unknown topic '" + topic + "'");
    }
    annotation.topic = *id;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("topic response: ") + e.what());
  }

  const json spans_doc = impl_->post(impl_->endpoint.persuasion_path, body);
  try {
    for (const auto& span : spans_doc.at("spans")) {
      const std::string technique = span.at("technique").get<std::string>();
      const auto id = registry.fine_id(technique);
      if (!id) {
        throw TaxonomyError("annotator returned unknown technique '" +
                            technique + "'");
      }
      annotation.persuasion_fine[*id] += 1;
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("persuasion response: ") + e.what());
  }
  return annotation;
}

}  // namespace propdetect
