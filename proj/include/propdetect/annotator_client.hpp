#pragma once

#include <memory>
#include <string>

#include "propdetect/corpus.hpp"
#include "propdetect/registry.hpp"

namespace propdetect {

/// Remote annotation service contract: three JSON POST endpoints taking
/// {"text": ...} and returning {"genre": ...}, {"topic": ...} and
/// {"spans": [{"technique", "start", "end"}, ...]} respectively.
struct AnnotatorEndpoint {
  std::string base_url;  // e.g. http://127.0.0.1:8810
  std::string genre_path = "/genre";
  std::string topic_path = "/topic";
  std::string persuasion_path = "/persuasion";
  std::string token;  // bearer credential, from the environment
  double timeout_seconds = 10.0;
  int retry_budget = 3;
  double requests_per_second = 4.0;
  double backoff_initial_seconds = 0.25;  // doubles per retry

  void validate() const;
};

/// HTTP client for the annotation service with retry, exponential
/// backoff, and a shared rate limit across threads. Persuasion counts
/// are the number of detected spans per technique.
class AnnotatorClient {
 public:
  AnnotatorClient(AnnotatorEndpoint endpoint,
                  const TechniqueRegistry& registry);
  ~AnnotatorClient();

  AnnotatorClient(const AnnotatorClient&) = delete;
  AnnotatorClient& operator=(const AnnotatorClient&) = delete;

  /// Assembles one annotation from the three classifier calls. Throws
  /// NetworkError once the retry budget is exhausted, ProtocolError on
  /// unparsable responses, and TaxonomyError when the service returns a
  /// label absent from the registry.
  ConceptAnnotation annotate(const Article& article);

  /// Identifies this annotator in cache keys.
  std::string annotator_id() const;

  long retries_performed() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace propdetect
