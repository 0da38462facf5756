#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "propdetect/corpus.hpp"
#include "propdetect/registry.hpp"

namespace propdetect {

/// Keyword lists per genre/topic label and cue phrases per fine
/// persuasion technique, for network-free annotation.
struct LexiconSet {
  std::map<std::string, std::vector<std::string>> genre;
  std::map<std::string, std::vector<std::string>> topic;
  std::map<std::string, std::vector<std::string>> persuasion;

  bool empty() const {
    return genre.empty() && topic.empty() && persuasion.empty();
  }
};

LexiconSet load_lexicons(const std::string& path);

/// Deterministic keyword annotator. Genre/topic are the argmax of
/// hit counts normalized by lexicon size (ties break toward the lowest
/// registry id; no hits fall back to genre Reporting / topic 0).
/// Persuasion counts are case-insensitive, word-boundary anchored,
/// longest-match-first, non-overlapping cue matches.
ConceptAnnotation annotate_offline(const Article& article,
                                   const LexiconSet& lexicons,
                                   const TechniqueRegistry& registry);

/// JSONL-backed cache keyed by (article id, annotator id, registry
/// version), so annotation runs are resumable and repeat runs are no-ops.
class AnnotationCache {
 public:
  AnnotationCache() = default;
  static AnnotationCache open(const std::string& path,
                              const TechniqueRegistry& registry);

  std::optional<ConceptAnnotation> lookup(const std::string& article_id,
                                          const std::string& annotator_id,
                                          const std::string& registry_version)
      const;
  void put(const std::string& article_id, const std::string& annotator_id,
           const std::string& registry_version,
           const ConceptAnnotation& annotation);
  void flush() const;

  std::size_t size() const { return entries_.size(); }
  std::size_t appended_since_open() const { return appended_; }
  std::string registry_version() const;

 private:
  std::string path_;
  const TechniqueRegistry* registry_ = nullptr;
  std::map<std::string, ConceptAnnotation> entries_;
  std::size_t appended_ = 0;
};

/// Fills missing annotations via `annotate`, consulting and updating the
/// cache. Returns the number of articles actually annotated (cache
/// misses). Runs up to `workers` annotations concurrently; results merge
/// by article id.
std::size_t annotate_corpus(
    Corpus& corpus, const std::string& annotator_id,
    const std::function<ConceptAnnotation(const Article&)>& annotate,
    AnnotationCache* cache, int workers = 1);

/// Per-corpus-side distribution statistics: genre and topic proportions
/// (each summing to 1 per side) and the mean fine-technique count per
/// article.
struct SideDistribution {
  long articles = 0;
  std::vector<double> genre_proportions;
  std::vector<double> topic_proportions;
  std::vector<double> mean_persuasion_fine;
};

struct DistributionReport {
  SideDistribution mainstream;
  SideDistribution propaganda;
};

DistributionReport corpus_statistics(const Corpus& corpus,
                                     const TechniqueRegistry& registry);

void write_distribution_csv(const DistributionReport& report,
                            const TechniqueRegistry& registry,
                            const std::string& path);

}  // namespace propdetect
