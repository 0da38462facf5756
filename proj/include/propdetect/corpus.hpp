#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "propdetect/registry.hpp"

namespace propdetect {

enum class CorpusSide { kPpn, kMainstream };
enum class Leaning { kLeft, kRight, kUnrated };
enum class Credibility { kHigh, kLow };

std::string to_string(CorpusSide side);
std::string to_string(Leaning leaning);
std::string to_string(Credibility credibility);

CorpusSide corpus_side_from_string(const std::string& name);
Leaning leaning_from_string(const std::string& name);
Credibility credibility_from_string(const std::string& name);

struct SourceMeta {
  std::string source;
  CorpusSide corpus = CorpusSide::kMainstream;
  Leaning leaning = Leaning::kUnrated;
  Credibility credibility = Credibility::kHigh;
};

struct Article {
  std::string id;
  std::string text;
  std::string source;
  int label = 0;  // 0 = mainstream, 1 = propaganda
  std::string language = "en";
  std::optional<ConceptAnnotation> annotation;
};

struct Corpus {
  std::vector<Article> articles;
  std::vector<SourceMeta> sources;

  const SourceMeta& meta_for(const std::string& source) const;
  // (mainstream count, propaganda count)
  std::pair<long, long> class_counts() const;
};

/// Loads and validates a JSONL article file plus its source metadata file.
/// Rejects malformed lines (with line numbers), duplicate article ids,
/// labels outside {0,1}, whitespace-only texts, unknown sources, and
/// empty corpora. PPN sources must be rated low credibility.
Corpus load_corpus(const std::string& articles_path,
                   const std::string& meta_path,
                   const TechniqueRegistry& registry);

void save_corpus(const Corpus& corpus, const std::string& articles_path,
                 const std::string& meta_path,
                 const TechniqueRegistry& registry);

// Single-article JSONL codecs, shared by the loader and the cache.
std::string article_to_json_line(const Article& article,
                                 const TechniqueRegistry& registry);
Article article_from_json_line(const std::string& line,
                               const TechniqueRegistry& registry);

// Re-checks every corpus invariant on an in-memory corpus.
void validate_corpus(const Corpus& corpus);

std::unordered_map<std::string, const Article*> index_by_id(
    const Corpus& corpus);

}  // namespace propdetect
