#include "propdetect/annotate.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "propdetect/annotation_json.hpp"
#include "propdetect/error.hpp"
#include "propdetect/io_util.hpp"

namespace propdetect {

using nlohmann::json;

namespace {

std::string lowercase_ascii(const std::string& text) {
  std::string out = text;
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool boundary_at(const std::string& text, std::size_t pos) {
  if (pos == 0 || pos >= text.size()) return true;
  return std::isalnum(static_cast<unsigned char>(text[pos])) == 0;
}

// Non-overlapping occurrences of one cue, word-boundary anchored.
long count_cue(const std::string& lowered, const std::string& cue) {
  if (cue.empty()) return 0;
  long hits = 0;
  std::size_t pos = 0;
  while ((pos = lowered.find(cue, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || boundary_at(lowered, pos - 1);
    const bool right_ok = boundary_at(lowered, pos + cue.size());
    if (left_ok && right_ok) {
      ++hits;
      pos += cue.size();
    } else {
      ++pos;
    }
  }
  return hits;
}

struct CueMatch {
  std::size_t start;
  std::size_t length;
  int technique;
};

// Argmax of hit counts normalized by lexicon size, in registry order so
// ties resolve to the lowest id. All-zero scores fall back to id 0.
int classify(const std::string& lowered,
             const std::map<std::string, std::vector<std::string>>& lexicon,
             const std::vector<std::string>& names,
             const std::string& family) {
  int best = 0;
  double best_score = 0.0;
  for (std::size_t id = 0; id < names.size(); ++id) {
    const auto it = lexicon.find(names[id]);
    if (it == lexicon.end() || it->second.empty()) continue;
    long hits = 0;
    for (const auto& cue : it->second) {
      hits += count_cue(lowered, lowercase_ascii(cue));
    }
    const double score =
        static_cast<double>(hits) / static_cast<double>(it->second.size());
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(id);
    }
  }
  for (const auto& [label, cues] : lexicon) {
    if (std::find(names.begin(), names.end(), label) == names.end()) {
      throw TaxonomyError("lexicon " + family + " label '" + label +
                          "' not in registry");
    }
  }
  return best;
}

}  // namespace

LexiconSet load_lexicons(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  LexiconSet lexicons;
  const auto read_family = [&](const char* key,
                               std::map<std::string, std::vector<std::string>>&
                                   out) {
    if (!doc.contains(key)) return;
    for (const auto& [label, cues] : doc.at(key).items()) {
      out[label] = cues.get<std::vector<std::string>>();
    }
  };
  try {
    read_family("genre", lexicons.genre);
    read_family("topic", lexicons.topic);
    read_family("persuasion", lexicons.persuasion);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return lexicons;
}

ConceptAnnotation annotate_offline(const Article& article,
                                   const LexiconSet& lexicons,
                                   const TechniqueRegistry& registry) {
  if (lexicons.empty()) {
    throw ValidationError("annotate_offline: empty lexicon set");
  }
  const std::string lowered = lowercase_ascii(article.text);

  ConceptAnnotation annotation;
  annotation.genre =
      classify(lowered, lexicons.genre, registry.genre_names, "genre");
  annotation.topic =
      classify(lowered, lexicons.topic, registry.topic_names, "topic");
  annotation.persuasion_fine.assign(registry.fine_count(), 0);

  // Longest cue wins at each position, scanning left to right without
  // overlaps.
  std::vector<CueMatch> candidates;
  for (const auto& [label, cues] : lexicons.persuasion) {
    const auto technique = registry.fine_id(label);
    if (!technique) {
      throw TaxonomyError("lexicon persuasion label '" + label +
                          "' not in registry");
    }
    for (const auto& raw_cue : cues) {
      const std::string cue = lowercase_ascii(raw_cue);
      if (cue.empty()) continue;
      std::size_t pos = 0;
      while ((pos = lowered.find(cue, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || boundary_at(lowered, pos - 1);
        const bool right_ok = boundary_at(lowered, pos + cue.size());
        if (left_ok && right_ok) {
          candidates.push_back({pos, cue.size(), *technique});
        }
        ++pos;
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const CueMatch& a, const CueMatch& b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.length != b.length) return a.length > b.length;
              return a.technique < b.technique;
            });
  std::size_t cursor = 0;
  bool any_accepted = false;
  for (const auto& match : candidates) {
    if (any_accepted && match.start < cursor) continue;
    annotation.persuasion_fine[match.technique] += 1;
    cursor = match.start + match.length;
    any_accepted = true;
  }
  return annotation;
}

AnnotationCache AnnotationCache::open(const std::string& path,
                                      const TechniqueRegistry& registry) {
  AnnotationCache cache;
  cache.path_ = path;
  cache.registry_ = &registry;
  if (!file_exists(path)) return cache;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    try {
      const json j = json::parse(lines[i]);
      const std::string key = j.at("id").get<std::string>() + "\x1f" +
                              j.at("annotator").get<std::string>() + "\x1f" +
                              j.at("registry_version").get<std::string>();
      cache.entries_[key] =
          annotation_from_json(j.at("annotation"), registry, where);
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return cache;
}

std::optional<ConceptAnnotation> AnnotationCache::lookup(
    const std::string& article_id, const std::string& annotator_id,
    const std::string& registry_version) const {
  const auto it = entries_.find(article_id + "\x1f" + annotator_id + "\x1f" +
                                registry_version);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void AnnotationCache::put(const std::string& article_id,
                          const std::string& annotator_id,
                          const std::string& registry_version,
                          const ConceptAnnotation& annotation) {
  const std::string key =
      article_id + "\x1f" + annotator_id + "\x1f" + registry_version;
  if (entries_.count(key)) return;
  entries_[key] = annotation;
  ++appended_;
  if (path_.empty()) return;
  json j;
  j["id"] = article_id;
  j["annotator"] = annotator_id;
  j["registry_version"] = registry_version;
  j["annotation"] = annotation_to_json(annotation, *registry_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to cache " + path_);
  out << j.dump() << "\n";
}

std::string AnnotationCache::registry_version() const {
  return registry_ != nullptr ? registry_->version : std::string();
}

void AnnotationCache::flush() const {
  if (path_.empty()) return;
  std::ostringstream out;
  for (const auto& [key, annotation] : entries_) {
    const auto first = key.find('\x1f');
    const auto second = key.find('\x1f', first + 1);
    json j;
    j["id"] = key.substr(0, first);
    j["annotator"] = key.substr(first + 1, second - first - 1);
    j["registry_version"] = key.substr(second + 1);
    j["annotation"] = annotation_to_json(annotation, *registry_);
    out << j.dump() << "\n";
  }
  write_file_atomic(path_, out.str());
}

std::size_t annotate_corpus(
    Corpus& corpus, const std::string& annotator_id,
    const std::function<ConceptAnnotation(const Article&)>& annotate,
    AnnotationCache* cache, int workers) {
  const std::string registry_version =
      cache != nullptr ? cache->registry_version() : std::string();

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < corpus.articles.size(); ++i) {
    Article& article = corpus.articles[i];
    if (article.annotation) continue;
    if (cache != nullptr) {
      if (auto hit =
              cache->lookup(article.id, annotator_id, registry_version)) {
        article.annotation = std::move(*hit);
        continue;
      }
    }
    pending.push_back(i);
  }
  if (pending.empty()) return 0;

  std::vector<std::optional<ConceptAnnotation>> results(pending.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const int thread_count =
      std::max(1, std::min<int>(workers, static_cast<int>(pending.size())));
  const auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      try {
        results[k] = annotate(corpus.articles[pending[k]]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::size_t annotated = 0;
  for (std::size_t k = 0; k < pending.size(); ++k) {
    if (!results[k]) continue;  // worker pool stopped early on error
    Article& article = corpus.articles[pending[k]];
    article.annotation = std::move(*results[k]);
    if (cache != nullptr) {
      cache->put(article.id, annotator_id, registry_version,
                 *article.annotation);
    }
    ++annotated;
  }
  return annotated;
}

DistributionReport corpus_statistics(const Corpus& corpus,
                                     const TechniqueRegistry& registry) {
  DistributionReport report;
  for (auto* side : {&report.mainstream, &report.propaganda}) {
    side->genre_proportions.assign(registry.genre_count(), 0.0);
    side->topic_proportions.assign(registry.topic_count(), 0.0);
    side->mean_persuasion_fine.assign(registry.fine_count(), 0.0);
  }
  for (const auto& article : corpus.articles) {
    if (!article.annotation) {
      throw ValidationError("corpus_statistics: article '" + article.id +
                            "' is not annotated");
    }
    SideDistribution& side =
        article.label == 1 ? report.propaganda : report.mainstream;
    side.articles += 1;
    side.genre_proportions[article.annotation->genre] += 1.0;
    side.topic_proportions[article.annotation->topic] += 1.0;
    for (int i = 0; i < registry.fine_count(); ++i) {
      side.mean_persuasion_fine[i] +=
          static_cast<double>(article.annotation->persuasion_fine[i]);
    }
  }
  for (auto* side : {&report.mainstream, &report.propaganda}) {
    if (side->articles == 0) continue;
    const double n = static_cast<double>(side->articles);
    for (auto& p : side->genre_proportions) p /= n;
    for (auto& p : side->topic_proportions) p /= n;
    for (auto& m : side->mean_persuasion_fine) m /= n;
  }
  return report;
}

void write_distribution_csv(const DistributionReport& report,
                            const TechniqueRegistry& registry,
                            const std::string& path) {
  std::ostringstream out;
  out << "side,kind,name,value\n";
  const auto emit = [&](const char* side_name, const SideDistribution& side) {
    for (int i = 0; i < registry.genre_count(); ++i) {
      out << side_name << ",genre," << registry.genre_names[i] << ','
          << format_double(side.genre_proportions[i], 6) << "\n";
    }
    for (int i = 0; i < registry.topic_count(); ++i) {
      out << side_name << ",topic," << registry.topic_names[i] << ','
          << format_double(side.topic_proportions[i], 6) << "\n";
    }
    for (int i = 0; i < registry.fine_count(); ++i) {
      out << side_name << ",persuasion_mean," << registry.fine_names[i] << ','
          << format_double(side.mean_persuasion_fine[i], 6) << "\n";
    }
  };
  emit("MAINSTREAM", report.mainstream);
  emit("PPN", report.propaganda);
  write_file_atomic(path, out.str());
}

}  // namespace propdetect
