#pragma once

#include <optional>
#include <string>
#include <vector>

namespace propdetect {

/// Fixed taxonomy used by annotations and feature layouts: 3 genres,
/// 9 topics, 23 fine persuasion techniques grouped into 6 coarse
/// categories. The registry is versioned; artifacts built from it record
/// the version so stale features are detectable.
struct TechniqueRegistry {
  std::string version;
  std::vector<std::string> genre_names;   // size 3
  std::vector<std::string> topic_names;   // size 9 by default, configurable
  std::vector<std::string> fine_names;    // size 23
  std::vector<std::string> coarse_names;  // size 6
  std::vector<int> fine_to_coarse;        // fine index -> coarse index

  int genre_count() const { return static_cast<int>(genre_names.size()); }
  int topic_count() const { return static_cast<int>(topic_names.size()); }
  int fine_count() const { return static_cast<int>(fine_names.size()); }
  int coarse_count() const { return static_cast<int>(coarse_names.size()); }

  std::optional<int> genre_id(const std::string& name) const;
  std::optional<int> topic_id(const std::string& name) const;
  std::optional<int> fine_id(const std::string& name) const;

  // Throws ValidationError if sizes disagree or fine_to_coarse is not a
  // total surjective map onto the coarse ids.
  void validate() const;

  // Built-in SemEval-2023 Task 3 taxonomy.
  static TechniqueRegistry builtin();

  static TechniqueRegistry load(const std::string& path);
  void save(const std::string& path) const;
};

/// Per-article concept annotation: one genre, one topic, and span counts
/// per fine persuasion technique. Coarse counts are always derived from
/// the fine counts through the registry mapping.
struct ConceptAnnotation {
  int genre = 0;
  int topic = 0;
  std::vector<int> persuasion_fine;

  bool operator==(const ConceptAnnotation&) const = default;
};

std::vector<int> coarse_counts(const ConceptAnnotation& annotation,
                               const TechniqueRegistry& registry);

}  // namespace propdetect
