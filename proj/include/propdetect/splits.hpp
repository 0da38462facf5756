#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "propdetect/corpus.hpp"

namespace propdetect {

enum class SplitKind { kRandom, kSources, kPolitical, kCredibility };
enum class SetId { kTrain, kValid, kTest };

// Per-source placement for the sources split. Articles of a shared
// source are individually divided between valid and test.
enum class SourceSet { kTrain, kValid, kTest, kValidTestShared };

SplitKind split_kind_from_string(const std::string& name);
std::string to_string(SplitKind kind);
std::string to_string(SetId set);
SetId set_id_from_string(const std::string& name);

struct SplitSpec {
  SplitKind kind = SplitKind::kRandom;
  std::array<double, 3> ratios = {0.8, 0.1, 0.1};
  std::map<std::string, SourceSet> source_assignments;  // sources split only
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitAssignment {
  std::unordered_map<std::string, SetId> sets;
  SplitSpec provenance;
  std::vector<std::string> excluded_ids;  // e.g. unrated-leaning articles
  std::vector<std::string> warnings;

  std::array<long, 3> set_sizes() const;
  std::vector<std::string> ids_in(SetId set) const;  // corpus order not kept
};

/// Table-1-style default placement of the built-in source names for the
/// sources split.
std::map<std::string, SourceSet> default_source_assignments();

SplitAssignment split_corpus(const Corpus& corpus, const SplitSpec& spec);

SplitAssignment split_random(const Corpus& corpus, const SplitSpec& spec);
SplitAssignment split_by_sources(const Corpus& corpus, const SplitSpec& spec);
SplitAssignment split_political(const Corpus& corpus, const SplitSpec& spec);
SplitAssignment split_credibility(const Corpus& corpus,
                                  const SplitSpec& spec);

struct VerifyCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerifyReport {
  bool passed = true;
  std::vector<VerifyCheck> checks;
  std::vector<std::string> warnings;
};

/// Partition property, class presence in train, and the kind-specific
/// source constraints, as a machine-readable report.
VerifyReport verify_assignment(const SplitAssignment& assignment,
                               const Corpus& corpus);

void save_assignment(const SplitAssignment& assignment,
                     const std::string& path);
std::unordered_map<std::string, SetId> load_assignment(
    const std::string& path);

void write_verify_report_json(const VerifyReport& report,
                              const std::string& path);

}  // namespace propdetect
