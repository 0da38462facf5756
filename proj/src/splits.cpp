#include "propdetect/splits.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <sstream>

#include "propdetect/error.hpp"
#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"
#include "propdetect/rng.hpp"

namespace propdetect {

using nlohmann::json;

SplitKind split_kind_from_string(const std::string& name) {
  if (name == "random") return SplitKind::kRandom;
  if (name == "sources") return SplitKind::kSources;
  if (name == "political") return SplitKind::kPolitical;
  if (name == "credibility") return SplitKind::kCredibility;
  throw ParseError("unknown split kind '" + name + "'");
}

std::string to_string(SplitKind kind) {
  switch (kind) {
    case SplitKind::kRandom: return "random";
    case SplitKind::kSources: return "sources";
    case SplitKind::kPolitical: return "political";
    default: return "credibility";
  }
}

std::string to_string(SetId set) {
  switch (set) {
    case SetId::kTrain: return "train";
    case SetId::kValid: return "valid";
    default: return "test";
  }
}

SetId set_id_from_string(const std::string& name) {
  if (name == "train") return SetId::kTrain;
  if (name == "valid") return SetId::kValid;
  if (name == "test") return SetId::kTest;
  throw ParseError("unknown set '" + name + "'");
}

void SplitSpec::validate() const {
  double total = 0.0;
  for (double ratio : ratios) {
    if (ratio < 0.0) throw ConfigError("split ratios must be non-negative");
    total += ratio;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
}

std::array<long, 3> SplitAssignment::set_sizes() const {
  std::array<long, 3> sizes = {0, 0, 0};
  for (const auto& [id, set] : sets) sizes[static_cast<int>(set)] += 1;
  return sizes;
}

std::vector<std::string> SplitAssignment::ids_in(SetId set) const {
  std::vector<std::string> ids;
  for (const auto& [id, s] : sets) {
    if (s == set) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::map<std::string, SourceSet> default_source_assignments() {
  return {
      {"APNews", SourceSet::kTrain},
      {"The Guardian", SourceSet::kTrain},
      {"CNN", SourceSet::kValid},
      {"USA Today", SourceSet::kValid},
      {"Forbes", SourceSet::kValid},
      {"Fox News", SourceSet::kValid},
      {"NBC News", SourceSet::kValid},
      {"NYTimes", SourceSet::kValid},
      {"Washington Post", SourceSet::kValid},
      {"CBSNews", SourceSet::kTest},
      {"Daily Mail", SourceSet::kTest},
      {"RRN", SourceSet::kTrain},
      {"TribunalUkraine", SourceSet::kValidTestShared},
      {"War on Fakes", SourceSet::kValidTestShared},
  };
}

namespace {

// Largest-remainder apportionment of n items to the three ratio buckets;
// every bucket lands within one item of its exact share.
std::array<long, 3> apportion(long n, const std::array<double, 3>& ratios) {
  std::array<long, 3> sizes{};
  std::array<double, 3> fractions{};
  long assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double target = ratios[i] * static_cast<double>(n);
    sizes[i] = static_cast<long>(std::floor(target));
    fractions[i] = target - std::floor(target);
    assigned += sizes[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fractions[a] > fractions[b]; });
  for (long k = 0; k < n - assigned; ++k) sizes[order[k % 3]] += 1;
  return sizes;
}

std::vector<const Article*> shuffled(std::vector<const Article*> articles,
                                     Rng& rng) {
  rng.shuffle(articles);
  return articles;
}

void assign_three_way(const std::vector<const Article*>& pool,
                      const std::array<double, 3>& ratios,
                      SplitAssignment& out) {
  const auto sizes = apportion(static_cast<long>(pool.size()), ratios);
  long index = 0;
  for (int set = 0; set < 3; ++set) {
    for (long k = 0; k < sizes[set]; ++k, ++index) {
      out.sets.emplace(pool[index]->id, static_cast<SetId>(set));
    }
  }
}

// First half (rounded up) to valid, remainder to test.
void assign_valid_test(const std::vector<const Article*>& pool,
                       SplitAssignment& out) {
  const std::size_t valid_count = (pool.size() + 1) / 2;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    out.sets.emplace(pool[i]->id,
                     i < valid_count ? SetId::kValid : SetId::kTest);
  }
}

void require_nonempty_sets(const SplitAssignment& assignment,
                           const std::string& what) {
  const auto sizes = assignment.set_sizes();
  if (sizes[0] == 0 || sizes[1] == 0 || sizes[2] == 0) {
    throw ValidationError(what + ": corpus too small for non-empty sets (" +
                          std::to_string(sizes[0]) + "/" +
                          std::to_string(sizes[1]) + "/" +
                          std::to_string(sizes[2]) + ")");
  }
}

}  // namespace

SplitAssignment split_random(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  SplitAssignment assignment;
  assignment.provenance = spec;
  Rng rng(derive_seed(spec.seed, "split-random"));
  std::vector<const Article*> pool;
  pool.reserve(corpus.articles.size());
  for (const auto& article : corpus.articles) pool.push_back(&article);
  assign_three_way(shuffled(std::move(pool), rng), spec.ratios, assignment);
  require_nonempty_sets(assignment, "random split");
  return assignment;
}

SplitAssignment split_by_sources(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  SplitAssignment assignment;
  assignment.provenance = spec;
  const auto& map = spec.source_assignments;
  for (const auto& meta : corpus.sources) {
    if (!map.count(meta.source)) {
      throw ValidationError("sources split: source '" + meta.source +
                            "' has no assignment");
    }
  }
  std::vector<const Article*> shared;
  for (const auto& article : corpus.articles) {
    switch (map.at(article.source)) {
      case SourceSet::kTrain:
        assignment.sets.emplace(article.id, SetId::kTrain);
        break;
      case SourceSet::kValid:
        assignment.sets.emplace(article.id, SetId::kValid);
        break;
      case SourceSet::kTest:
        assignment.sets.emplace(article.id, SetId::kTest);
        break;
      case SourceSet::kValidTestShared:
        shared.push_back(&article);
        break;
    }
  }
  Rng rng(derive_seed(spec.seed, "split-sources-shared"));
  assign_valid_test(shuffled(std::move(shared), rng), assignment);
  require_nonempty_sets(assignment, "sources split");
  return assignment;
}

SplitAssignment split_political(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  SplitAssignment assignment;
  assignment.provenance = spec;
  std::vector<const Article*> right_pool;
  std::vector<const Article*> ppn_pool;
  bool any_right_source = false;
  for (const auto& meta : corpus.sources) {
    if (meta.corpus == CorpusSide::kMainstream &&
        meta.leaning == Leaning::kRight) {
      any_right_source = true;
    }
  }
  if (!any_right_source) {
    throw ValidationError("political split: no right-leaning sources");
  }
  std::set<std::string> unrated_sources;
  for (const auto& article : corpus.articles) {
    const SourceMeta& meta = corpus.meta_for(article.source);
    if (meta.corpus == CorpusSide::kPpn) {
      ppn_pool.push_back(&article);
      continue;
    }
    switch (meta.leaning) {
      case Leaning::kLeft:
        assignment.sets.emplace(article.id, SetId::kTrain);
        break;
      case Leaning::kRight:
        right_pool.push_back(&article);
        break;
      case Leaning::kUnrated:
        assignment.excluded_ids.push_back(article.id);
        unrated_sources.insert(article.source);
        break;
    }
  }
  if (!assignment.excluded_ids.empty()) {
    std::string names;
    for (const auto& s : unrated_sources) {
      names += (names.empty() ? "" : ", ") + s;
    }
    assignment.warnings.push_back(
        "political split: excluded " +
        std::to_string(assignment.excluded_ids.size()) +
        " articles from unrated-leaning sources (" + names + ")");
  }
  Rng rng(derive_seed(spec.seed, "split-political"));
  assign_valid_test(shuffled(std::move(right_pool), rng), assignment);
  assign_three_way(shuffled(std::move(ppn_pool), rng), spec.ratios,
                   assignment);
  require_nonempty_sets(assignment, "political split");
  return assignment;
}

SplitAssignment split_credibility(const Corpus& corpus,
                                  const SplitSpec& spec) {
  spec.validate();
  SplitAssignment assignment;
  assignment.provenance = spec;
  std::vector<const Article*> low_pool;
  std::vector<const Article*> ppn_pool;
  bool any_low_mainstream = false;
  for (const auto& meta : corpus.sources) {
    if (meta.corpus == CorpusSide::kMainstream &&
        meta.credibility == Credibility::kLow) {
      any_low_mainstream = true;
    }
  }
  if (!any_low_mainstream) {
    throw ValidationError(
        "credibility split: no low-credibility mainstream sources");
  }
  for (const auto& article : corpus.articles) {
    const SourceMeta& meta = corpus.meta_for(article.source);
    if (meta.corpus == CorpusSide::kPpn) {
      ppn_pool.push_back(&article);
    } else if (meta.credibility == Credibility::kHigh) {
      assignment.sets.emplace(article.id, SetId::kTrain);
    } else {
      low_pool.push_back(&article);
    }
  }
  Rng rng(derive_seed(spec.seed, "split-credibility"));
  assign_valid_test(shuffled(std::move(low_pool), rng), assignment);
  assign_three_way(shuffled(std::move(ppn_pool), rng), spec.ratios,
                   assignment);
  require_nonempty_sets(assignment, "credibility split");
  return assignment;
}

SplitAssignment split_corpus(const Corpus& corpus, const SplitSpec& spec) {
  switch (spec.kind) {
    case SplitKind::kRandom: return split_random(corpus, spec);
    case SplitKind::kSources: return split_by_sources(corpus, spec);
    case SplitKind::kPolitical: return split_political(corpus, spec);
    default: return split_credibility(corpus, spec);
  }
}

namespace {

void add_check(VerifyReport& report, const std::string& name, bool passed,
               const std::string& detail) {
  report.checks.push_back({name, passed, detail});
  report.passed = report.passed && passed;
}

bool ppn_ratio_check(const SplitAssignment& assignment, const Corpus& corpus,
                     std::string& detail) {
  std::array<long, 3> ppn_sizes = {0, 0, 0};
  long ppn_total = 0;
  for (const auto& article : corpus.articles) {
    if (corpus.meta_for(article.source).corpus != CorpusSide::kPpn) continue;
    const auto it = assignment.sets.find(article.id);
    if (it == assignment.sets.end()) continue;
    ppn_sizes[static_cast<int>(it->second)] += 1;
    ++ppn_total;
  }
  const auto expected =
      apportion(ppn_total, assignment.provenance.ratios);
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(ppn_sizes[i] - expected[i]) > 1) ok = false;
  }
  std::ostringstream os;
  os << "PPN train/valid/test = " << ppn_sizes[0] << "/" << ppn_sizes[1]
     << "/" << ppn_sizes[2] << " (expected about " << expected[0] << "/"
     << expected[1] << "/" << expected[2] << ")";
  detail = os.str();
  return ok;
}

}  // namespace

VerifyReport verify_assignment(const SplitAssignment& assignment,
                               const Corpus& corpus) {
  VerifyReport report;
  report.warnings = assignment.warnings;

  // Partition: every article in exactly one set, or explicitly excluded.
  std::set<std::string> excluded(assignment.excluded_ids.begin(),
                                 assignment.excluded_ids.end());
  bool partition_ok = true;
  std::string partition_detail;
  std::size_t covered = 0;
  for (const auto& article : corpus.articles) {
    const bool assigned = assignment.sets.count(article.id) != 0;
    const bool is_excluded = excluded.count(article.id) != 0;
    if (assigned == is_excluded) {
      partition_ok = false;
      partition_detail = assigned
                             ? "article '" + article.id +
                                   "' both assigned and excluded"
                             : "article '" + article.id + "' not assigned";
      break;
    }
    if (assigned) ++covered;
  }
  if (partition_ok && covered != assignment.sets.size()) {
    partition_ok = false;
    partition_detail = "assignment references ids outside the corpus";
  }
  add_check(report, "partition", partition_ok, partition_detail);

  // Train must be non-empty and contain both classes.
  const auto index = index_by_id(corpus);
  std::array<long, 2> train_classes = {0, 0};
  for (const auto& [id, set] : assignment.sets) {
    if (set != SetId::kTrain) continue;
    const auto it = index.find(id);
    if (it != index.end()) train_classes[it->second->label] += 1;
  }
  add_check(report, "train_classes",
            train_classes[0] > 0 && train_classes[1] > 0,
            "train has " + std::to_string(train_classes[0]) +
                " mainstream / " + std::to_string(train_classes[1]) +
                " propaganda articles");

  const SplitKind kind = assignment.provenance.kind;
  if (kind == SplitKind::kSources) {
    // No source may land in two sets unless declared shared.
    std::map<std::string, std::set<SetId>> sets_by_source;
    for (const auto& [id, set] : assignment.sets) {
      const auto it = index.find(id);
      if (it != index.end()) sets_by_source[it->second->source].insert(set);
    }
    bool ok = true;
    std::string detail;
    for (const auto& [source, sets] : sets_by_source) {
      const auto declared =
          assignment.provenance.source_assignments.count(source)
              ? assignment.provenance.source_assignments.at(source)
              : SourceSet::kTrain;
      if (declared == SourceSet::kValidTestShared) {
        if (sets.count(SetId::kTrain)) {
          ok = false;
          detail = "shared source '" + source + "' leaked into train";
        }
      } else if (sets.size() > 1) {
        ok = false;
        detail = "source '" + source + "' appears in multiple sets";
      }
    }
    add_check(report, "source_disjointness", ok, detail);
  }
  if (kind == SplitKind::kPolitical) {
    bool ok = true;
    std::string detail;
    for (const auto& [id, set] : assignment.sets) {
      const auto it = index.find(id);
      if (it == index.end()) continue;
      const SourceMeta& meta = corpus.meta_for(it->second->source);
      if (meta.corpus != CorpusSide::kMainstream) continue;
      if (meta.leaning == Leaning::kLeft && set != SetId::kTrain) {
        ok = false;
        detail = "left-leaning article '" + id + "' outside train";
        break;
      }
      if (meta.leaning == Leaning::kRight && set == SetId::kTrain) {
        ok = false;
        detail = "right-leaning article '" + id + "' in train";
        break;
      }
      if (meta.leaning == Leaning::kUnrated) {
        ok = false;
        detail = "unrated-leaning article '" + id + "' was assigned";
        break;
      }
    }
    add_check(report, "leaning_constraint", ok, detail);
    std::string ppn_detail;
    add_check(report, "ppn_ratios", ppn_ratio_check(assignment, corpus,
                                                    ppn_detail),
              ppn_detail);
  }
  if (kind == SplitKind::kCredibility) {
    bool ok = true;
    std::string detail;
    for (const auto& [id, set] : assignment.sets) {
      const auto it = index.find(id);
      if (it == index.end()) continue;
      const SourceMeta& meta = corpus.meta_for(it->second->source);
      if (meta.corpus != CorpusSide::kMainstream) continue;
      if (meta.credibility == Credibility::kHigh && set != SetId::kTrain) {
        ok = false;
        detail = "high-credibility article '" + id + "' outside train";
        break;
      }
      if (meta.credibility == Credibility::kLow && set == SetId::kTrain) {
        ok = false;
        detail = "low-credibility mainstream article '" + id + "' in train";
        break;
      }
    }
    add_check(report, "credibility_constraint", ok, detail);
    std::string ppn_detail;
    add_check(report, "ppn_ratios", ppn_ratio_check(assignment, corpus,
                                                    ppn_detail),
              ppn_detail);
  }
  return report;
}

void save_assignment(const SplitAssignment& assignment,
                     const std::string& path) {
  std::vector<std::pair<std::string, SetId>> rows(assignment.sets.begin(),
                                                  assignment.sets.end());
  std::sort(rows.begin(), rows.end());
  std::ostringstream out;
  for (const auto& [id, set] : rows) {
    json j;
    j["id"] = id;
    j["set"] = to_string(set);
    out << j.dump() << "\n";
  }
  write_file_atomic(path, out.str());
}

std::unordered_map<std::string, SetId> load_assignment(
    const std::string& path) {
  std::unordered_map<std::string, SetId> sets;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    try {
      const json j = json::parse(lines[i]);
      const std::string id = j.at("id").get<std::string>();
      const SetId set = set_id_from_string(j.at("set").get<std::string>());
      if (!sets.emplace(id, set).second) {
        throw ValidationError(where + ": article '" + id +
                              "' assigned to more than one set");
      }
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return sets;
}

void write_verify_report_json(const VerifyReport& report,
                              const std::string& path) {
  json doc;
  doc["passed"] = report.passed;
  json checks = json::array();
  for (const auto& check : report.checks) {
    checks.push_back({{"name", check.name},
                      {"passed", check.passed},
                      {"detail", check.detail}});
  }
  doc["checks"] = checks;
  doc["warnings"] = report.warnings;
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace propdetect
