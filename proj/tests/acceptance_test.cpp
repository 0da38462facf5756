// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any fails. Slow criteria print their wall-clock budgets.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <vector>

#include "propdetect/corpus.hpp"
#include "propdetect/features.hpp"
#include "propdetect/grid.hpp"
#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"
#include "propdetect/metrics.hpp"
#include "propdetect/mlp.hpp"
#include "propdetect/registry.hpp"
#include "propdetect/rng.hpp"
#include "propdetect/shapley.hpp"
#include "propdetect/splits.hpp"
#include "propdetect/synthetic.hpp"
#include "propdetect/train.hpp"

namespace pd = propdetect;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void report(int criterion, const std::string& name, bool passed,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", passed ? "PASS" : "FAIL",
              criterion, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!passed) ++failures;
}

std::string tmp_dir(const std::string& name) {
  const std::string dir = "acceptance_tmp/" + name;
  std::filesystem::remove_all(dir);
  pd::ensure_dir(dir);
  return dir;
}

// ---------------------------------------------------------------------
// 1. Analytic gradients vs central finite differences at all three
//    input widths.
void criterion_gradients(const pd::TechniqueRegistry& registry) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<int> dims = {
      pd::layout_for(pd::FeatureMode::kHybrid, 300, registry).total(),
      pd::layout_for(pd::FeatureMode::kHybridLite, 300, registry).total(),
      pd::layout_for(pd::FeatureMode::kTextOnly, 300, registry).total()};

  const double h = 1e-5;
  const double tolerance = 1e-4;
  long pairs = 0;
  long coords = 0;
  double worst = 0.0;
  bool ok = true;
  std::string detail;

  pd::Rng rng(20240811);
  for (const int dim : dims) {
    for (int pair = 0; pair < 34 && ok; ++pair) {
      pd::MlpModel model = pd::init_model(dim, rng.bits());
      Eigen::VectorXd x(dim);
      for (int i = 0; i < dim; ++i) x(i) = rng.normal();
      const int label = rng.uniform() < 0.5 ? 0 : 1;
      ++pairs;

      Eigen::MatrixXd batch(1, dim);
      batch.row(0) = x.transpose();
      Eigen::VectorXd y(1);
      y(0) = label;
      const pd::Gradients grads = pd::backward(model, batch, y);

      const auto loss_at = [&](pd::MlpModel& m) {
        return pd::bce_loss_from_logit(pd::forward_logit(m, x), label);
      };
      const auto check_coord = [&](double analytic, double* param) {
        const double saved = *param;
        *param = saved + h;
        const double up = loss_at(model);
        *param = saved - h;
        const double down = loss_at(model);
        *param = saved;
        const double fd = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(analytic), std::abs(fd)});
        if (denom < 1e-7) return;  // both effectively zero
        const double rel = std::abs(analytic - fd) / denom;
        worst = std::max(worst, rel);
        ++coords;
        if (rel >= tolerance && ok) {
          ok = false;
          detail = "relative error " + pd::format_double(rel, 8) +
                   " at dim " + std::to_string(dim);
        }
      };

      check_coord(grads.b2, &model.b2);
      for (int k = 0; k < 60; ++k) {
        const long i = static_cast<long>(rng.below(dim));
        check_coord(grads.w2(i), &model.w2(i));
      }
      for (int k = 0; k < 60; ++k) {
        const long i = static_cast<long>(rng.below(dim));
        check_coord(grads.b1(i), &model.b1(i));
      }
      for (int k = 0; k < 100; ++k) {
        const long r = static_cast<long>(rng.below(dim));
        const long c = static_cast<long>(rng.below(dim));
        check_coord(grads.w1(r, c), &model.w1(r, c));
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (ok && elapsed >= 10.0) {
    ok = false;
    detail = "runtime " + pd::format_double(elapsed, 1) + " s exceeds 10 s";
  }
  if (ok) {
    detail = std::to_string(pairs) + " pairs, " + std::to_string(coords) +
             " coordinates, worst rel err " + pd::format_double(worst, 8) +
             ", " + pd::format_double(elapsed, 1) + " s";
  }
  report(1, "gradient oracle", ok, detail);
}

// ---------------------------------------------------------------------
// 2. Shapley efficiency, dummy axiom, and a permutation-sampling
//    Monte-Carlo oracle.
void criterion_shapley(const pd::TechniqueRegistry& registry) {
  const auto start = std::chrono::steady_clock::now();
  const auto mode = pd::FeatureMode::kHybrid;
  const pd::FeatureLayout layout = pd::layout_for(mode, 300, registry);
  const int dim = layout.total();
  bool ok = true;
  std::string detail;

  pd::Rng rng(998877);
  const auto random_vector = [&](double scale) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = scale * rng.normal();
    return v;
  };

  // Efficiency on 1000 random triples.
  double worst_gap = 0.0;
  for (int t = 0; t < 1000 && ok; ++t) {
    const pd::MlpModel model = pd::init_model(dim, rng.bits());
    const Eigen::VectorXd x = random_vector(1.0);
    const Eigen::VectorXd baseline = random_vector(1.0);
    const auto a = pd::group_shapley(model, x, baseline, mode, registry);
    const double gap =
        std::abs(a.sum() - (a.sample_score - a.baseline_score));
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) {
      ok = false;
      detail = "efficiency gap " + pd::format_double(gap, 10);
    }
  }

  // Dummy axiom: zeroing the first-layer columns of a group silences it.
  for (int t = 0; t < 50 && ok; ++t) {
    pd::MlpModel model = pd::init_model(dim, rng.bits());
    model.w1.middleCols(layout.genre_offset, layout.genre_len).setZero();
    model.w1.middleCols(layout.topic_offset, layout.topic_len).setZero();
    model.w1.middleCols(layout.persuasion_offset, layout.persuasion_len)
        .setZero();
    const Eigen::VectorXd x = random_vector(1.0);
    const Eigen::VectorXd baseline = random_vector(1.0);
    const auto a = pd::group_shapley(model, x, baseline, mode, registry);
    const double expected_text = a.sample_score - a.baseline_score;
    if (std::abs(a.genre) > 1e-12 || std::abs(a.topic) > 1e-12 ||
        std::abs(a.persuasion) > 1e-12 ||
        std::abs(a.text - expected_text) > 1e-9) {
      ok = false;
      detail = "dummy-group attribution not zero";
    }
  }

  // Permutation-sampling Monte-Carlo estimate on 20 triples.
  const std::array<int, 4> offsets = {layout.text_offset, layout.genre_offset,
                                      layout.topic_offset,
                                      layout.persuasion_offset};
  const std::array<int, 4> lengths = {layout.text_len, layout.genre_len,
                                      layout.topic_len,
                                      layout.persuasion_len};
  for (int t = 0; t < 20 && ok; ++t) {
    const pd::MlpModel model = pd::init_model(dim, rng.bits());
    const Eigen::VectorXd x = random_vector(1.0);
    const Eigen::VectorXd baseline = random_vector(1.0);
    const auto exact = pd::group_shapley(model, x, baseline, mode, registry);
    const std::array<double, 4> exact_phi = {exact.text, exact.genre,
                                             exact.topic, exact.persuasion};

    // Independent coalition values via an explicit mask walk.
    std::array<double, 16> value{};
    Eigen::VectorXd composed(dim);
    for (int mask = 0; mask < 16; ++mask) {
      composed = baseline;
      for (int g = 0; g < 4; ++g) {
        if ((mask >> g) & 1) {
          composed.segment(offsets[g], lengths[g]) =
              x.segment(offsets[g], lengths[g]);
        }
      }
      value[mask] = pd::forward(model, composed);
    }

    const int permutations = 20000;
    std::array<double, 4> sum{};
    std::array<double, 4> sum_sq{};
    std::array<int, 4> order = {0, 1, 2, 3};
    for (int p = 0; p < permutations; ++p) {
      for (int i = 3; i > 0; --i) {
        std::swap(order[i], order[rng.below(i + 1)]);
      }
      int mask = 0;
      double previous = value[0];
      for (const int g : order) {
        mask |= 1 << g;
        const double current = value[mask];
        const double marginal = current - previous;
        sum[g] += marginal;
        sum_sq[g] += marginal * marginal;
        previous = current;
      }
    }
    for (int g = 0; g < 4 && ok; ++g) {
      const double estimate = sum[g] / permutations;
      const double variance =
          (sum_sq[g] / permutations - estimate * estimate) /
          permutations;
      const double se = std::sqrt(std::max(variance, 0.0));
      if (std::abs(exact_phi[g] - estimate) > 3.0 * se + 1e-12) {
        ok = false;
        detail = "exact vs Monte-Carlo mismatch (group " +
                 std::to_string(g) + ", diff " +
                 pd::format_double(std::abs(exact_phi[g] - estimate), 8) +
                 ", 3SE " + pd::format_double(3.0 * se, 8) + ")";
      }
    }
  }

  const double elapsed = seconds_since(start);
  if (ok && elapsed >= 60.0) {
    ok = false;
    detail = "runtime " + pd::format_double(elapsed, 1) + " s exceeds 60 s";
  }
  if (ok) {
    detail = "worst efficiency gap " + pd::format_double(worst_gap, 12) +
             ", " + pd::format_double(elapsed, 1) + " s";
  }
  report(2, "grouped Shapley axioms", ok, detail);
}

// ---------------------------------------------------------------------
// 3. Aggregator arithmetic on the published percentage rows.
void criterion_aggregation() {
  const std::vector<std::pair<pd::SplitKind, double>> hybrid_row = {
      {pd::SplitKind::kRandom, 87.5},
      {pd::SplitKind::kSources, 88.37},
      {pd::SplitKind::kPolitical, 81.66},
      {pd::SplitKind::kCredibility, 86.95}};
  const std::vector<std::pair<pd::SplitKind, double>> text_row = {
      {pd::SplitKind::kRandom, 88.54},
      {pd::SplitKind::kSources, 0.0},
      {pd::SplitKind::kPolitical, 88.54},
      {pd::SplitKind::kCredibility, 0.0}};

  std::vector<pd::RunRecord> records;
  const auto add_rows = [&](pd::FeatureMode mode, const auto& row) {
    for (const auto& [split, f1] : row) {
      pd::RunRecord record;
      record.split = split;
      record.mode = mode;
      record.seed = 1;
      record.ok = true;
      record.test.f1 = f1 / 100.0;
      record.test.accuracy = 0.0;
      records.push_back(record);
    }
  };
  add_rows(pd::FeatureMode::kHybrid, hybrid_row);
  add_rows(pd::FeatureMode::kTextOnly, text_row);

  const auto summary = pd::aggregate(records);
  const auto* hybrid = summary.mode_summary(pd::FeatureMode::kHybrid);
  const auto* text = summary.mode_summary(pd::FeatureMode::kTextOnly);

  bool ok = hybrid != nullptr && text != nullptr && summary.gaps.empty();
  std::string detail;
  if (ok) {
    const double mu = hybrid->mu_f1;
    const double var = hybrid->var_f1;
    const double text_mu = text->mu_f1;
    const double gap = mu - text_mu;
    ok = std::abs(mu - 86.12) <= 0.01 && std::abs(var - 9.18) <= 0.01 &&
         std::abs(text_mu - 44.27) <= 0.01 && std::abs(gap - 41.85) <= 0.01;
    detail = "mu=" + pd::format_double(mu, 4) + " var=" +
             pd::format_double(var, 4) + " text mu=" +
             pd::format_double(text_mu, 4) + " gap=" +
             pd::format_double(gap, 4);
  } else {
    detail = "aggregation incomplete";
  }
  report(3, "aggregation arithmetic", ok, detail);
}

// ---------------------------------------------------------------------
// 4. Split integrity on the 4223-record corpus with the default source
//    map.
void criterion_split_integrity(const pd::TechniqueRegistry& registry) {
  const pd::Corpus corpus =
      pd::generate_synthetic_corpus(pd::full_scale_spec(), 7, registry);
  const auto [mainstream, propaganda] = corpus.class_counts();
  bool ok = corpus.articles.size() == 4223 && propaganda == 3219 &&
            mainstream == 1004;
  std::string detail = ok ? "" : "unexpected corpus composition";

  for (const auto kind :
       {pd::SplitKind::kRandom, pd::SplitKind::kSources,
        pd::SplitKind::kPolitical, pd::SplitKind::kCredibility}) {
    if (!ok) break;
    pd::SplitSpec spec;
    spec.kind = kind;
    spec.seed = 17;
    if (kind == pd::SplitKind::kSources) {
      spec.source_assignments = pd::default_source_assignments();
    }
    const auto assignment = pd::split_corpus(corpus, spec);
    const auto verify = pd::verify_assignment(assignment, corpus);
    if (!verify.passed) {
      ok = false;
      for (const auto& check : verify.checks) {
        if (!check.passed) {
          detail = pd::to_string(kind) + ": " + check.name + " (" +
                   check.detail + ")";
        }
      }
      break;
    }
    // Disjoint-exhaustive over included articles.
    std::size_t covered = assignment.sets.size() +
                          assignment.excluded_ids.size();
    if (covered != corpus.articles.size()) {
      ok = false;
      detail = pd::to_string(kind) + ": assignment does not cover corpus";
      break;
    }
    if (kind == pd::SplitKind::kSources) {
      std::map<std::string, std::set<pd::SetId>> by_source;
      const auto index = pd::index_by_id(corpus);
      for (const auto& [id, set] : assignment.sets) {
        const auto& article = *index.at(id);
        if (corpus.meta_for(article.source).corpus ==
            pd::CorpusSide::kMainstream) {
          by_source[article.source].insert(set);
        }
      }
      for (const auto& [source, sets] : by_source) {
        if (sets.size() > 1) {
          ok = false;
          detail = "mainstream source '" + source + "' in two sets";
        }
      }
    }
  }
  report(4, "split integrity", ok,
         ok ? "all four strategies verified on 4223 articles" : detail);
}

struct RobustnessArtifacts {
  std::map<pd::FeatureMode, pd::FeatureMatrix> features;
  std::map<pd::SplitKind, pd::SplitAssignment> assignments;
  std::vector<pd::RunRecord> records;
  std::string out_dir;
  bool ready = false;
};

// ---------------------------------------------------------------------
// 5. End-to-end robustness demonstration on the shipped synthetic
//    corpus: hybrid survives the credibility shift, text-only does not,
//    text-only is fine in-distribution.
RobustnessArtifacts criterion_robustness(const pd::TechniqueRegistry& registry) {
  const auto start = std::chrono::steady_clock::now();
  RobustnessArtifacts artifacts;
  artifacts.out_dir = tmp_dir("robustness");

  const pd::SyntheticSpec spec = pd::robustness_spec();
  const std::uint64_t corpus_seed = 11;
  const pd::Corpus corpus =
      pd::generate_synthetic_corpus(spec, corpus_seed, registry);
  const std::string embeddings_path = artifacts.out_dir + "/embeddings.vec";
  pd::write_synthetic_embeddings(spec, corpus_seed, embeddings_path);
  const auto table = pd::EmbeddingTable::load(
      embeddings_path, pd::OovPolicy::kSkip, spec.embedding_dim);

  for (const auto mode :
       {pd::FeatureMode::kHybrid, pd::FeatureMode::kTextOnly}) {
    artifacts.features.emplace(
        mode, pd::featurize_corpus(corpus, table, mode, registry));
  }
  for (const auto kind :
       {pd::SplitKind::kRandom, pd::SplitKind::kCredibility}) {
    pd::SplitSpec split_spec;
    split_spec.kind = kind;
    split_spec.seed = 17;
    artifacts.assignments.emplace(kind, pd::split_corpus(corpus, split_spec));
  }

  pd::GridPlan plan;
  plan.splits = {pd::SplitKind::kRandom, pd::SplitKind::kCredibility};
  plan.modes = {pd::FeatureMode::kHybrid, pd::FeatureMode::kTextOnly};
  plan.seeds = {1, 2, 3, 4, 5};
  plan.out_dir = artifacts.out_dir;
  plan.workers = 2;
  artifacts.records = pd::run_ablation_grid(artifacts.features,
                                            artifacts.assignments, plan);

  const auto mean_f1 = [&](pd::SplitKind split, pd::FeatureMode mode) {
    std::vector<double> values;
    for (const auto& record : artifacts.records) {
      if (record.ok && record.split == split && record.mode == mode) {
        values.push_back(record.test.f1);
      }
    }
    return values.size() == 5 ? pd::mean(values) : -1.0;
  };

  const double cred_hybrid =
      mean_f1(pd::SplitKind::kCredibility, pd::FeatureMode::kHybrid);
  const double cred_text =
      mean_f1(pd::SplitKind::kCredibility, pd::FeatureMode::kTextOnly);
  const double random_text =
      mean_f1(pd::SplitKind::kRandom, pd::FeatureMode::kTextOnly);

  const double elapsed = seconds_since(start);
  bool ok = cred_hybrid >= 0.85 && cred_text >= 0.0 && cred_text <= 0.60 &&
            random_text >= 0.80;
  std::string detail = "credibility hybrid F1=" +
                       pd::format_double(cred_hybrid, 4) +
                       " (need >= 0.85), credibility text-only F1=" +
                       pd::format_double(cred_text, 4) +
                       " (need <= 0.60), random text-only F1=" +
                       pd::format_double(random_text, 4) +
                       " (need >= 0.80), " + pd::format_double(elapsed, 1) +
                       " s";
  if (elapsed >= 300.0) {
    ok = false;
    detail += " [over the 5 min budget]";
  }
  report(5, "end-to-end robustness", ok, detail);
  artifacts.ready = true;  // models exist either way; criterion 6 can run
  return artifacts;
}

// ---------------------------------------------------------------------
// 6. Explainability ordering on the criterion-5 runs: persuasion
//    dominates under the credibility shift, text in-distribution.
void criterion_explanations(const pd::TechniqueRegistry& registry,
                            const RobustnessArtifacts& artifacts) {
  if (!artifacts.ready) {
    report(6, "explanation ordering", false,
           "skipped: criterion 5 artifacts unavailable");
    return;
  }
  const auto mode = pd::FeatureMode::kHybrid;
  const auto& matrix = artifacts.features.at(mode);

  const auto mean_groups = [&](pd::SplitKind split) {
    const auto& assignment = artifacts.assignments.at(split);
    const auto train_set =
        pd::subset_dataset(matrix, assignment.sets, pd::SetId::kTrain);
    const auto test_set =
        pd::subset_dataset(matrix, assignment.sets, pd::SetId::kTest);
    const Eigen::VectorXd baseline = pd::mean_baseline(train_set.x);
    pd::SplitExplanation total;
    total.split = pd::to_string(split);
    int models = 0;
    for (const auto& record : artifacts.records) {
      if (!record.ok || record.split != split || record.mode != mode) {
        continue;
      }
      const auto [model, meta] = pd::load_model(record.model_path, &registry);
      const auto e =
          pd::mean_abs_attribution(total.split, model, test_set.x, baseline,
                                   mode, registry);
      total.text += e.text;
      total.genre += e.genre;
      total.topic += e.topic;
      total.persuasion += e.persuasion;
      ++models;
    }
    total.text /= models;
    total.genre /= models;
    total.topic /= models;
    total.persuasion /= models;
    return total;
  };

  const auto credibility = mean_groups(pd::SplitKind::kCredibility);
  const auto random = mean_groups(pd::SplitKind::kRandom);
  const bool ok = credibility.dominant_group() == "persuasion" &&
                  random.dominant_group() == "text";
  const std::string detail =
      "credibility dominant=" + credibility.dominant_group() + " (t=" +
      pd::format_double(credibility.text, 4) + " g=" +
      pd::format_double(credibility.genre, 4) + " o=" +
      pd::format_double(credibility.topic, 4) + " p=" +
      pd::format_double(credibility.persuasion, 4) + "), random dominant=" +
      random.dominant_group() + " (t=" + pd::format_double(random.text, 4) +
      " g=" + pd::format_double(random.genre, 4) + " o=" +
      pd::format_double(random.topic, 4) + " p=" +
      pd::format_double(random.persuasion, 4) + ")";
  report(6, "explanation ordering", ok, detail);
}

// ---------------------------------------------------------------------
// 7. Two identical full grid runs produce byte-identical summary CSVs.
void criterion_determinism(const pd::TechniqueRegistry& registry) {
  const pd::SyntheticSpec spec = pd::mini_spec();
  const pd::Corpus corpus = pd::generate_synthetic_corpus(spec, 3, registry);
  const std::string base = tmp_dir("determinism");
  const std::string embeddings_path = base + "/embeddings.vec";
  pd::write_synthetic_embeddings(spec, 3, embeddings_path);
  const auto table = pd::EmbeddingTable::load(
      embeddings_path, pd::OovPolicy::kSkip, spec.embedding_dim);

  std::map<pd::FeatureMode, pd::FeatureMatrix> features;
  for (const auto mode :
       {pd::FeatureMode::kHybrid, pd::FeatureMode::kHybridLite,
        pd::FeatureMode::kTextOnly}) {
    features.emplace(mode, pd::featurize_corpus(corpus, table, mode,
                                                registry));
  }
  std::map<pd::SplitKind, pd::SplitAssignment> assignments;
  for (const auto kind :
       {pd::SplitKind::kRandom, pd::SplitKind::kSources,
        pd::SplitKind::kPolitical, pd::SplitKind::kCredibility}) {
    pd::SplitSpec split_spec;
    split_spec.kind = kind;
    split_spec.seed = 17;
    if (kind == pd::SplitKind::kSources) {
      split_spec.source_assignments = pd::default_source_assignments();
    }
    assignments.emplace(kind, pd::split_corpus(corpus, split_spec));
  }

  const auto run_once = [&](const std::string& dir) {
    pd::GridPlan plan;
    plan.splits = {pd::SplitKind::kRandom, pd::SplitKind::kSources,
                   pd::SplitKind::kPolitical, pd::SplitKind::kCredibility};
    plan.modes = {pd::FeatureMode::kHybrid, pd::FeatureMode::kHybridLite,
                  pd::FeatureMode::kTextOnly};
    plan.seeds = {1, 2};
    plan.train.max_epochs = 30;
    plan.out_dir = dir;
    plan.workers = 2;
    plan.keep_models = false;
    const auto records = pd::run_ablation_grid(features, assignments, plan);
    const auto summary = pd::aggregate(records);
    pd::write_summary_csv(summary, dir + "/summary.csv");
    pd::write_mode_summary_csv(summary, dir + "/mode_summary.csv");
  };

  run_once(base + "/run_a");
  run_once(base + "/run_b");

  const bool summaries_equal =
      pd::read_file(base + "/run_a/summary.csv") ==
          pd::read_file(base + "/run_b/summary.csv") &&
      pd::read_file(base + "/run_a/mode_summary.csv") ==
          pd::read_file(base + "/run_b/mode_summary.csv");
  report(7, "grid determinism", summaries_equal,
         summaries_equal ? "summary CSVs byte-identical across two runs"
                         : "summary CSVs differ");
}

// ---------------------------------------------------------------------
// 8. Metrics vs a brute-force confusion-count oracle.
void criterion_metrics() {
  pd::Rng rng(5150);
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const std::size_t n = 1 + rng.below(300);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    const double threshold = 0.05 + 0.9 * rng.uniform();
    for (std::size_t i = 0; i < n; ++i) {
      // Occasionally pin a score exactly at the threshold.
      scores[i] = rng.uniform() < 0.05 ? threshold : rng.uniform();
      labels[i] = rng.uniform() < 0.5 ? 1 : 0;
    }
    const auto metrics = pd::compute_metrics(scores, labels, threshold);

    long tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool predicted = scores[i] >= threshold;
      if (predicted && labels[i] == 1) ++tp;
      if (predicted && labels[i] == 0) ++fp;
      if (!predicted && labels[i] == 0) ++tn;
      if (!predicted && labels[i] == 1) ++fn;
    }
    const double accuracy = static_cast<double>(tp + tn) /
                            static_cast<double>(n);
    const double precision =
        tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double recall =
        tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    const double f1 = precision + recall > 0.0
                          ? 2.0 * precision * recall / (precision + recall)
                          : 0.0;
    if (metrics.tp != tp || metrics.fp != fp || metrics.tn != tn ||
        metrics.fn != fn || std::abs(metrics.accuracy - accuracy) > 1e-12 ||
        std::abs(metrics.precision - precision) > 1e-12 ||
        std::abs(metrics.recall - recall) > 1e-12 ||
        std::abs(metrics.f1 - f1) > 1e-12) {
      ok = false;
      detail = "mismatch vs oracle at trial " + std::to_string(trial);
    }
  }
  if (ok) {
    // All-negative predictions keep F1 defined as exactly zero.
    std::vector<double> scores(40, 0.0);
    std::vector<int> labels(40, 1);
    const auto metrics = pd::compute_metrics(scores, labels, 0.5);
    if (metrics.f1 != 0.0 || metrics.recall != 0.0 ||
        metrics.accuracy != 0.0) {
      ok = false;
      detail = "all-negative convention violated";
    } else {
      detail = "1000 random sets match the counting oracle exactly";
    }
  }
  report(8, "metric definitions", ok, detail);
}

}  // namespace

int main() {
  const auto registry = pd::TechniqueRegistry::builtin();
  const auto start = std::chrono::steady_clock::now();

  criterion_gradients(registry);
  criterion_shapley(registry);
  criterion_aggregation();
  criterion_split_integrity(registry);
  const auto artifacts = criterion_robustness(registry);
  criterion_explanations(registry, artifacts);
  criterion_determinism(registry);
  criterion_metrics();

  std::printf("acceptance finished in %.1f s with %d failure(s)\n",
              seconds_since(start), failures);
  return failures == 0 ? 0 : 1;
}
