// propdetect: generate or ingest a corpus, annotate it, build fused
// feature matrices, partition by metadata, train and evaluate the
// detector, and explain its predictions.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <map>

#include "propdetect/annotate.hpp"
#include "propdetect/annotator_client.hpp"
#include "propdetect/config.hpp"
#include "propdetect/corpus.hpp"
#include "propdetect/error.hpp"
#include "propdetect/features.hpp"
#include "propdetect/grid.hpp"
#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"
#include "propdetect/manifest.hpp"
#include "propdetect/metrics.hpp"
#include "propdetect/shapley.hpp"
#include "propdetect/splits.hpp"
#include "propdetect/synthetic.hpp"
#include "propdetect/train.hpp"

namespace pd = propdetect;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string mode;
  std::string split;
  std::vector<std::uint64_t> seeds;
  int workers = 0;
  bool offline = false;
  std::string endpoint;
  double threshold = -1.0;
};

pd::RunConfig effective_config(const CommonOptions& options) {
  pd::RunConfig config = options.config_path.empty()
                             ? pd::default_run_config()
                             : pd::load_run_config(options.config_path);
  if (!options.out_dir.empty()) config.out_dir = options.out_dir;
  if (!options.mode.empty()) {
    config.modes = {pd::feature_mode_from_string(options.mode)};
  }
  if (!options.split.empty()) {
    const auto kind = pd::split_kind_from_string(options.split);
    std::vector<pd::SplitSpec> kept;
    for (const auto& spec : config.splits) {
      if (spec.kind == kind) kept.push_back(spec);
    }
    if (kept.empty()) {
      pd::SplitSpec spec;
      spec.kind = kind;
      if (kind == pd::SplitKind::kSources) {
        spec.source_assignments = pd::default_source_assignments();
      }
      kept.push_back(spec);
    }
    config.splits = kept;
  }
  if (!options.seeds.empty()) config.seeds = options.seeds;
  if (options.workers > 0) config.workers = options.workers;
  if (options.offline) config.offline = true;
  if (!options.endpoint.empty()) {
    config.offline = false;
    config.endpoint.base_url = options.endpoint;
  }
  if (options.threshold > 0.0) config.train.threshold = options.threshold;
  if (const char* token = std::getenv("PROPDETECT_ANNOTATOR_TOKEN")) {
    config.endpoint.token = token;
  }
  // Default artifact locations inside the output directory.
  if (config.articles_path.empty()) {
    config.articles_path = config.out_dir + "/corpus/articles.jsonl";
  }
  if (config.sources_path.empty()) {
    config.sources_path = config.out_dir + "/corpus/sources.jsonl";
  }
  if (config.embeddings_path.empty()) {
    config.embeddings_path = config.out_dir + "/corpus/embeddings.vec";
  }
  if (config.lexicons_path.empty() &&
      pd::file_exists("data/lexicons.json")) {
    config.lexicons_path = "data/lexicons.json";
  }
  return config;
}

pd::TechniqueRegistry registry_for(const pd::RunConfig& config) {
  if (config.registry_path.empty()) return pd::TechniqueRegistry::builtin();
  return pd::TechniqueRegistry::load(config.registry_path);
}

std::string annotated_articles_path(const pd::RunConfig& config) {
  const std::string path = config.out_dir + "/annotations/articles.jsonl";
  return pd::file_exists(path) ? path : config.articles_path;
}

pd::Corpus load_pipeline_corpus(const pd::RunConfig& config,
                                const pd::TechniqueRegistry& registry) {
  return pd::load_corpus(annotated_articles_path(config), config.sources_path,
                         registry);
}

pd::Manifest stage_manifest(const std::string& stage,
                            const pd::RunConfig& config,
                            const pd::TechniqueRegistry& registry) {
  pd::Manifest manifest;
  manifest.stage = stage;
  manifest.config_fingerprint = config.fingerprint();
  manifest.versions["registry"] = registry.version;
  return manifest;
}

std::map<pd::SplitKind, pd::SplitAssignment> assignments_for(
    const pd::RunConfig& config, const pd::Corpus& corpus) {
  std::map<pd::SplitKind, pd::SplitAssignment> assignments;
  for (const auto& spec : config.splits) {
    assignments.emplace(spec.kind, pd::split_corpus(corpus, spec));
  }
  return assignments;
}

int cmd_synth_gen(const CommonOptions& options, const std::string& preset,
                  const std::string& spec_path, std::uint64_t seed) {
  pd::RunConfig config = effective_config(options);
  const auto registry = registry_for(config);
  pd::SyntheticSpec spec;
  if (!spec_path.empty()) {
    spec = pd::synthetic_spec_from_json(spec_path);
  } else if (preset == "full") {
    spec = pd::full_scale_spec();
  } else if (preset == "robustness") {
    spec = pd::robustness_spec();
  } else if (preset == "mini") {
    spec = pd::mini_spec();
  } else {
    throw pd::ConfigError("unknown preset '" + preset +
                          "' (expected full, robustness, or mini)");
  }

  const std::string dir = config.out_dir + "/corpus";
  pd::ensure_dir(dir);
  const pd::Corpus corpus = pd::generate_synthetic_corpus(spec, seed, registry);
  pd::save_corpus(corpus, dir + "/articles.jsonl", dir + "/sources.jsonl",
                  registry);
  pd::write_synthetic_embeddings(spec, seed, dir + "/embeddings.vec");
  pd::synthetic_spec_to_json(spec, dir + "/synthetic_spec.json");

  auto manifest = stage_manifest("synth-gen", config, registry);
  manifest.versions["seed"] = std::to_string(seed);
  manifest.add_input("spec", dir + "/synthetic_spec.json");
  manifest.outputs["articles"] = dir + "/articles.jsonl";
  manifest.outputs["sources"] = dir + "/sources.jsonl";
  manifest.outputs["embeddings"] = dir + "/embeddings.vec";
  manifest.write(dir);

  const auto [mainstream, propaganda] = corpus.class_counts();
  std::cout << "generated " << corpus.articles.size() << " articles ("
            << propaganda << " propaganda / " << mainstream
            << " mainstream) into " << dir << "\n";
  return 0;
}

int cmd_ingest(const CommonOptions& options, const std::string& articles,
               const std::string& sources) {
  pd::RunConfig config = effective_config(options);
  if (!articles.empty()) config.articles_path = articles;
  if (!sources.empty()) config.sources_path = sources;
  const auto registry = registry_for(config);
  const pd::Corpus corpus =
      pd::load_corpus(config.articles_path, config.sources_path, registry);

  const std::string dir = config.out_dir + "/corpus";
  pd::ensure_dir(dir);
  pd::save_corpus(corpus, dir + "/articles.jsonl", dir + "/sources.jsonl",
                  registry);
  auto manifest = stage_manifest("ingest", config, registry);
  manifest.add_input("articles", config.articles_path);
  manifest.add_input("sources", config.sources_path);
  manifest.outputs["articles"] = dir + "/articles.jsonl";
  manifest.write(dir);

  const auto [mainstream, propaganda] = corpus.class_counts();
  std::cout << "ingested " << corpus.articles.size() << " articles ("
            << propaganda << " propaganda / " << mainstream
            << " mainstream) from " << corpus.sources.size() << " sources\n";
  return 0;
}

int cmd_annotate(const CommonOptions& options) {
  pd::RunConfig config = effective_config(options);
  const auto registry = registry_for(config);
  pd::Corpus corpus =
      pd::load_corpus(config.articles_path, config.sources_path, registry);

  const std::string dir = config.out_dir + "/annotations";
  pd::ensure_dir(dir);
  auto cache = pd::AnnotationCache::open(dir + "/cache.jsonl", registry);

  std::size_t annotated = 0;
  if (config.offline) {
    if (config.lexicons_path.empty()) {
      throw pd::ConfigError("annotate: offline mode needs paths.lexicons");
    }
    const auto lexicons = pd::load_lexicons(config.lexicons_path);
    annotated = pd::annotate_corpus(
        corpus, "offline",
        [&](const pd::Article& article) {
          return pd::annotate_offline(article, lexicons, registry);
        },
        &cache, config.workers);
  } else {
    pd::AnnotatorClient client(config.endpoint, registry);
    annotated = pd::annotate_corpus(
        corpus, client.annotator_id(),
        [&](const pd::Article& article) { return client.annotate(article); },
        &cache, config.workers);
    if (client.retries_performed() > 0) {
      std::cout << "annotator retries: " << client.retries_performed()
                << "\n";
    }
  }
  pd::save_corpus(corpus, dir + "/articles.jsonl", dir + "/sources.jsonl",
                  registry);

  auto manifest = stage_manifest("annotate", config, registry);
  manifest.add_input("articles", config.articles_path);
  manifest.versions["annotator"] =
      config.offline ? "offline" : config.endpoint.base_url;
  manifest.outputs["articles"] = dir + "/articles.jsonl";
  manifest.outputs["cache"] = dir + "/cache.jsonl";
  manifest.write(dir);

  std::cout << "annotated " << annotated << " articles ("
            << corpus.articles.size() - annotated
            << " already covered by cache or input)\n";

  const auto report = pd::corpus_statistics(corpus, registry);
  pd::write_distribution_csv(report, registry, dir + "/distributions.csv");
  return 0;
}

int cmd_featurize(const CommonOptions& options) {
  pd::RunConfig config = effective_config(options);
  const auto registry = registry_for(config);
  const pd::Corpus corpus = load_pipeline_corpus(config, registry);
  const auto table = pd::EmbeddingTable::load(
      config.embeddings_path, config.oov_policy, config.embedding_dim);

  const std::string dir = config.out_dir + "/features";
  pd::ensure_dir(dir);
  auto manifest = stage_manifest("featurize", config, registry);
  manifest.add_input("articles", annotated_articles_path(config));
  manifest.add_input("embeddings", config.embeddings_path);
  for (const auto mode : config.modes) {
    const auto matrix = pd::featurize_corpus(corpus, table, mode, registry);
    const std::string path = dir + "/" + pd::to_string(mode) + ".bin";
    pd::save_feature_matrix(matrix, path);
    manifest.outputs[pd::to_string(mode)] = path;
    std::cout << pd::to_string(mode) << ": " << matrix.size() << " x "
              << matrix.dim() << " -> " << path << "\n";
  }
  manifest.versions["embedding_checksum"] = pd::to_hex(table.checksum());
  manifest.write(dir);
  return 0;
}

int cmd_split(const CommonOptions& options) {
  pd::RunConfig config = effective_config(options);
  const auto registry = registry_for(config);
  const pd::Corpus corpus = load_pipeline_corpus(config, registry);

  const std::string dir = config.out_dir + "/splits";
  pd::ensure_dir(dir);
  auto manifest = stage_manifest("split", config, registry);
  bool all_ok = true;
  for (const auto& spec : config.splits) {
    const auto assignment = pd::split_corpus(corpus, spec);
    const auto report = pd::verify_assignment(assignment, corpus);
    const std::string name = pd::to_string(spec.kind);
    pd::save_assignment(assignment, dir + "/" + name + ".jsonl");
    pd::write_verify_report_json(report, dir + "/" + name + "_verify.json");
    manifest.outputs[name] = dir + "/" + name + ".jsonl";
    const auto sizes = assignment.set_sizes();
    std::cout << name << ": train/valid/test = " << sizes[0] << "/"
              << sizes[1] << "/" << sizes[2]
              << (report.passed ? " [ok]" : " [FAILED]") << "\n";
    for (const auto& warning : report.warnings) {
      std::cout << "  warning: " << warning << "\n";
    }
    if (!report.passed) {
      for (const auto& check : report.checks) {
        if (!check.passed) {
          std::cout << "  failed check " << check.name << ": " << check.detail
                    << "\n";
        }
      }
      all_ok = false;
    }
  }
  manifest.write(dir);
  return all_ok ? 0 : 3;
}

std::map<pd::FeatureMode, pd::FeatureMatrix> load_features(
    const pd::RunConfig& config) {
  std::map<pd::FeatureMode, pd::FeatureMatrix> features;
  for (const auto mode : config.modes) {
    const std::string path =
        config.out_dir + "/features/" + pd::to_string(mode) + ".bin";
    if (!pd::file_exists(path)) {
      throw pd::ConfigError("missing feature matrix " + path +
                            " (run `featurize` first)");
    }
    features.emplace(mode, pd::load_feature_matrix(path));
  }
  return features;
}

std::map<pd::SplitKind, pd::SplitAssignment> load_or_build_assignments(
    const pd::RunConfig& config, const pd::Corpus& corpus) {
  // Prefer the artifacts the `split` stage wrote; rebuild only when absent.
  std::map<pd::SplitKind, pd::SplitAssignment> assignments;
  for (const auto& spec : config.splits) {
    const std::string path =
        config.out_dir + "/splits/" + pd::to_string(spec.kind) + ".jsonl";
    pd::SplitAssignment assignment;
    if (pd::file_exists(path)) {
      assignment.sets = pd::load_assignment(path);
      assignment.provenance = spec;
      for (const auto& article : corpus.articles) {
        if (!assignment.sets.count(article.id)) {
          assignment.excluded_ids.push_back(article.id);
        }
      }
    } else {
      assignment = pd::split_corpus(corpus, spec);
    }
    assignments.emplace(spec.kind, std::move(assignment));
  }
  return assignments;
}

int cmd_train(const CommonOptions& options) {
  pd::RunConfig config = effective_config(options);
  if (config.modes.size() != 1 || config.splits.size() != 1) {
    throw pd::ConfigError("train: pick one --mode and one --split");
  }
  const auto registry = registry_for(config);
  const pd::Corpus corpus = load_pipeline_corpus(config, registry);
  const auto features = load_features(config);
  const auto assignments = load_or_build_assignments(config, corpus);

  const auto mode = config.modes.front();
  const auto kind = config.splits.front().kind;
  const auto& matrix = features.at(mode);
  const auto& assignment = assignments.at(kind);

  pd::TrainConfig train_config = config.train;
  train_config.seed = config.seeds.front();
  const auto train_set =
      pd::subset_dataset(matrix, assignment.sets, pd::SetId::kTrain);
  const auto valid_set =
      pd::subset_dataset(matrix, assignment.sets, pd::SetId::kValid);
  const auto result = pd::train(train_set, valid_set, train_config);

  const std::string dir = config.out_dir + "/runs/single";
  pd::ensure_dir(dir);
  const std::string stem = pd::to_string(kind) + "_" + pd::to_string(mode) +
                           "_seed" + std::to_string(train_config.seed);
  pd::ModelMeta meta{mode, matrix.registry_version,
                     matrix.embedding_checksum};
  pd::save_model(result.best, meta, dir + "/" + stem + ".bin");
  pd::write_history_csv(result.history, dir + "/" + stem + ".csv");
  std::cout << "best epoch " << result.best_epoch << " valid F1 "
            << pd::format_double(result.best_valid_f1, 4) << " -> " << dir
            << "/" << stem << ".bin\n";
  return 0;
}

int cmd_evaluate(const CommonOptions& options, const std::string& model_path) {
  pd::RunConfig config = effective_config(options);
  if (config.splits.size() != 1) {
    throw pd::ConfigError("evaluate: pick one --split");
  }
  const auto registry = registry_for(config);
  const auto [model, meta] = pd::load_model(model_path, &registry,
                                            config.embedding_dim);
  config.modes = {meta.mode};
  const pd::Corpus corpus = load_pipeline_corpus(config, registry);
  const auto features = load_features(config);
  const auto assignments = load_or_build_assignments(config, corpus);
  const auto& matrix = features.at(meta.mode);
  const auto& assignment = assignments.at(config.splits.front().kind);

  const auto test_set =
      pd::subset_dataset(matrix, assignment.sets, pd::SetId::kTest);
  const Eigen::VectorXd scores = pd::forward_batch(model, test_set.x);
  const std::vector<double> score_vec(scores.data(),
                                      scores.data() + scores.size());
  const auto metrics = pd::compute_metrics(score_vec, test_set.labels,
                                           config.train.threshold);
  nlohmann::json j;
  j["split"] = pd::to_string(config.splits.front().kind);
  j["mode"] = pd::to_string(meta.mode);
  j["accuracy"] = metrics.accuracy;
  j["precision"] = metrics.precision;
  j["recall"] = metrics.recall;
  j["f1"] = metrics.f1;
  j["tp"] = metrics.tp;
  j["fp"] = metrics.fp;
  j["tn"] = metrics.tn;
  j["fn"] = metrics.fn;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_ablate(const CommonOptions& options) {
  pd::RunConfig config = effective_config(options);
  const auto registry = registry_for(config);
  const pd::Corpus corpus = load_pipeline_corpus(config, registry);
  const auto features = load_features(config);
  const auto assignments = load_or_build_assignments(config, corpus);

  pd::GridPlan plan;
  for (const auto& spec : config.splits) plan.splits.push_back(spec.kind);
  plan.modes = config.modes;
  plan.seeds = config.seeds;
  plan.train = config.train;
  plan.out_dir = config.out_dir + "/runs";
  plan.workers = config.workers;

  const auto records = pd::run_ablation_grid(features, assignments, plan);
  long ok = 0;
  long failed = 0;
  for (const auto& record : records) (record.ok ? ok : failed) += 1;

  auto manifest = stage_manifest("ablate", config, registry);
  manifest.outputs["records"] = plan.out_dir + "/records.jsonl";
  manifest.write(plan.out_dir);

  std::cout << "grid complete: " << ok << " cells ok, " << failed
            << " failed\n";
  if (failed > 0) {
    for (const auto& record : records) {
      if (!record.ok) {
        std::cout << "  " << record.cell_key() << ": " << record.error
                  << "\n";
      }
    }
    return 4;
  }
  return 0;
}

int cmd_report(const CommonOptions& options) {
  pd::RunConfig config = effective_config(options);
  const auto registry = registry_for(config);
  const auto records = pd::load_records(config.out_dir +
                                        "/runs/records.jsonl");
  if (records.empty()) {
    throw pd::ConfigError("report: no records under " + config.out_dir +
                          "/runs (run `ablate` first)");
  }
  const auto summary = pd::aggregate(records);
  const std::string dir = config.out_dir + "/reports";
  pd::ensure_dir(dir);
  pd::write_results_csv(records, dir + "/results.csv");
  pd::write_summary_csv(summary, dir + "/summary.csv");
  pd::write_mode_summary_csv(summary, dir + "/mode_summary.csv");
  const std::string table = pd::render_summary_table(summary);
  pd::write_file_atomic(dir + "/table.txt", table);

  auto manifest = stage_manifest("report", config, registry);
  manifest.add_input("records", config.out_dir + "/runs/records.jsonl");
  manifest.outputs["summary"] = dir + "/summary.csv";
  manifest.write(dir);

  std::cout << table;
  if (!summary.gaps.empty()) {
    std::cout << "gaps (missing or failed cells):\n";
    for (const auto& gap : summary.gaps) std::cout << "  " << gap << "\n";
  }
  return summary.gaps.empty() ? 0 : 4;
}

int cmd_explain(const CommonOptions& options) {
  pd::RunConfig config = effective_config(options);
  const auto registry = registry_for(config);
  const pd::Corpus corpus = load_pipeline_corpus(config, registry);

  // Explanations target the hybrid models of each configured split.
  const auto mode = pd::FeatureMode::kHybrid;
  pd::RunConfig feature_config = config;
  feature_config.modes = {mode};
  const auto features = load_features(feature_config);
  const auto assignments = load_or_build_assignments(config, corpus);
  const auto& matrix = features.at(mode);

  const std::string dir = config.out_dir + "/explain";
  pd::ensure_dir(dir);
  const std::uint64_t seed = config.seeds.front();

  std::vector<pd::SplitExplanation> rows;
  for (const auto& spec : config.splits) {
    const std::string stem = pd::to_string(spec.kind) + "_" +
                             pd::to_string(mode) + "_seed" +
                             std::to_string(seed);
    const std::string model_path =
        config.out_dir + "/runs/models/" + stem + ".bin";
    if (!pd::file_exists(model_path)) {
      throw pd::ConfigError("explain: missing model " + model_path +
                            " (run `ablate` first)");
    }
    const auto [model, meta] =
        pd::load_model(model_path, &registry, config.embedding_dim);

    const auto& assignment = assignments.at(spec.kind);
    const auto train_set =
        pd::subset_dataset(matrix, assignment.sets, pd::SetId::kTrain);
    const auto test_set =
        pd::subset_dataset(matrix, assignment.sets, pd::SetId::kTest);
    const Eigen::VectorXd baseline =
        config.baseline_policy == "zeros"
            ? Eigen::VectorXd::Zero(matrix.rows.cols()).eval()
            : pd::mean_baseline(train_set.x);

    std::vector<std::string> test_ids;
    for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
      const auto it = assignment.sets.find(matrix.ids[i]);
      if (it != assignment.sets.end() && it->second == pd::SetId::kTest) {
        test_ids.push_back(matrix.ids[i]);
      }
    }
    std::vector<pd::GroupAttribution> attributions;
    attributions.reserve(static_cast<std::size_t>(test_set.x.rows()));
    for (long i = 0; i < test_set.x.rows(); ++i) {
      attributions.push_back(pd::group_shapley(
          model, test_set.x.row(i).transpose(), baseline, mode, registry));
    }
    pd::write_sample_attributions_jsonl(
        test_ids, attributions,
        dir + "/" + pd::to_string(spec.kind) + "_samples.jsonl");
    rows.push_back(pd::mean_abs_attribution(pd::to_string(spec.kind), model,
                                            test_set.x, baseline, mode,
                                            registry));
    std::cout << pd::to_string(spec.kind)
              << ": dominant group = " << rows.back().dominant_group()
              << "\n";
  }
  pd::write_explanation_csv(rows, dir + "/mean_abs.csv");

  auto manifest = stage_manifest("explain", config, registry);
  manifest.outputs["mean_abs"] = dir + "/mean_abs.csv";
  manifest.write(dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"neurosymbolic propaganda detection pipeline"};
  app.require_subcommand(1);

  CommonOptions options;
  std::string preset = "robustness";
  std::string spec_path;
  std::uint64_t gen_seed = 7;
  std::string articles_arg;
  std::string sources_arg;
  std::string model_arg;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config_path, "run config JSON file");
    cmd->add_option("--out", options.out_dir, "output directory");
    cmd->add_option("--mode", options.mode,
                    "feature mode (hybrid, hybrid_lite, text_only)");
    cmd->add_option("--split", options.split,
                    "split kind (random, sources, political, credibility)");
    cmd->add_option("--seeds,--seed", options.seeds, "run seeds");
    cmd->add_option("--workers", options.workers, "worker pool size");
    cmd->add_flag("--offline", options.offline, "use the offline annotator");
    cmd->add_option("--endpoint", options.endpoint,
                    "remote annotator base URL");
    cmd->add_option("--threshold", options.threshold,
                    "classification threshold");
  };

  auto* synth = app.add_subcommand("synth-gen",
                                   "generate a synthetic corpus + embeddings");
  add_common(synth);
  synth->add_option("--preset", preset, "full, robustness, or mini");
  synth->add_option("--spec", spec_path, "synthetic spec JSON file");
  synth->add_option("--gen-seed", gen_seed, "generator seed");

  auto* ingest = app.add_subcommand("ingest", "validate an article corpus");
  add_common(ingest);
  ingest->add_option("--articles", articles_arg, "articles JSONL");
  ingest->add_option("--sources", sources_arg, "source metadata JSONL");

  for (const char* name :
       {"annotate", "featurize", "split", "train", "ablate", "report",
        "explain"}) {
    add_common(app.add_subcommand(
        name, std::string("pipeline stage: ") + name));
  }
  auto* evaluate = app.add_subcommand("evaluate",
                                      "score a saved model on a split");
  add_common(evaluate);
  evaluate->add_option("--model", model_arg, "model file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("synth-gen")) {
      return cmd_synth_gen(options, preset, spec_path, gen_seed);
    }
    if (app.got_subcommand("ingest")) {
      return cmd_ingest(options, articles_arg, sources_arg);
    }
    if (app.got_subcommand("annotate")) return cmd_annotate(options);
    if (app.got_subcommand("featurize")) return cmd_featurize(options);
    if (app.got_subcommand("split")) return cmd_split(options);
    if (app.got_subcommand("train")) return cmd_train(options);
    if (app.got_subcommand("evaluate")) {
      return cmd_evaluate(options, model_arg);
    }
    if (app.got_subcommand("ablate")) return cmd_ablate(options);
    if (app.got_subcommand("report")) return cmd_report(options);
    if (app.got_subcommand("explain")) return cmd_explain(options);
  } catch (const pd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const pd::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const pd::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const pd::TaxonomyError& e) {
    std::cerr << "taxonomy error: " << e.what() << "\n";
    return 4;
  } catch (const pd::NetworkError& e) {
    std::cerr << "network error: " << e.what() << "\n";
    return 4;
  } catch (const pd::ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return 4;
  } catch (const pd::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
