#include "propdetect/config.hpp"

#include <json.hpp>
#include <sstream>

#include "propdetect/error.hpp"
#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"
#include "propdetect/manifest.hpp"

namespace propdetect {

using nlohmann::json;

namespace {

json splits_to_json(const std::vector<SplitSpec>& splits) {
  json out = json::array();
  for (const auto& spec : splits) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["ratios"] = spec.ratios;
    j["seed"] = spec.seed;
    if (!spec.source_assignments.empty()) {
      json map;
      for (const auto& [source, set] : spec.source_assignments) {
        switch (set) {
          case SourceSet::kTrain: map[source] = "train"; break;
          case SourceSet::kValid: map[source] = "valid"; break;
          case SourceSet::kTest: map[source] = "test"; break;
          case SourceSet::kValidTestShared:
            map[source] = "valid+test-shared";
            break;
        }
      }
      j["source_map"] = map;
    }
    out.push_back(j);
  }
  return out;
}

SourceSet source_set_from_string(const std::string& name) {
  if (name == "train") return SourceSet::kTrain;
  if (name == "valid") return SourceSet::kValid;
  if (name == "test") return SourceSet::kTest;
  if (name == "valid+test-shared" || name == "shared") {
    return SourceSet::kValidTestShared;
  }
  throw ParseError("unknown source set '" + name + "'");
}

}  // namespace

std::string RunConfig::canonical_json() const {
  json j;
  j["paths"] = {{"articles", articles_path},
                {"sources", sources_path},
                {"embeddings", embeddings_path},
                {"lexicons", lexicons_path},
                {"registry", registry_path},
                {"out", out_dir}};
  j["annotator"] = {{"offline", offline},
                    {"base_url", endpoint.base_url},
                    {"genre_path", endpoint.genre_path},
                    {"topic_path", endpoint.topic_path},
                    {"persuasion_path", endpoint.persuasion_path},
                    {"timeout_seconds", endpoint.timeout_seconds},
                    {"retry_budget", endpoint.retry_budget},
                    {"requests_per_second", endpoint.requests_per_second}};
  j["embedding_dim"] = embedding_dim;
  j["oov_policy"] = to_string(oov_policy);
  json mode_list = json::array();
  for (const auto mode : modes) mode_list.push_back(to_string(mode));
  j["modes"] = mode_list;
  j["splits"] = splits_to_json(splits);
  j["train"] = {{"learning_rate", train.learning_rate},
                {"max_epochs", train.max_epochs},
                {"patience", train.patience},
                {"batch_size", train.batch_size},
                {"threshold", train.threshold},
                {"adam_beta1", train.adam_beta1},
                {"adam_beta2", train.adam_beta2},
                {"adam_eps", train.adam_eps}};
  j["seeds"] = seeds;
  j["workers"] = workers;
  j["baseline_policy"] = baseline_policy;
  return j.dump();
}

std::string RunConfig::fingerprint() const {
  return fingerprint_of_json(canonical_json());
}

RunConfig default_run_config() {
  RunConfig config;
  for (const auto kind :
       {SplitKind::kRandom, SplitKind::kSources, SplitKind::kPolitical,
        SplitKind::kCredibility}) {
    SplitSpec spec;
    spec.kind = kind;
    spec.seed = 17;
    if (kind == SplitKind::kSources) {
      spec.source_assignments = default_source_assignments();
    }
    config.splits.push_back(spec);
  }
  return config;
}

RunConfig run_config_from_json_text(const std::string& text,
                                    const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }

  RunConfig config = default_run_config();
  std::vector<std::string> violations;
  const auto complain = [&](const std::string& message) {
    violations.push_back(message);
  };

  try {
    if (doc.contains("paths")) {
      const auto& paths = doc.at("paths");
      config.articles_path = paths.value("articles", config.articles_path);
      config.sources_path = paths.value("sources", config.sources_path);
      config.embeddings_path =
          paths.value("embeddings", config.embeddings_path);
      config.lexicons_path = paths.value("lexicons", config.lexicons_path);
      config.registry_path = paths.value("registry", config.registry_path);
      config.out_dir = paths.value("out", config.out_dir);
    }
    if (doc.contains("annotator")) {
      const auto& annotator = doc.at("annotator");
      config.offline = annotator.value("offline", config.offline);
      config.endpoint.base_url =
          annotator.value("base_url", config.endpoint.base_url);
      config.endpoint.genre_path =
          annotator.value("genre_path", config.endpoint.genre_path);
      config.endpoint.topic_path =
          annotator.value("topic_path", config.endpoint.topic_path);
      config.endpoint.persuasion_path = annotator.value(
          "persuasion_path", config.endpoint.persuasion_path);
      config.endpoint.timeout_seconds = annotator.value(
          "timeout_seconds", config.endpoint.timeout_seconds);
      config.endpoint.retry_budget =
          annotator.value("retry_budget", config.endpoint.retry_budget);
      config.endpoint.requests_per_second = annotator.value(
          "requests_per_second", config.endpoint.requests_per_second);
      if (!config.offline && config.endpoint.base_url.empty()) {
        complain("annotator: remote mode needs a base_url");
      }
    }
    config.embedding_dim = doc.value("embedding_dim", config.embedding_dim);
    if (config.embedding_dim < 1) complain("embedding_dim must be positive");
    if (doc.contains("oov_policy")) {
      try {
        config.oov_policy =
            oov_policy_from_string(doc.at("oov_policy").get<std::string>());
      } catch (const ParseError& e) {
        complain(e.what());
      }
    }
    if (doc.contains("modes")) {
      config.modes.clear();
      for (const auto& mode : doc.at("modes")) {
        try {
          config.modes.push_back(
              feature_mode_from_string(mode.get<std::string>()));
        } catch (const ParseError& e) {
          complain(e.what());
        }
      }
      if (config.modes.empty()) complain("modes: empty list");
    }
    if (doc.contains("splits")) {
      config.splits.clear();
      for (const auto& s : doc.at("splits")) {
        SplitSpec spec;
        try {
          spec.kind = split_kind_from_string(s.at("kind").get<std::string>());
        } catch (const ParseError& e) {
          complain(e.what());
          continue;
        }
        if (s.contains("ratios")) {
          const auto ratios = s.at("ratios").get<std::vector<double>>();
          if (ratios.size() != 3) {
            complain("split " + to_string(spec.kind) +
                     ": ratios must have 3 entries");
          } else {
            spec.ratios = {ratios[0], ratios[1], ratios[2]};
          }
        }
        spec.seed = s.value("seed", spec.seed);
        if (s.contains("source_map")) {
          for (const auto& [source, set] : s.at("source_map").items()) {
            try {
              spec.source_assignments[source] =
                  source_set_from_string(set.get<std::string>());
            } catch (const ParseError& e) {
              complain(e.what());
            }
          }
        } else if (spec.kind == SplitKind::kSources) {
          spec.source_assignments = default_source_assignments();
        }
        try {
          spec.validate();
        } catch (const ConfigError& e) {
          complain("split " + to_string(spec.kind) + ": " + e.what());
        }
        config.splits.push_back(std::move(spec));
      }
      if (config.splits.empty()) complain("splits: empty list");
    }
    if (doc.contains("train")) {
      const auto& t = doc.at("train");
      config.train.learning_rate =
          t.value("learning_rate", config.train.learning_rate);
      config.train.max_epochs = t.value("max_epochs", config.train.max_epochs);
      config.train.patience = t.value("patience", config.train.patience);
      config.train.batch_size = t.value("batch_size", config.train.batch_size);
      config.train.threshold = t.value("threshold", config.train.threshold);
      config.train.adam_beta1 =
          t.value("adam_beta1", config.train.adam_beta1);
      config.train.adam_beta2 =
          t.value("adam_beta2", config.train.adam_beta2);
      config.train.adam_eps = t.value("adam_eps", config.train.adam_eps);
      try {
        config.train.validate();
      } catch (const ConfigError& e) {
        complain(std::string("train: ") + e.what());
      }
    }
    if (doc.contains("seeds")) {
      config.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
      if (config.seeds.empty()) complain("seeds: empty list");
    }
    config.workers = doc.value("workers", config.workers);
    if (config.workers < 1) complain("workers must be >= 1");
    config.baseline_policy =
        doc.value("baseline_policy", config.baseline_policy);
    if (config.baseline_policy != "train_mean" &&
        config.baseline_policy != "zeros") {
      complain("baseline_policy must be 'train_mean' or 'zeros'");
    }
  } catch (const json::exception& e) {
    complain(origin + ": " + e.what());
  }

  if (!violations.empty()) {
    std::ostringstream all;
    all << origin << ": " << violations.size() << " violation(s):";
    for (const auto& violation : violations) all << "\n  - " << violation;
    throw ConfigError(all.str());
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json_text(read_file(path), path);
}

}  // namespace propdetect
