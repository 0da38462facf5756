#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "propdetect/annotator_client.hpp"
#include "propdetect/embeddings.hpp"
#include "propdetect/features.hpp"
#include "propdetect/splits.hpp"
#include "propdetect/train.hpp"

namespace propdetect {

/// One JSON file describing a full experiment; subcommand flags override
/// individual fields.
struct RunConfig {
  // paths
  std::string articles_path;
  std::string sources_path;
  std::string embeddings_path;
  std::string lexicons_path;
  std::string registry_path;  // empty = built-in taxonomy
  std::string out_dir = "out";

  // annotator
  bool offline = true;
  AnnotatorEndpoint endpoint;

  // features
  int embedding_dim = 300;
  OovPolicy oov_policy = OovPolicy::kSkip;
  std::vector<FeatureMode> modes = {FeatureMode::kHybrid,
                                    FeatureMode::kHybridLite,
                                    FeatureMode::kTextOnly};

  // experiment
  std::vector<SplitSpec> splits;
  TrainConfig train;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int workers = 1;

  // explanation baseline: "train_mean" (default) or "zeros"
  std::string baseline_policy = "train_mean";

  std::string canonical_json() const;
  std::string fingerprint() const;
};

/// Parses and validates a config file. Validation reports every
/// violation at once (missing files are checked for the stages that
/// need them).
RunConfig load_run_config(const std::string& path);

RunConfig run_config_from_json_text(const std::string& text,
                                    const std::string& origin);

/// Default experiment: all four splits, all three modes, five seeds.
RunConfig default_run_config();

}  // namespace propdetect
