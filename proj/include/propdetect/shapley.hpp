#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "propdetect/features.hpp"
#include "propdetect/mlp.hpp"

namespace propdetect {

/// Attribution of a single prediction to the four feature groups
/// (text, genre, topic, persuasion) on the score scale. Efficiency:
/// the group values sum to sample_score - baseline_score.
struct GroupAttribution {
  double text = 0.0;
  double genre = 0.0;
  double topic = 0.0;
  double persuasion = 0.0;
  double baseline_score = 0.0;
  double sample_score = 0.0;

  double sum() const { return text + genre + topic + persuasion; }
};

/// Exact group-level Shapley values by enumerating all coalitions of the
/// feature groups (16 in hybrid modes, 2 in text_only). A coalition's
/// value is the model score on a vector whose member groups come from x
/// and whose other groups come from the baseline.
GroupAttribution group_shapley(const MlpModel& model,
                               const Eigen::VectorXd& x,
                               const Eigen::VectorXd& baseline,
                               FeatureMode mode,
                               const TechniqueRegistry& registry);

/// Column mean of the training rows; the default baseline policy.
Eigen::VectorXd mean_baseline(const Eigen::MatrixXd& train_rows);

struct SplitExplanation {
  std::string split;
  // mean over samples of |group attribution|, one entry per group
  double text = 0.0;
  double genre = 0.0;
  double topic = 0.0;
  double persuasion = 0.0;
  std::size_t samples = 0;

  // Group name with the largest mean absolute attribution.
  std::string dominant_group() const;
};

SplitExplanation mean_abs_attribution(const std::string& split_name,
                                      const MlpModel& model,
                                      const Eigen::MatrixXd& samples,
                                      const Eigen::VectorXd& baseline,
                                      FeatureMode mode,
                                      const TechniqueRegistry& registry);

void write_explanation_csv(const std::vector<SplitExplanation>& rows,
                           const std::string& path);

void write_sample_attributions_jsonl(
    const std::vector<std::string>& ids,
    const std::vector<GroupAttribution>& attributions,
    const std::string& path);

}  // namespace propdetect
