#include "propdetect/shapley.hpp"

#include <array>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "propdetect/error.hpp"
#include "propdetect/io_util.hpp"

namespace propdetect {

namespace {

struct GroupSlices {
  std::array<int, 4> offset{};
  std::array<int, 4> length{};  // 0 for absent groups
  int group_count = 1;          // 1 in text_only, 4 otherwise
};

GroupSlices slices_for(FeatureMode mode, int total_dim,
                       const TechniqueRegistry& registry) {
  GroupSlices slices;
  if (mode == FeatureMode::kTextOnly) {
    slices.offset = {0, 0, 0, 0};
    slices.length = {total_dim, 0, 0, 0};
    slices.group_count = 1;
    return slices;
  }
  const int extras = registry.genre_count() + registry.topic_count() +
                     (mode == FeatureMode::kHybrid ? registry.fine_count()
                                                   : registry.coarse_count());
  const int text_dim = total_dim - extras;
  if (text_dim <= 0) {
    throw ValidationError("group_shapley: vector too short for mode " +
                          to_string(mode));
  }
  const FeatureLayout layout = layout_for(mode, text_dim, registry);
  slices.offset = {layout.text_offset, layout.genre_offset,
                   layout.topic_offset, layout.persuasion_offset};
  slices.length = {layout.text_len, layout.genre_len, layout.topic_len,
                   layout.persuasion_len};
  slices.group_count = 4;
  return slices;
}

// |S|! (g - |S| - 1)! / g!
double shapley_weight(int coalition_size, int group_count) {
  auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return factorial(coalition_size) *
         factorial(group_count - coalition_size - 1) /
         factorial(group_count);
}

}  // namespace

GroupAttribution group_shapley(const MlpModel& model,
                               const Eigen::VectorXd& x,
                               const Eigen::VectorXd& baseline,
                               FeatureMode mode,
                               const TechniqueRegistry& registry) {
  if (x.size() != baseline.size()) {
    throw ValidationError("group_shapley: sample and baseline differ in size");
  }
  if (x.size() != model.input_dim()) {
    throw ValidationError("group_shapley: vector width does not match model");
  }
  const GroupSlices slices =
      slices_for(mode, static_cast<int>(x.size()), registry);
  const int groups = slices.group_count;
  const int coalitions = 1 << groups;

  // Coalition value: model score with member groups taken from x and the
  // rest from the baseline.
  std::vector<double> value(coalitions);
  Eigen::VectorXd composed(x.size());
  for (int mask = 0; mask < coalitions; ++mask) {
    composed = baseline;
    for (int g = 0; g < groups; ++g) {
      if ((mask >> g) & 1) {
        composed.segment(slices.offset[g], slices.length[g]) =
            x.segment(slices.offset[g], slices.length[g]);
      }
    }
    value[mask] = forward(model, composed);
  }

  std::array<double, 4> phi = {0.0, 0.0, 0.0, 0.0};
  for (int g = 0; g < groups; ++g) {
    for (int mask = 0; mask < coalitions; ++mask) {
      if ((mask >> g) & 1) continue;
      const int size = __builtin_popcount(static_cast<unsigned>(mask));
      phi[g] += shapley_weight(size, groups) *
                (value[mask | (1 << g)] - value[mask]);
    }
  }

  GroupAttribution attribution;
  attribution.baseline_score = value[0];
  attribution.sample_score = value[coalitions - 1];
  attribution.text = phi[0];
  attribution.genre = phi[1];
  attribution.topic = phi[2];
  attribution.persuasion = phi[3];
  return attribution;
}

Eigen::VectorXd mean_baseline(const Eigen::MatrixXd& train_rows) {
  if (train_rows.rows() == 0) {
    throw ValidationError("mean_baseline: no rows");
  }
  return train_rows.colwise().mean().transpose();
}

std::string SplitExplanation::dominant_group() const {
  std::string best = "text";
  double best_value = text;
  if (genre > best_value) { best = "genre"; best_value = genre; }
  if (topic > best_value) { best = "topic"; best_value = topic; }
  if (persuasion > best_value) { best = "persuasion"; best_value = persuasion; }
  return best;
}

SplitExplanation mean_abs_attribution(const std::string& split_name,
                                      const MlpModel& model,
                                      const Eigen::MatrixXd& samples,
                                      const Eigen::VectorXd& baseline,
                                      FeatureMode mode,
                                      const TechniqueRegistry& registry) {
  if (samples.rows() == 0) {
    throw ValidationError("mean_abs_attribution: empty sample set");
  }
  SplitExplanation explanation;
  explanation.split = split_name;
  explanation.samples = static_cast<std::size_t>(samples.rows());
  for (long i = 0; i < samples.rows(); ++i) {
    const GroupAttribution a = group_shapley(
        model, samples.row(i).transpose(), baseline, mode, registry);
    explanation.text += std::abs(a.text);
    explanation.genre += std::abs(a.genre);
    explanation.topic += std::abs(a.topic);
    explanation.persuasion += std::abs(a.persuasion);
  }
  const double n = static_cast<double>(samples.rows());
  explanation.text /= n;
  explanation.genre /= n;
  explanation.topic /= n;
  explanation.persuasion /= n;
  return explanation;
}

void write_explanation_csv(const std::vector<SplitExplanation>& rows,
                           const std::string& path) {
  std::ostringstream out;
  out << "split,group,mean_abs_value\n";
  for (const auto& row : rows) {
    out << row.split << ",text," << format_double(row.text, 8) << "\n";
    out << row.split << ",genre," << format_double(row.genre, 8) << "\n";
    out << row.split << ",topic," << format_double(row.topic, 8) << "\n";
    out << row.split << ",persuasion," << format_double(row.persuasion, 8)
        << "\n";
  }
  write_file_atomic(path, out.str());
}

void write_sample_attributions_jsonl(
    const std::vector<std::string>& ids,
    const std::vector<GroupAttribution>& attributions,
    const std::string& path) {
  if (ids.size() != attributions.size()) {
    throw ValidationError("attribution/id count mismatch");
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    nlohmann::json j;
    j["id"] = ids[i];
    j["text"] = attributions[i].text;
    j["genre"] = attributions[i].genre;
    j["topic"] = attributions[i].topic;
    j["persuasion"] = attributions[i].persuasion;
    j["baseline_score"] = attributions[i].baseline_score;
    j["sample_score"] = attributions[i].sample_score;
    out << j.dump() << "\n";
  }
  write_file_atomic(path, out.str());
}

}  // namespace propdetect
