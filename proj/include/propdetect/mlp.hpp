#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "propdetect/features.hpp"
#include "propdetect/registry.hpp"

namespace propdetect {

/// Two-layer perceptron: dense (d -> d) with ReLU, dense (d -> 1) with
/// sigmoid. Hidden width always equals the input width. All parameters
/// are float64.
struct MlpModel {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;

  int input_dim() const { return static_cast<int>(w1.cols()); }
  bool finite() const;
};

/// Seeded uniform init in +-sqrt(6 / (fan_in + fan_out)) per layer.
MlpModel init_model(int dim, std::uint64_t seed);

double sigmoid(double z);

/// Pre-sigmoid activation; scores are sigmoid(logit).
double forward_logit(const MlpModel& model, const Eigen::VectorXd& x);
double forward(const MlpModel& model, const Eigen::VectorXd& x);

/// Row-per-sample batch of logits / scores.
Eigen::VectorXd forward_logit_batch(const MlpModel& model,
                                    const Eigen::MatrixXd& x);
Eigen::VectorXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& x);

/// Binary cross-entropy evaluated from the logit so extreme scores stay
/// finite: max(z,0) - z*y + log1p(exp(-|z|)).
double bce_loss_from_logit(double logit, int label);
double bce_loss(double score, int label);

struct Gradients {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;
};

/// Analytic gradients of the summed BCE loss over the batch (row per
/// sample). The ReLU subgradient at 0 is 0. Also returns the summed loss.
Gradients backward(const MlpModel& model, const Eigen::MatrixXd& x,
                   const Eigen::VectorXd& labels, double* loss_sum = nullptr);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Gradients m;
  Gradients v;
  long step = 0;

  static AdamState zeros_like(const MlpModel& model);
};

/// One bias-corrected Adam update from (already scaled) gradients.
void adam_step(MlpModel& model, const Gradients& grads, AdamState& state,
               const AdamConfig& config);

struct ModelMeta {
  FeatureMode mode = FeatureMode::kHybrid;
  std::string registry_version;
  std::uint64_t embedding_checksum = 0;
};

/// Versioned binary weight file; load(save(m)) reproduces scores bit for
/// bit. When a registry is supplied, the stored mode must agree with the
/// stored input dimension under that registry's layout.
void save_model(const MlpModel& model, const ModelMeta& meta,
                const std::string& path);
std::pair<MlpModel, ModelMeta> load_model(
    const std::string& path, const TechniqueRegistry* registry = nullptr,
    int text_dim = 300);

}  // namespace propdetect
