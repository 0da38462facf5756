#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "propdetect/mlp.hpp"

namespace propdetect {

struct TrainConfig {
  double learning_rate = 1e-4;
  int max_epochs = 300;
  int patience = 20;
  int batch_size = 32;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

struct Dataset {
  Eigen::MatrixXd x;  // row per sample
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

/// Class-balanced epoch: n draws with replacement where each sample's
/// weight is the reciprocal of its class count, so both classes are
/// expected in equal proportion. Requires both classes present.
std::vector<std::size_t> sample_epoch(const std::vector<int>& labels,
                                      std::uint64_t seed);

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double valid_f1 = 0.0;
};

struct TrainResult {
  MlpModel best;
  std::vector<EpochStats> history;
  int best_epoch = 0;
  double best_valid_f1 = 0.0;
};

/// Runs at most max_epochs epochs of balanced minibatch Adam, evaluating
/// validation F1 at the configured threshold after each epoch. A strict
/// improvement snapshots the model and resets patience; ties do not.
/// Returns the best snapshot. Deterministic per (data, config).
TrainResult train(const Dataset& train_set, const Dataset& valid_set,
                  const TrainConfig& config);

/// Same protocol with an injected validation metric, used by tests to
/// script the early-stopping sequence.
TrainResult train_with_metric(
    const Dataset& train_set, const TrainConfig& config,
    const std::function<double(const MlpModel&, int)>& valid_f1);

void write_history_csv(const std::vector<EpochStats>& history,
                       const std::string& path);

}  // namespace propdetect
