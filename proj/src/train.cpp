#include "propdetect/train.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "propdetect/error.hpp"
#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"
#include "propdetect/metrics.hpp"
#include "propdetect/rng.hpp"

namespace propdetect {

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (threshold <= 0.0 || threshold >= 1.0) {
    throw ConfigError("threshold must lie strictly between 0 and 1");
  }
}

std::vector<std::size_t> sample_epoch(const std::vector<int>& labels,
                                      std::uint64_t seed) {
  if (labels.empty()) throw ValidationError("sample_epoch: empty dataset");
  std::array<long, 2> counts = {0, 0};
  for (int label : labels) counts[label == 1 ? 1 : 0] += 1;
  if (counts[0] == 0 || counts[1] == 0) {
    throw ValidationError("sample_epoch: dataset must contain both classes");
  }
  std::vector<double> weights(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    weights[i] = 1.0 / static_cast<double>(counts[labels[i] == 1 ? 1 : 0]);
  }
  CumulativeSampler sampler(weights);
  Rng rng(seed);
  std::vector<std::size_t> indices(labels.size());
  for (auto& index : indices) index = sampler.draw(rng);
  return indices;
}

TrainResult train_with_metric(
    const Dataset& train_set, const TrainConfig& config,
    const std::function<double(const MlpModel&, int)>& valid_f1) {
  config.validate();
  if (train_set.size() == 0) throw ValidationError("train: empty train set");
  if (train_set.x.rows() != static_cast<long>(train_set.labels.size())) {
    throw ValidationError("train: feature/label row mismatch");
  }

  const int dim = static_cast<int>(train_set.x.cols());
  MlpModel model = init_model(dim, config.seed);
  AdamState adam = AdamState::zeros_like(model);
  const AdamConfig adam_config{config.learning_rate, config.adam_beta1,
                               config.adam_beta2, config.adam_eps};

  TrainResult result;
  result.best = model;
  result.best_epoch = 0;
  result.best_valid_f1 = -1.0;
  int epochs_since_improvement = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto order =
        sample_epoch(train_set.labels,
                     derive_seed(config.seed, "epoch-" + std::to_string(epoch)));
    double loss_total = 0.0;
    long samples_seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t count =
          std::min<std::size_t>(config.batch_size, order.size() - start);
      Eigen::MatrixXd batch(count, dim);
      Eigen::VectorXd labels(count);
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t row = order[start + k];
        batch.row(static_cast<long>(k)) = train_set.x.row(
            static_cast<long>(row));
        labels(static_cast<long>(k)) =
            static_cast<double>(train_set.labels[row]);
      }
      double batch_loss_sum = 0.0;
      Gradients grads = backward(model, batch, labels, &batch_loss_sum);
      // Mean-reduced loss: scale the summed gradients by the batch size.
      const double inv = 1.0 / static_cast<double>(count);
      grads.w1 *= inv;
      grads.b1 *= inv;
      grads.w2 *= inv;
      grads.b2 *= inv;
      adam_step(model, grads, adam, adam_config);
      if (!std::isfinite(batch_loss_sum) || !model.finite()) {
        throw Error("train: non-finite loss or parameters at epoch " +
                    std::to_string(epoch) + " (lr=" +
                    format_double(config.learning_rate, 8) + ")");
      }
      loss_total += batch_loss_sum;
      samples_seen += static_cast<long>(count);
    }

    const double f1 = valid_f1(model, epoch);
    result.history.push_back(
        {epoch, loss_total / static_cast<double>(samples_seen), f1});

    if (f1 > result.best_valid_f1) {
      result.best_valid_f1 = f1;
      result.best_epoch = epoch;
      result.best = model;
      epochs_since_improvement = 0;
    } else {
      ++epochs_since_improvement;
      if (epochs_since_improvement >= config.patience) break;
    }
  }
  return result;
}

TrainResult train(const Dataset& train_set, const Dataset& valid_set,
                  const TrainConfig& config) {
  if (valid_set.size() == 0) throw ValidationError("train: empty valid set");
  if (valid_set.x.cols() != train_set.x.cols()) {
    throw ValidationError("train: train/valid feature width mismatch");
  }
  return train_with_metric(
      train_set, config, [&](const MlpModel& model, int) {
        const Eigen::VectorXd scores = forward_batch(model, valid_set.x);
        const std::vector<double> score_vec(scores.data(),
                                            scores.data() + scores.size());
        return compute_metrics(score_vec, valid_set.labels, config.threshold)
            .f1;
      });
}

void write_history_csv(const std::vector<EpochStats>& history,
                       const std::string& path) {
  std::ostringstream out;
  out << "epoch,train_loss,valid_f1\n";
  for (const auto& row : history) {
    out << row.epoch << ',' << format_double(row.train_loss, 8) << ','
        << format_double(row.valid_f1, 6) << "\n";
  }
  write_file_atomic(path, out.str());
}

}  // namespace propdetect
