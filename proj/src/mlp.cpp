#include "propdetect/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "propdetect/error.hpp"
#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"
#include "propdetect/rng.hpp"

namespace propdetect {

namespace {

constexpr char kMagic[8] = {'P', 'D', 'M', 'L', 'P', '0', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError(path + ": truncated file");
  return value;
}

}  // namespace

bool MlpModel::finite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() &&
         std::isfinite(b2);
}

MlpModel init_model(int dim, std::uint64_t seed) {
  if (dim <= 0) throw ValidationError("init_model: dimension must be positive");
  Rng rng(derive_seed(seed, "mlp-init"));
  MlpModel model;
  model.w1.resize(dim, dim);
  model.b1 = Eigen::VectorXd::Zero(dim);
  model.w2.resize(dim);
  model.b2 = 0.0;
  const double limit1 = std::sqrt(6.0 / (dim + dim));
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      model.w1(r, c) = rng.uniform(-limit1, limit1);
    }
  }
  const double limit2 = std::sqrt(6.0 / (dim + 1));
  for (int i = 0; i < dim; ++i) {
    model.w2(i) = rng.uniform(-limit2, limit2);
  }
  return model;
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double forward_logit(const MlpModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.w1.cols()) {
    throw ValidationError("forward: input has " + std::to_string(x.size()) +
                          " dims, model expects " +
                          std::to_string(model.w1.cols()));
  }
  const Eigen::VectorXd hidden =
      ((model.w1 * x + model.b1).array().max(0.0)).matrix();
  return model.w2.dot(hidden) + model.b2;
}

double forward(const MlpModel& model, const Eigen::VectorXd& x) {
  return sigmoid(forward_logit(model, x));
}

Eigen::VectorXd forward_logit_batch(const MlpModel& model,
                                    const Eigen::MatrixXd& x) {
  if (x.cols() != model.w1.cols()) {
    throw ValidationError("forward: batch has " + std::to_string(x.cols()) +
                          " dims, model expects " +
                          std::to_string(model.w1.cols()));
  }
  Eigen::MatrixXd z1 = x * model.w1.transpose();
  z1.rowwise() += model.b1.transpose();
  const Eigen::MatrixXd hidden = z1.array().max(0.0).matrix();
  return (hidden * model.w2).array() + model.b2;
}

Eigen::VectorXd forward_batch(const MlpModel& model,
                              const Eigen::MatrixXd& x) {
  Eigen::VectorXd logits = forward_logit_batch(model, x);
  for (long i = 0; i < logits.size(); ++i) logits(i) = sigmoid(logits(i));
  return logits;
}

double bce_loss_from_logit(double logit, int label) {
  const double y = static_cast<double>(label);
  return std::max(logit, 0.0) - logit * y + std::log1p(std::exp(-std::abs(logit)));
}

double bce_loss(double score, int label) {
  if (score <= 0.0 || score >= 1.0) {
    throw ValidationError("bce_loss: score must lie in (0,1)");
  }
  return bce_loss_from_logit(std::log(score / (1.0 - score)), label);
}

Gradients backward(const MlpModel& model, const Eigen::MatrixXd& x,
                   const Eigen::VectorXd& labels, double* loss_sum) {
  if (x.rows() != labels.size()) {
    throw ValidationError("backward: batch size mismatch");
  }
  Eigen::MatrixXd z1 = x * model.w1.transpose();
  z1.rowwise() += model.b1.transpose();
  const Eigen::MatrixXd hidden = z1.array().max(0.0).matrix();
  const Eigen::VectorXd logits =
      (hidden * model.w2).array() + model.b2;

  if (loss_sum != nullptr) {
    double total = 0.0;
    for (long i = 0; i < logits.size(); ++i) {
      total += bce_loss_from_logit(logits(i), static_cast<int>(labels(i)));
    }
    *loss_sum = total;
  }

  Eigen::VectorXd dlogit(logits.size());
  for (long i = 0; i < logits.size(); ++i) {
    dlogit(i) = sigmoid(logits(i)) - labels(i);
  }

  Gradients grads;
  grads.w2 = hidden.transpose() * dlogit;
  grads.b2 = dlogit.sum();
  // dHidden = dlogit * w2^T, gated by ReLU activity (0 at z1 <= 0).
  Eigen::MatrixXd dz1 = dlogit * model.w2.transpose();
  dz1 = (z1.array() > 0.0).select(dz1, 0.0);
  grads.w1 = dz1.transpose() * x;
  grads.b1 = dz1.colwise().sum().transpose();
  return grads;
}

AdamState AdamState::zeros_like(const MlpModel& model) {
  AdamState state;
  state.m.w1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
  state.m.b1 = Eigen::VectorXd::Zero(model.b1.size());
  state.m.w2 = Eigen::VectorXd::Zero(model.w2.size());
  state.m.b2 = 0.0;
  state.v = state.m;
  state.step = 0;
  return state;
}

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state,
               const AdamConfig& config) {
  state.step += 1;
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double correction1 = 1.0 - std::pow(b1, state.step);
  const double correction2 = 1.0 - std::pow(b2, state.step);
  const double scale = config.learning_rate / correction1;

  state.m.w1 = b1 * state.m.w1 + (1.0 - b1) * grads.w1;
  state.v.w1 =
      b2 * state.v.w1 + (1.0 - b2) * grads.w1.cwiseProduct(grads.w1);
  model.w1.array() -= scale * state.m.w1.array() /
                      ((state.v.w1.array() / correction2).sqrt() + config.eps);

  state.m.b1 = b1 * state.m.b1 + (1.0 - b1) * grads.b1;
  state.v.b1 =
      b2 * state.v.b1 + (1.0 - b2) * grads.b1.cwiseProduct(grads.b1);
  model.b1.array() -= scale * state.m.b1.array() /
                      ((state.v.b1.array() / correction2).sqrt() + config.eps);

  state.m.w2 = b1 * state.m.w2 + (1.0 - b1) * grads.w2;
  state.v.w2 =
      b2 * state.v.w2 + (1.0 - b2) * grads.w2.cwiseProduct(grads.w2);
  model.w2.array() -= scale * state.m.w2.array() /
                      ((state.v.w2.array() / correction2).sqrt() + config.eps);

  state.m.b2 = b1 * state.m.b2 + (1.0 - b1) * grads.b2;
  state.v.b2 = b2 * state.v.b2 + (1.0 - b2) * grads.b2 * grads.b2;
  model.b2 -= scale * state.m.b2 /
              (std::sqrt(state.v.b2 / correction2) + config.eps);
}

void save_model(const MlpModel& model, const ModelMeta& meta,
                const std::string& path) {
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(meta.mode));
  write_pod<std::uint32_t>(
      out, static_cast<std::uint32_t>(meta.registry_version.size()));
  out.write(meta.registry_version.data(),
            static_cast<std::streamsize>(meta.registry_version.size()));
  write_pod<std::uint64_t>(out, meta.embedding_checksum);
  write_pod<std::uint64_t>(out,
                           static_cast<std::uint64_t>(model.input_dim()));
  for (long r = 0; r < model.w1.rows(); ++r) {
    for (long c = 0; c < model.w1.cols(); ++c) {
      write_pod<double>(out, model.w1(r, c));
    }
  }
  for (long i = 0; i < model.b1.size(); ++i) write_pod<double>(out, model.b1(i));
  for (long i = 0; i < model.w2.size(); ++i) write_pod<double>(out, model.w2(i));
  write_pod<double>(out, model.b2);
  write_file_atomic(path, out.str());
}

std::pair<MlpModel, ModelMeta> load_model(const std::string& path,
                                          const TechniqueRegistry* registry,
                                          int text_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError(path + ": not a model file (bad magic/version)");
  }
  ModelMeta meta;
  const auto mode = read_pod<std::uint32_t>(in, path);
  if (mode > 2) throw ParseError(path + ": unknown mode tag");
  meta.mode = static_cast<FeatureMode>(mode);
  const auto version_len = read_pod<std::uint32_t>(in, path);
  if (version_len > (1u << 16)) {
    throw ParseError(path + ": unreasonable version length");
  }
  meta.registry_version.resize(version_len);
  in.read(meta.registry_version.data(), version_len);
  if (!in) throw IoError(path + ": truncated file");
  meta.embedding_checksum = read_pod<std::uint64_t>(in, path);
  const auto dim64 = read_pod<std::uint64_t>(in, path);
  if (dim64 == 0 || dim64 > (1ull << 20)) {
    throw ParseError(path + ": unreasonable input dimension");
  }
  const int dim = static_cast<int>(dim64);

  MlpModel model;
  model.w1.resize(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      model.w1(r, c) = read_pod<double>(in, path);
    }
  }
  model.b1.resize(dim);
  for (int i = 0; i < dim; ++i) model.b1(i) = read_pod<double>(in, path);
  model.w2.resize(dim);
  for (int i = 0; i < dim; ++i) model.w2(i) = read_pod<double>(in, path);
  model.b2 = read_pod<double>(in, path);

  if (registry != nullptr) {
    const int expected =
        layout_for(meta.mode, text_dim, *registry).total();
    if (expected != dim) {
      throw ValidationError(
          path + ": mode " + to_string(meta.mode) + " implies " +
          std::to_string(expected) + " input dims, file stores " +
          std::to_string(dim));
    }
  }
  return {std::move(model), std::move(meta)};
}

}  // namespace propdetect
