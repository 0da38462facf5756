#include "propdetect/metrics.hpp"

#include "propdetect/error.hpp"

namespace propdetect {

Metrics compute_metrics(std::span<const double> scores,
                        std::span<const int> labels, double threshold) {
  if (scores.size() != labels.size()) {
    throw ValidationError("compute_metrics: " + std::to_string(scores.size()) +
                          " scores vs " + std::to_string(labels.size()) +
                          " labels");
  }
  if (scores.empty()) throw ValidationError("compute_metrics: empty input");

  Metrics m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++m.tp;
    else if (predicted && !actual) ++m.fp;
    else if (!predicted && actual) ++m.fn;
    else ++m.tn;
  }
  const double total = static_cast<double>(m.total());
  m.accuracy = static_cast<double>(m.tp + m.tn) / total;
  m.precision = (m.tp + m.fp) > 0
                    ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp)
                    : 0.0;
  m.recall = (m.tp + m.fn) > 0
                 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn)
                 : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean: empty input");
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(values.size() - 1);
}

}  // namespace propdetect
