#pragma once

#include <span>
#include <vector>

namespace propdetect {

/// Binary classification metrics with propaganda (label 1) as the
/// positive class. Degenerate denominators yield 0 by definition, so a
/// model predicting no positives scores F1 = 0.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
};

/// Confusion counts at the threshold (prediction = score >= threshold)
/// and the derived metrics. Throws on empty or mismatched inputs.
Metrics compute_metrics(std::span<const double> scores,
                        std::span<const int> labels, double threshold);

double mean(std::span<const double> values);

/// Sample variance (n-1 denominator); 0 for fewer than two values.
double sample_variance(std::span<const double> values);

}  // namespace propdetect
