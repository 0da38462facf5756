#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "propdetect/features.hpp"
#include "propdetect/metrics.hpp"
#include "propdetect/splits.hpp"
#include "propdetect/train.hpp"

namespace propdetect {

/// One completed (split, mode, seed) experiment cell.
struct RunRecord {
  SplitKind split = SplitKind::kRandom;
  FeatureMode mode = FeatureMode::kHybrid;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  Metrics test;
  std::string model_path;
  std::string fingerprint;

  std::string cell_key() const;
};

struct GridPlan {
  std::vector<SplitKind> splits;
  std::vector<FeatureMode> modes;
  std::vector<std::uint64_t> seeds;
  TrainConfig train;
  std::string out_dir;  // records.jsonl and model files live here
  int workers = 1;
  bool keep_models = true;
};

/// Runs every (split, mode, seed) cell: train on the split's train rows,
/// early-stop on its validation rows, report test metrics. Cells already
/// present in the record store with a matching fingerprint are skipped;
/// per-cell failures are recorded without aborting the grid. Cells run on
/// a bounded worker pool and the returned records are in grid order.
std::vector<RunRecord> run_ablation_grid(
    const std::map<FeatureMode, FeatureMatrix>& features,
    const std::map<SplitKind, SplitAssignment>& assignments,
    const GridPlan& plan);

/// Rows of the matrix whose articles the assignment places in `set`.
Dataset subset_dataset(const FeatureMatrix& matrix,
                       const std::unordered_map<std::string, SetId>& sets,
                       SetId set);

std::vector<RunRecord> load_records(const std::string& path);
void save_records(const std::vector<RunRecord>& records,
                  const std::string& path);

struct CellSummary {
  SplitKind split;
  FeatureMode mode;
  double mean_accuracy = 0.0;  // percent scale, mean over seeds
  double mean_f1 = 0.0;
  int seeds = 0;
};

struct ModeSummary {
  FeatureMode mode;
  double mean_accuracy = 0.0;  // mean over splits of the per-split means
  double mu_f1 = 0.0;
  double var_f1 = 0.0;  // sample variance (n-1) across splits
};

struct GridSummary {
  std::vector<CellSummary> cells;
  std::vector<ModeSummary> modes;
  std::vector<std::string> gaps;  // missing or failed cells

  const CellSummary* cell(SplitKind split, FeatureMode mode) const;
  const ModeSummary* mode_summary(FeatureMode mode) const;
};

/// Seed-mean metrics per cell and across-split mean/variance per mode,
/// on the percent scale. Incomplete grids are reported in `gaps`.
GridSummary aggregate(const std::vector<RunRecord>& records);

void write_results_csv(const std::vector<RunRecord>& records,
                       const std::string& path);
void write_summary_csv(const GridSummary& summary, const std::string& path);
void write_mode_summary_csv(const GridSummary& summary,
                            const std::string& path);

/// Fixed-width text table of the cell summaries (rows = modes,
/// columns = splits, Acc and F1 per column).
std::string render_summary_table(const GridSummary& summary);

}  // namespace propdetect
