#include "propdetect/grid.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "propdetect/error.hpp"
#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"

namespace propdetect {

using nlohmann::json;

std::string RunRecord::cell_key() const {
  return to_string(split) + "|" + to_string(mode) + "|" +
         std::to_string(seed);
}

Dataset subset_dataset(const FeatureMatrix& matrix,
                       const std::unordered_map<std::string, SetId>& sets,
                       SetId set) {
  std::vector<long> rows;
  for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
    const auto it = sets.find(matrix.ids[i]);
    if (it != sets.end() && it->second == set) {
      rows.push_back(static_cast<long>(i));
    }
  }
  Dataset data;
  data.x.resize(static_cast<long>(rows.size()), matrix.rows.cols());
  data.labels.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    data.x.row(static_cast<long>(k)) = matrix.rows.row(rows[k]);
    data.labels.push_back(matrix.labels[static_cast<std::size_t>(rows[k])]);
  }
  return data;
}

namespace {

std::uint64_t assignment_hash(const SplitAssignment& assignment) {
  std::vector<std::pair<std::string, SetId>> rows(assignment.sets.begin(),
                                                  assignment.sets.end());
  std::sort(rows.begin(), rows.end());
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& [id, set] : rows) {
    h = fnv1a64(id, h);
    h = fnv1a64(to_string(set), h);
  }
  return h;
}

std::string cell_fingerprint(SplitKind split, FeatureMode mode,
                             std::uint64_t seed, const TrainConfig& config,
                             const FeatureMatrix& matrix,
                             std::uint64_t assignment_digest) {
  json j;
  j["split"] = to_string(split);
  j["mode"] = to_string(mode);
  j["seed"] = seed;
  j["learning_rate"] = config.learning_rate;
  j["max_epochs"] = config.max_epochs;
  j["patience"] = config.patience;
  j["batch_size"] = config.batch_size;
  j["threshold"] = config.threshold;
  j["adam"] = {config.adam_beta1, config.adam_beta2, config.adam_eps};
  j["features"] = to_hex(matrix.content_fingerprint());
  j["embedding"] = to_hex(matrix.embedding_checksum);
  j["registry"] = matrix.registry_version;
  j["assignment"] = to_hex(assignment_digest);
  return to_hex(fnv1a64(j.dump()));
}

json record_to_json(const RunRecord& record) {
  json j;
  j["split"] = to_string(record.split);
  j["mode"] = to_string(record.mode);
  j["seed"] = record.seed;
  j["ok"] = record.ok;
  j["error"] = record.error;
  j["fingerprint"] = record.fingerprint;
  j["model_path"] = record.model_path;
  j["metrics"] = {{"accuracy", record.test.accuracy},
                  {"precision", record.test.precision},
                  {"recall", record.test.recall},
                  {"f1", record.test.f1},
                  {"tp", record.test.tp},
                  {"fp", record.test.fp},
                  {"tn", record.test.tn},
                  {"fn", record.test.fn}};
  return j;
}

RunRecord record_from_json(const json& j, const std::string& where) {
  RunRecord record;
  try {
    record.split = split_kind_from_string(j.at("split").get<std::string>());
    record.mode = feature_mode_from_string(j.at("mode").get<std::string>());
    record.seed = j.at("seed").get<std::uint64_t>();
    record.ok = j.at("ok").get<bool>();
    record.error = j.value("error", std::string());
    record.fingerprint = j.value("fingerprint", std::string());
    record.model_path = j.value("model_path", std::string());
    const auto& m = j.at("metrics");
    record.test.accuracy = m.at("accuracy").get<double>();
    record.test.precision = m.at("precision").get<double>();
    record.test.recall = m.at("recall").get<double>();
    record.test.f1 = m.at("f1").get<double>();
    record.test.tp = m.at("tp").get<long>();
    record.test.fp = m.at("fp").get<long>();
    record.test.tn = m.at("tn").get<long>();
    record.test.fn = m.at("fn").get<long>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  return record;
}

}  // namespace

std::vector<RunRecord> load_records(const std::string& path) {
  std::vector<RunRecord> records;
  if (!file_exists(path)) return records;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    try {
      records.push_back(record_from_json(json::parse(lines[i]), where));
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return records;
}

void save_records(const std::vector<RunRecord>& records,
                  const std::string& path) {
  std::ostringstream out;
  for (const auto& record : records) {
    out << record_to_json(record).dump() << "\n";
  }
  write_file_atomic(path, out.str());
}

std::vector<RunRecord> run_ablation_grid(
    const std::map<FeatureMode, FeatureMatrix>& features,
    const std::map<SplitKind, SplitAssignment>& assignments,
    const GridPlan& plan) {
  if (plan.splits.empty() || plan.modes.empty() || plan.seeds.empty()) {
    throw ConfigError("ablation grid: empty split/mode/seed list");
  }
  ensure_dir(plan.out_dir);
  const std::string records_path = plan.out_dir + "/records.jsonl";
  const std::string models_dir = plan.out_dir + "/models";
  const std::string history_dir = plan.out_dir + "/history";
  if (plan.keep_models) {
    ensure_dir(models_dir);
    ensure_dir(history_dir);
  }

  std::map<SplitKind, std::uint64_t> assignment_digests;
  for (const auto& [kind, assignment] : assignments) {
    assignment_digests[kind] = assignment_hash(assignment);
  }

  // Completed cells from a previous (possibly interrupted) run.
  std::map<std::string, RunRecord> done;
  for (auto& record : load_records(records_path)) {
    if (record.ok) done[record.cell_key()] = std::move(record);
  }

  struct Cell {
    SplitKind split;
    FeatureMode mode;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto split : plan.splits) {
    if (!assignments.count(split)) {
      throw ConfigError("ablation grid: no assignment for split " +
                        to_string(split));
    }
    for (const auto mode : plan.modes) {
      if (!features.count(mode)) {
        throw ConfigError("ablation grid: no features for mode " +
                          to_string(mode));
      }
      for (const auto seed : plan.seeds) {
        cells.push_back({split, mode, seed});
      }
    }
  }

  std::vector<RunRecord> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;
  std::ofstream record_stream(records_path,
                              std::ios::binary | std::ios::app);
  if (!record_stream) {
    throw IoError("cannot append to " + records_path);
  }

  const auto run_cell = [&](const Cell& cell) {
    const FeatureMatrix& matrix = features.at(cell.mode);
    const SplitAssignment& assignment = assignments.at(cell.split);

    RunRecord record;
    record.split = cell.split;
    record.mode = cell.mode;
    record.seed = cell.seed;
    record.fingerprint =
        cell_fingerprint(cell.split, cell.mode, cell.seed, plan.train, matrix,
                         assignment_digests.at(cell.split));

    {
      const auto it = done.find(record.cell_key());
      if (it != done.end() && it->second.fingerprint == record.fingerprint) {
        return it->second;  // resumed cell, keep prior metrics untouched
      }
    }

    try {
      TrainConfig config = plan.train;
      config.seed = cell.seed;
      const Dataset train_set =
          subset_dataset(matrix, assignment.sets, SetId::kTrain);
      const Dataset valid_set =
          subset_dataset(matrix, assignment.sets, SetId::kValid);
      const Dataset test_set =
          subset_dataset(matrix, assignment.sets, SetId::kTest);
      if (test_set.size() == 0) {
        throw ValidationError("empty test set");
      }
      const TrainResult trained = train(train_set, valid_set, config);

      const Eigen::VectorXd scores = forward_batch(trained.best, test_set.x);
      const std::vector<double> score_vec(scores.data(),
                                          scores.data() + scores.size());
      record.test =
          compute_metrics(score_vec, test_set.labels, config.threshold);
      record.ok = true;

      if (plan.keep_models) {
        const std::string stem = to_string(cell.split) + "_" +
                                 to_string(cell.mode) + "_seed" +
                                 std::to_string(cell.seed);
        record.model_path = models_dir + "/" + stem + ".bin";
        ModelMeta meta{cell.mode, matrix.registry_version,
                       matrix.embedding_checksum};
        save_model(trained.best, meta, record.model_path);
        write_history_csv(trained.history,
                          history_dir + "/" + stem + ".csv");
      }
    } catch (const std::exception& e) {
      record.ok = false;
      record.error = e.what();
    }
    return record;
  };

  const auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      RunRecord record = run_cell(cells[k]);
      {
        std::lock_guard<std::mutex> lock(io_mutex);
        record_stream << record_to_json(record).dump() << "\n";
        record_stream.flush();
      }
      results[k] = std::move(record);
    }
  };

  const int thread_count = std::max(
      1, std::min<int>(plan.workers, static_cast<int>(cells.size())));
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }
  return results;
}

const CellSummary* GridSummary::cell(SplitKind split, FeatureMode mode) const {
  for (const auto& c : cells) {
    if (c.split == split && c.mode == mode) return &c;
  }
  return nullptr;
}

const ModeSummary* GridSummary::mode_summary(FeatureMode mode) const {
  for (const auto& m : modes) {
    if (m.mode == mode) return &m;
  }
  return nullptr;
}

GridSummary aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) throw ValidationError("aggregate: no records");

  std::set<SplitKind> splits;
  std::set<FeatureMode> modes;
  std::set<std::uint64_t> seeds;
  // Last record wins per cell so resumed grids aggregate cleanly.
  std::map<std::string, const RunRecord*> by_cell;
  for (const auto& record : records) {
    splits.insert(record.split);
    modes.insert(record.mode);
    seeds.insert(record.seed);
    by_cell[record.cell_key()] = &record;
  }

  GridSummary summary;
  for (const auto mode : modes) {
    std::vector<double> split_f1;
    std::vector<double> split_acc;
    for (const auto split : splits) {
      std::vector<double> f1;
      std::vector<double> acc;
      for (const auto seed : seeds) {
        const std::string key = to_string(split) + "|" + to_string(mode) +
                                "|" + std::to_string(seed);
        const auto it = by_cell.find(key);
        if (it == by_cell.end() || !it->second->ok) {
          summary.gaps.push_back(key + (it == by_cell.end()
                                            ? " missing"
                                            : " failed: " +
                                                  it->second->error));
          continue;
        }
        f1.push_back(it->second->test.f1 * 100.0);
        acc.push_back(it->second->test.accuracy * 100.0);
      }
      if (f1.empty()) continue;
      CellSummary cell;
      cell.split = split;
      cell.mode = mode;
      cell.mean_f1 = mean(f1);
      cell.mean_accuracy = mean(acc);
      cell.seeds = static_cast<int>(f1.size());
      summary.cells.push_back(cell);
      split_f1.push_back(cell.mean_f1);
      split_acc.push_back(cell.mean_accuracy);
    }
    if (split_f1.empty()) continue;
    ModeSummary mode_summary;
    mode_summary.mode = mode;
    mode_summary.mu_f1 = mean(split_f1);
    mode_summary.var_f1 = sample_variance(split_f1);
    mode_summary.mean_accuracy = mean(split_acc);
    summary.modes.push_back(mode_summary);
  }
  return summary;
}

void write_results_csv(const std::vector<RunRecord>& records,
                       const std::string& path) {
  std::vector<const RunRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& record : records) sorted.push_back(&record);
  std::sort(sorted.begin(), sorted.end(),
            [](const RunRecord* a, const RunRecord* b) {
              return std::tuple(to_string(a->split), to_string(a->mode),
                                a->seed) <
                     std::tuple(to_string(b->split), to_string(b->mode),
                                b->seed);
            });
  std::ostringstream out;
  out << "split,mode,seed,accuracy,f1,precision,recall\n";
  for (const auto* record : sorted) {
    if (!record->ok) continue;
    out << to_string(record->split) << ',' << to_string(record->mode) << ','
        << record->seed << ',' << format_double(record->test.accuracy, 6)
        << ',' << format_double(record->test.f1, 6) << ','
        << format_double(record->test.precision, 6) << ','
        << format_double(record->test.recall, 6) << "\n";
  }
  write_file_atomic(path, out.str());
}

void write_summary_csv(const GridSummary& summary, const std::string& path) {
  std::ostringstream out;
  out << "split,mode,mean_acc,mean_f1\n";
  for (const auto& cell : summary.cells) {
    out << to_string(cell.split) << ',' << to_string(cell.mode) << ','
        << format_double(cell.mean_accuracy, 4) << ','
        << format_double(cell.mean_f1, 4) << "\n";
  }
  write_file_atomic(path, out.str());
}

void write_mode_summary_csv(const GridSummary& summary,
                            const std::string& path) {
  std::ostringstream out;
  out << "mode,mu_f1,var_f1,mean_acc\n";
  for (const auto& mode : summary.modes) {
    out << to_string(mode.mode) << ',' << format_double(mode.mu_f1, 4) << ','
        << format_double(mode.var_f1, 4) << ','
        << format_double(mode.mean_accuracy, 4) << "\n";
  }
  write_file_atomic(path, out.str());
}

std::string render_summary_table(const GridSummary& summary) {
  const std::vector<SplitKind> split_order = {
      SplitKind::kRandom, SplitKind::kSources, SplitKind::kPolitical,
      SplitKind::kCredibility};
  const std::vector<FeatureMode> mode_order = {
      FeatureMode::kHybrid, FeatureMode::kHybridLite, FeatureMode::kTextOnly};

  std::vector<SplitKind> splits;
  for (const auto split : split_order) {
    if (std::any_of(summary.cells.begin(), summary.cells.end(),
                    [&](const CellSummary& c) { return c.split == split; })) {
      splits.push_back(split);
    }
  }
  std::ostringstream out;
  out << "method      ";
  for (const auto split : splits) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), " | %-15s", to_string(split).c_str());
    out << buf;
  }
  out << "\n            ";
  for (std::size_t i = 0; i < splits.size(); ++i) {
    out << " |   acc.     f1 ";
  }
  out << "\n";
  for (const auto mode : mode_order) {
    bool any = false;
    std::ostringstream row;
    char label[32];
    std::snprintf(label, sizeof(label), "%-12s", to_string(mode).c_str());
    row << label;
    for (const auto split : splits) {
      const CellSummary* cell = summary.cell(split, mode);
      if (cell != nullptr) {
        any = true;
        char buf[40];
        std::snprintf(buf, sizeof(buf), " | %6.2f %6.2f ",
                      cell->mean_accuracy, cell->mean_f1);
        row << buf;
      } else {
        row << " |      -      - ";
      }
    }
    if (any) out << row.str() << "\n";
  }
  for (const auto mode : mode_order) {
    const ModeSummary* m = summary.mode_summary(mode);
    if (m == nullptr) continue;
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "%-12s  mean F1 = %6.2f  var F1 = %6.2f  mean acc = %6.2f\n",
                  to_string(mode).c_str(), m->mu_f1, m->var_f1,
                  m->mean_accuracy);
    out << buf;
  }
  return out.str();
}

}  // namespace propdetect
