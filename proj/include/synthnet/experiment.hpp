#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "synthnet/compression.hpp"
#include "synthnet/dataset.hpp"
#include "synthnet/metrics.hpp"
#include "synthnet/network.hpp"

namespace synthnet {

struct ExperimentConfig {
  Architecture arch{{27, 16, 8, 1}};
  Strategy strategy = Strategy::dense;
  double sparsity_threshold = 0.9;

  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 32;

  int cycle_period = 1;
  int stop_delay = 0;
  int n_targets = 4;
  int max_resamples = 10;
  InitStrategy init_strategy = InitStrategy::copy;
  int random_count = 4;

  double split_ratio = 0.8;
  std::uint64_t split_seed = 1;
  std::vector<int> seeds = default_seeds();

  std::string data_path = "data/heart_synthetic.csv";
  std::string output_dir = "out";

  CompressionSchedule schedule() const;
  TrainConfig train_config(int seed) const;
  static std::vector<int> default_seeds();  // 0..49
};

struct RunSummary {
  double final_val_accuracy = 0.0;
  double final_val_auc = 0.0;
  double final_sparsity = 0.0;
  double min_epoch_val_accuracy = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

struct RunResult {
  Strategy strategy = Strategy::dense;
  double sparsity_threshold = 0.9;
  int seed = 0;
  MetricTrace trace;
  std::vector<StructuralEvent> events;  // no-op cycles are not recorded
  ConnectionMask final_mask;
  RunSummary summary;
};

// The shared per-seed starting point: dense weights for every strategy, plus
// the seed's walk mask for the synthesis-family strategies.
MaskedNetwork initial_network(const Architecture& arch, Strategy strategy, int seed);

SplitDataset load_dataset(const ExperimentConfig& cfg);

// final_net, when given, receives the trained network (weights and mask).
RunResult run_experiment(const ExperimentConfig& cfg, int seed, const SplitDataset& data,
                         MaskedNetwork* final_net = nullptr);

void write_run_file(std::ostream& out, const ExperimentConfig& cfg, const RunResult& rr);
RunResult read_run_file(std::istream& in);

// dense and subnet_only ignore the threshold; their filenames omit it and
// one run per seed stands in for every threshold column.
std::string run_filename(Strategy strategy, double threshold, int seed);
std::string threshold_tag(double threshold);

struct SweepOutcome {
  int completed = 0;
  std::vector<std::string> failures;  // "file: reason"
};

// Executes the grid (strategies x thresholds x seeds, threshold-deduplicated
// for dense/subnet_only) on a worker pool, writes one run file per cell under
// <output_dir>/runs plus summary.csv. Results are independent of scheduling.
SweepOutcome sweep(const ExperimentConfig& base, const std::vector<Strategy>& strategies,
                   const std::vector<double>& thresholds, int workers);

int worker_count_from_env();

}  // namespace synthnet
