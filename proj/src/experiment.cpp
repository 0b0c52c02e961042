#include "synthnet/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "synthnet/metrics.hpp"
#include "synthnet/serialize.hpp"

namespace synthnet {

namespace {

// Stream tags keep init/walk/train/structure draws from aliasing.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kWalkStream = 2;
constexpr std::uint64_t kTrainStream = 3;
constexpr std::uint64_t kStructureStream = 4;

}  // namespace

std::vector<int> ExperimentConfig::default_seeds() {
  std::vector<int> seeds(50);
  for (int i = 0; i < 50; ++i) seeds[i] = i;
  return seeds;
}

CompressionSchedule ExperimentConfig::schedule() const {
  CompressionSchedule s;
  s.strategy = strategy;
  s.sparsity_threshold = sparsity_threshold;
  s.cycle_period = cycle_period;
  s.stop_delay = stop_delay;
  s.policy.mode = (strategy == Strategy::random_synth || strategy == Strategy::random_synth_prune)
                      ? SynthesisMode::random
                      : SynthesisMode::strategic;
  s.policy.n_targets = n_targets;
  s.policy.max_resamples = max_resamples;
  s.policy.init_strategy = init_strategy;
  s.policy.random_count = random_count;
  return s;
}

TrainConfig ExperimentConfig::train_config(int seed) const {
  TrainConfig tc;
  tc.learning_rate = learning_rate;
  tc.epochs = epochs;
  tc.batch_size = batch_size;
  tc.rng_seed = Rng::derive(static_cast<std::uint64_t>(seed), kTrainStream);
  return tc;
}

MaskedNetwork initial_network(const Architecture& arch, Strategy strategy, int seed) {
  auto net = init_dense(arch, Rng::derive(static_cast<std::uint64_t>(seed), kInitStream));
  if (starts_from_subnetwork(strategy)) {
    net.mask = init_subnetwork_mask(arch, Rng::derive(static_cast<std::uint64_t>(seed), kWalkStream));
    net.zero_disabled_weights();
  }
  return net;
}

SplitDataset load_dataset(const ExperimentConfig& cfg) {
  auto records = load_csv(cfg.data_path);
  return prepare_dataset(records, cfg.split_ratio, cfg.split_seed);
}

RunResult run_experiment(const ExperimentConfig& cfg, int seed, const SplitDataset& data,
                         MaskedNetwork* final_net) {
  RunResult rr;
  rr.strategy = cfg.strategy;
  rr.sparsity_threshold = cfg.sparsity_threshold;
  rr.seed = seed;

  MaskedNetwork net = initial_network(cfg.arch, cfg.strategy, seed);
  const CompressionSchedule schedule = cfg.schedule();
  const TrainConfig tc = cfg.train_config(seed);
  Rng structural(Rng::derive(static_cast<std::uint64_t>(seed), kStructureStream));

  auto hook = [&](int epoch, double train_loss, MaskedNetwork& n) {
    for (StructuralEvent& ev : apply_cycle(n, schedule, epoch, tc.epochs, structural))
      if (!ev.connections.empty()) rr.events.push_back(std::move(ev));
    const auto scores = predict(n, data.validation.features);
    MetricRow row;
    row.epoch = epoch;
    row.train_loss = train_loss;
    row.val_accuracy = accuracy(scores, data.validation.labels);
    row.val_auc = roc_auc(scores, data.validation.labels);
    row.sparsity = sparsity(n.mask);
    rr.trace.push_back(row);
  };

  try {
    train(net, data, tc, hook);
  } catch (const TrainingDiverged& e) {
    rr.summary.aborted = true;
    rr.summary.abort_reason = e.what();
  }

  rr.final_mask = net.mask;
  if (final_net) *final_net = net;
  if (!rr.trace.empty()) {
    const MetricRow& last = rr.trace.back();
    rr.summary.final_val_accuracy = last.val_accuracy;
    rr.summary.final_val_auc = last.val_auc;
    rr.summary.final_sparsity = last.sparsity;
    double min_acc = rr.trace.front().val_accuracy;
    for (const MetricRow& row : rr.trace) min_acc = std::min(min_acc, row.val_accuracy);
    rr.summary.min_epoch_val_accuracy = min_acc;
  }
  return rr;
}

std::string threshold_tag(double threshold) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", threshold * 100.0);
  return buf;
}

std::string run_filename(Strategy strategy, double threshold, int seed) {
  std::ostringstream name;
  name << to_string(strategy);
  if (uses_pruning(strategy) || uses_synthesis(strategy))
    name << "__S" << threshold_tag(threshold);
  name << "__seed" << seed << ".run";
  return name.str();
}

void write_run_file(std::ostream& out, const ExperimentConfig& cfg, const RunResult& rr) {
  out << "synthnet run v1\n";
  out << "strategy " << to_string(rr.strategy) << "\n";
  out << "sparsity_threshold " << format_double(rr.sparsity_threshold) << "\n";
  out << "seed " << rr.seed << "\n";
  out << "arch";
  for (int w : cfg.arch.widths) out << " " << w;
  out << "\n";
  out << "learning_rate " << format_double(cfg.learning_rate) << "\n";
  out << "epochs " << cfg.epochs << "\n";
  out << "batch_size " << cfg.batch_size << "\n";
  out << "cycle_period " << cfg.cycle_period << "\n";
  out << "stop_delay " << cfg.stop_delay << "\n";
  out << "n_targets " << cfg.n_targets << "\n";
  out << "max_resamples " << cfg.max_resamples << "\n";
  out << "init_strategy " << to_string(cfg.init_strategy) << "\n";
  out << "random_count " << cfg.random_count << "\n";
  out << "split_ratio " << format_double(cfg.split_ratio) << "\n";
  out << "split_seed " << cfg.split_seed << "\n";
  out << "data_path " << cfg.data_path << "\n";
  out << "metrics " << rr.trace.size() << "\n";
  write_trace_csv(out, rr.trace);
  out << "events " << rr.events.size() << "\n";
  for (const StructuralEvent& ev : rr.events) out << event_to_line(ev) << "\n";
  out << "final_mask\n";
  write_mask(out, rr.final_mask);
  out << "summary\n";
  out << "final_val_accuracy " << format_double(rr.summary.final_val_accuracy) << "\n";
  out << "final_val_auc " << format_double(rr.summary.final_val_auc) << "\n";
  out << "final_sparsity " << format_double(rr.summary.final_sparsity) << "\n";
  out << "min_epoch_val_accuracy " << format_double(rr.summary.min_epoch_val_accuracy)
      << "\n";
  out << "aborted " << (rr.summary.aborted ? 1 : 0) << "\n";
  out << "abort_reason " << (rr.summary.abort_reason.empty() ? "-" : rr.summary.abort_reason)
      << "\n";
  out << "end\n";
}

namespace {

[[noreturn]] void run_parse_fail(const std::string& what) {
  throw std::runtime_error("run file parse error: " + what);
}

std::string next_line(std::istream& in, const char* context) {
  std::string line;
  if (!std::getline(in, line)) run_parse_fail(std::string("missing ") + context);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::pair<std::string, std::string> key_value(const std::string& line) {
  const auto space = line.find(' ');
  if (space == std::string::npos) return {line, ""};
  return {line.substr(0, space), line.substr(space + 1)};
}

}  // namespace

RunResult read_run_file(std::istream& in) {
  if (next_line(in, "header") != "synthnet run v1") run_parse_fail("bad header");
  RunResult rr;
  std::size_t metric_rows = 0;

  // Config echo, terminated by the metrics section.
  for (;;) {
    const std::string line = next_line(in, "config echo");
    const auto [key, value] = key_value(line);
    if (key == "metrics") {
      metric_rows = std::stoul(value);
      break;
    }
    if (key == "strategy") rr.strategy = strategy_from_string(value);
    else if (key == "sparsity_threshold") rr.sparsity_threshold = std::stod(value);
    else if (key == "seed") rr.seed = std::stoi(value);
    // remaining echo keys are informational here
  }

  if (next_line(in, "metrics header") != "epoch,train_loss,val_accuracy,val_auc,sparsity")
    run_parse_fail("bad metrics header");
  for (std::size_t r = 0; r < metric_rows; ++r) {
    std::string line = next_line(in, "metric row");
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    MetricRow m;
    if (!(row >> m.epoch >> m.train_loss >> m.val_accuracy >> m.val_auc >> m.sparsity))
      run_parse_fail("bad metric row");
    rr.trace.push_back(m);
  }

  {
    const auto [key, value] = key_value(next_line(in, "events"));
    if (key != "events") run_parse_fail("expected events section");
    const std::size_t n = std::stoul(value);
    for (std::size_t e = 0; e < n; ++e)
      rr.events.push_back(event_from_line(next_line(in, "event line")));
  }

  if (next_line(in, "final_mask") != "final_mask") run_parse_fail("expected final_mask");
  rr.final_mask = read_mask(in);

  if (next_line(in, "summary") != "summary") run_parse_fail("expected summary");
  for (;;) {
    const std::string line = next_line(in, "summary row");
    if (line == "end") break;
    const auto [key, value] = key_value(line);
    if (key == "final_val_accuracy") rr.summary.final_val_accuracy = std::stod(value);
    else if (key == "final_val_auc") rr.summary.final_val_auc = std::stod(value);
    else if (key == "final_sparsity") rr.summary.final_sparsity = std::stod(value);
    else if (key == "min_epoch_val_accuracy")
      rr.summary.min_epoch_val_accuracy = std::stod(value);
    else if (key == "aborted") rr.summary.aborted = (value == "1");
    else if (key == "abort_reason") rr.summary.abort_reason = (value == "-" ? "" : value);
  }
  return rr;
}

int worker_count_from_env() {
  if (const char* env = std::getenv("SYNTHNET_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

namespace {

struct Cell {
  Strategy strategy;
  double threshold;
  int seed;
};

// dense/subnet_only are threshold-independent: one run per seed stands in
// for every threshold column.
std::vector<Cell> build_grid(const ExperimentConfig& base,
                             const std::vector<Strategy>& strategies,
                             const std::vector<double>& thresholds) {
  std::vector<Cell> grid;
  for (Strategy s : strategies) {
    const bool threshold_dependent = uses_pruning(s) || uses_synthesis(s);
    if (threshold_dependent) {
      for (double t : thresholds)
        for (int seed : base.seeds) grid.push_back({s, t, seed});
    } else {
      for (int seed : base.seeds) grid.push_back({s, thresholds.front(), seed});
    }
  }
  return grid;
}

struct CellStats {
  std::vector<double> accuracies;
  std::vector<double> aucs;
  std::vector<double> sparsities;
};

void write_summary_csv(std::ostream& out, const std::vector<Strategy>& strategies,
                       const std::vector<double>& thresholds,
                       const std::map<std::pair<std::string, std::string>, CellStats>& cells);

}  // namespace

SweepOutcome sweep(const ExperimentConfig& base, const std::vector<Strategy>& strategies,
                   const std::vector<double>& thresholds, int workers) {
  if (strategies.empty() || thresholds.empty() || base.seeds.empty())
    throw std::invalid_argument("sweep: empty grid");

  namespace fs = std::filesystem;
  const fs::path out_dir(base.output_dir);
  const fs::path runs_dir = out_dir / "runs";
  fs::create_directories(runs_dir);

  const SplitDataset data = load_dataset(base);
  const std::vector<Cell> grid = build_grid(base, strategies, thresholds);

  SweepOutcome outcome;
  std::mutex outcome_mutex;
  std::map<std::pair<std::string, std::string>, CellStats> cells;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t at = next.fetch_add(1);
      if (at >= grid.size()) return;
      const Cell& cell = grid[at];
      ExperimentConfig cfg = base;
      cfg.strategy = cell.strategy;
      cfg.sparsity_threshold = cell.threshold;
      const std::string filename = run_filename(cell.strategy, cell.threshold, cell.seed);
      try {
        const RunResult rr = run_experiment(cfg, cell.seed, data);
        std::ofstream out(runs_dir / filename, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + filename);
        write_run_file(out, cfg, rr);
        std::lock_guard<std::mutex> lock(outcome_mutex);
        ++outcome.completed;
        auto& stats = cells[{to_string(cell.strategy), threshold_tag(cell.threshold)}];
        stats.accuracies.push_back(rr.summary.final_val_accuracy);
        stats.aucs.push_back(rr.summary.final_val_auc);
        stats.sparsities.push_back(rr.summary.final_sparsity);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(outcome_mutex);
        outcome.failures.push_back(filename + ": " + e.what());
      }
    }
  };

  workers = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Accumulation above happened in completion order; aggregation below uses
  // sorted per-cell vectors so parallel schedules cannot change output.
  for (auto& [key, stats] : cells) {
    auto sort_all = [](std::vector<double>& v) { std::sort(v.begin(), v.end()); };
    sort_all(stats.accuracies);
    sort_all(stats.aucs);
    sort_all(stats.sparsities);
  }

  {
    std::ofstream out(out_dir / "summary.csv", std::ios::binary);
    write_summary_csv(out, strategies, thresholds, cells);
  }
  if (!outcome.failures.empty()) {
    std::sort(outcome.failures.begin(), outcome.failures.end());
    std::ofstream out(out_dir / "failures.txt", std::ios::binary);
    for (const std::string& f : outcome.failures) out << f << "\n";
  }
  return outcome;
}

namespace {

double mean_of(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

void write_summary_csv(std::ostream& out, const std::vector<Strategy>& strategies,
                       const std::vector<double>& thresholds,
                       const std::map<std::pair<std::string, std::string>, CellStats>& cells) {
  out << "strategy,threshold,runs,mean_accuracy,min_accuracy,max_accuracy,"
         "mean_auc,max_auc,mean_sparsity\n";
  for (Strategy s : strategies) {
    const bool threshold_dependent = uses_pruning(s) || uses_synthesis(s);
    for (double t : thresholds) {
      // Threshold-independent strategies replicate their single cell.
      const std::string tag = threshold_dependent ? threshold_tag(t)
                                                  : threshold_tag(thresholds.front());
      const auto it = cells.find({to_string(s), tag});
      if (it == cells.end()) continue;
      const CellStats& stats = it->second;
      if (stats.accuracies.empty()) continue;
      out << to_string(s) << "," << threshold_tag(t) << "," << stats.accuracies.size() << ","
          << format_double(mean_of(stats.accuracies)) << ","
          << format_double(stats.accuracies.front()) << ","
          << format_double(stats.accuracies.back()) << ","
          << format_double(mean_of(stats.aucs)) << "," << format_double(stats.aucs.back())
          << "," << format_double(mean_of(stats.sparsities)) << "\n";
    }
  }
}

}  // namespace

}  // namespace synthnet
