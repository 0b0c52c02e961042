#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "synthnet/analysis.hpp"
#include "synthnet/experiment.hpp"
#include "synthnet/report.hpp"
#include "synthnet/serialize.hpp"

namespace {

using namespace synthnet;

struct Options {
  ExperimentConfig cfg;
  std::vector<std::string> strategies{"all"};
  std::vector<double> thresholds{0.80, 0.85, 0.90, 0.95, 0.99};
  std::string strategy_name = "dense";
  std::string init_strategy_name = "copy";
  std::vector<int> arch_widths{27, 16, 8, 1};
  int seed = 0;
  int workers = 0;  // 0: take SYNTHNET_WORKERS or hardware default
};

// Every config-file key doubles as a CLI flag of the same name.
void add_experiment_options(CLI::App* cmd, Options& opt) {
  cmd->set_config("--config", "", "flat key=value config file");
  cmd->add_option("--data", opt.cfg.data_path, "dataset CSV path");
  cmd->add_option("--out", opt.cfg.output_dir, "output directory");
  cmd->add_option("--arch", opt.arch_widths, "layer widths");
  cmd->add_option("--strategy", opt.strategy_name, "compression strategy");
  cmd->add_option("--sparsity_threshold", opt.cfg.sparsity_threshold, "target sparsity S");
  cmd->add_option("--learning_rate", opt.cfg.learning_rate, "gradient-descent step size");
  cmd->add_option("--epochs", opt.cfg.epochs, "training epochs");
  cmd->add_option("--batch_size", opt.cfg.batch_size, "mini-batch size");
  cmd->add_option("--cycle_period", opt.cfg.cycle_period, "epochs between structural cycles");
  cmd->add_option("--stop_delay", opt.cfg.stop_delay, "trailing epochs with frozen structure");
  cmd->add_option("--n_targets", opt.cfg.n_targets, "focal junctures per cycle");
  cmd->add_option("--max_resamples", opt.cfg.max_resamples,
                  "terminus resamples before skipping a juncture");
  cmd->add_option("--init_strategy", opt.init_strategy_name,
                  "weight init for synthesized connections (copy|uniform)");
  cmd->add_option("--random_count", opt.cfg.random_count,
                  "connections per cycle for random synthesis");
  cmd->add_option("--split_ratio", opt.cfg.split_ratio, "training fraction");
  cmd->add_option("--split_seed", opt.cfg.split_seed, "train/validation shuffle seed");
}

void finalize(Options& opt) {
  opt.cfg.arch = Architecture{opt.arch_widths};
  opt.cfg.strategy = strategy_from_string(opt.strategy_name);
  opt.cfg.init_strategy = init_strategy_from_string(opt.init_strategy_name);
}

std::vector<Strategy> resolve_strategies(const std::vector<std::string>& names) {
  std::vector<Strategy> out;
  for (const std::string& name : names) {
    if (name == "all") {
      for (Strategy s : all_strategies()) out.push_back(s);
    } else {
      out.push_back(strategy_from_string(name));
    }
  }
  return out;
}

int cmd_train(Options& opt, const std::string& save_net) {
  finalize(opt);
  const SplitDataset data = load_dataset(opt.cfg);
  MaskedNetwork final_net;
  const RunResult rr = run_experiment(opt.cfg, opt.seed, data, &final_net);

  namespace fs = std::filesystem;
  const fs::path runs_dir = fs::path(opt.cfg.output_dir) / "runs";
  fs::create_directories(runs_dir);
  const fs::path run_path =
      runs_dir / run_filename(opt.cfg.strategy, opt.cfg.sparsity_threshold, opt.seed);
  {
    std::ofstream out(run_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + run_path.string());
    write_run_file(out, opt.cfg, rr);
  }
  if (!save_net.empty()) {
    std::ofstream out(save_net, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + save_net);
    write_network(out, final_net);
  }

  std::cout << "run written to " << run_path.string() << "\n";
  std::cout << "final accuracy " << format_double(rr.summary.final_val_accuracy)
            << ", final AUC " << format_double(rr.summary.final_val_auc)
            << ", final sparsity " << format_double(rr.summary.final_sparsity);
  if (rr.summary.aborted) std::cout << " (aborted: " << rr.summary.abort_reason << ")";
  std::cout << "\n";
  return 0;
}

int cmd_sweep(Options& opt) {
  finalize(opt);
  const auto strategies = resolve_strategies(opt.strategies);
  const int workers = opt.workers > 0 ? opt.workers : worker_count_from_env();
  const SweepOutcome outcome = sweep(opt.cfg, strategies, opt.thresholds, workers);
  std::cout << outcome.completed << " runs completed, " << outcome.failures.size()
            << " failed; summary at " << opt.cfg.output_dir << "/summary.csv\n";
  for (const std::string& f : outcome.failures) std::cerr << "failed: " << f << "\n";
  return outcome.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic sparse training via connection synthesis and pruning"};
  app.require_subcommand(1);

  Options opt;
  std::string save_net;
  std::string results_dir = "out";
  std::string report_dir = "report";
  std::string similarity_out = "report/similarity.csv";
  double report_threshold = 0.99;
  std::string net_in, net_out;

  CLI::App* train_cmd = app.add_subcommand("train", "run one experiment");
  add_experiment_options(train_cmd, opt);
  train_cmd->add_option("--seed", opt.seed, "model seed");
  train_cmd->add_option("--save_net", save_net, "also write the final network to this path");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run the strategies x thresholds x seeds grid");
  add_experiment_options(sweep_cmd, opt);
  sweep_cmd->add_option("--strategies", opt.strategies, "strategy names or 'all'");
  sweep_cmd->add_option("--thresholds", opt.thresholds, "sparsity thresholds");
  sweep_cmd->add_option("--seeds", opt.cfg.seeds, "model seeds (default 0..49)");
  sweep_cmd->add_option("--workers", opt.workers,
                        "worker pool size (default: SYNTHNET_WORKERS or hardware)");

  CLI::App* report_cmd = app.add_subcommand("report", "tables and boxplot data from results");
  report_cmd->add_option("--results", results_dir, "sweep output directory");
  report_cmd->add_option("--out", report_dir, "report output directory");
  report_cmd->add_option("--threshold", report_threshold,
                         "threshold for the mean-performance and false-start tables");

  CLI::App* sim_cmd =
      app.add_subcommand("similarity", "mask similarity across representative runs");
  sim_cmd->add_option("--results", results_dir, "sweep output directory");
  sim_cmd->add_option("--out", similarity_out, "similarity CSV path");

  CLI::App* dag_cmd =
      app.add_subcommand("dag-prune", "remove connections on no input->output path");
  dag_cmd->add_option("--in", net_in, "network file to post-process")->required();
  dag_cmd->add_option("--out", net_out, "pruned network file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(opt, save_net);
    if (sweep_cmd->parsed()) return cmd_sweep(opt);
    if (report_cmd->parsed()) {
      synthnet::write_report(results_dir, report_dir, report_threshold);
      std::cout << "report written to " << report_dir << "\n";
      return 0;
    }
    if (sim_cmd->parsed()) {
      synthnet::write_similarity_report(results_dir, similarity_out);
      std::cout << "similarity matrix written to " << similarity_out << "\n";
      return 0;
    }
    if (dag_cmd->parsed()) {
      std::ifstream in(net_in, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open " + net_in);
      synthnet::MaskedNetwork net = synthnet::read_network(in);
      const double before = synthnet::sparsity(net.mask);
      const auto removed = synthnet::dag_prune_network(net);
      std::ofstream out(net_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + net_out);
      synthnet::write_network(out, net);
      std::cout << "removed " << removed.size() << " connections; sparsity "
                << synthnet::format_double(before) << " -> "
                << synthnet::format_double(synthnet::sparsity(net.mask)) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
