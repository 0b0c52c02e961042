#include "synthnet/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "synthnet/serialize.hpp"

namespace synthnet {

namespace {

double median_of_sorted(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  const std::size_t n = end - begin;
  if (n == 0) throw std::invalid_argument("median of empty range");
  if (n % 2 == 1) return v[begin + n / 2];
  return 0.5 * (v[begin + n / 2 - 1] + v[begin + n / 2]);
}

}  // namespace

Quartiles exclusive_quartiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("exclusive_quartiles: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  Quartiles q;
  q.median = median_of_sorted(values, 0, n);
  const std::size_t half = n / 2;  // median element excluded when n is odd
  if (half == 0) {
    q.q1 = q.q3 = q.median;
    return q;
  }
  q.q1 = median_of_sorted(values, 0, half);
  q.q3 = median_of_sorted(values, n - half, n);
  return q;
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("box_stats: empty input");
  std::sort(values.begin(), values.end());
  BoxStats b;
  const Quartiles q = exclusive_quartiles(values);
  b.q1 = q.q1;
  b.median = q.median;
  b.q3 = q.q3;
  b.min = values.front();
  b.max = values.back();
  double sum = 0;
  for (double v : values) sum += v;
  b.mean = sum / static_cast<double>(values.size());
  const double iqr = b.q3 - b.q1;
  const double lo = b.q1 - 1.5 * iqr, hi = b.q3 + 1.5 * iqr;
  for (double v : values)
    if (v < lo || v > hi) b.outliers.push_back(v);
  return b;
}

std::vector<RunResult> load_results(const std::string& results_dir) {
  namespace fs = std::filesystem;
  const fs::path runs_dir = fs::path(results_dir) / "runs";
  if (!fs::is_directory(runs_dir))
    throw std::runtime_error("no runs directory under " + results_dir);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(runs_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".run")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no run files under " + runs_dir.string());

  std::vector<RunResult> results;
  results.reserve(files.size());
  for (const fs::path& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    try {
      results.push_back(read_run_file(in));
    } catch (const std::exception& e) {
      throw std::runtime_error(file.string() + ": " + e.what());
    }
  }
  return results;
}

namespace {

struct CellKey {
  std::string strategy;
  std::string threshold;
  bool operator<(const CellKey& o) const {
    if (strategy != o.strategy) return strategy < o.strategy;
    return std::stod(threshold) < std::stod(o.threshold);
  }
};

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
  return buf;
}

bool threshold_dependent(Strategy s) { return uses_pruning(s) || uses_synthesis(s); }

}  // namespace

void write_report(const std::string& results_dir, const std::string& out_dir,
                  double mean_table_threshold) {
  namespace fs = std::filesystem;
  const auto results = load_results(results_dir);
  fs::create_directories(out_dir);

  // Group final metrics per (strategy, threshold); threshold-independent
  // strategies sit under a single key and replicate across columns.
  std::map<std::string, std::map<std::string, std::vector<const RunResult*>>> by_strategy;
  std::set<std::string> threshold_tags;
  for (const RunResult& rr : results) {
    const std::string tag =
        threshold_dependent(rr.strategy) ? threshold_tag(rr.sparsity_threshold) : "*";
    by_strategy[to_string(rr.strategy)][tag].push_back(&rr);
    if (tag != "*") threshold_tags.insert(tag);
  }
  std::vector<std::string> tags(threshold_tags.begin(), threshold_tags.end());
  std::sort(tags.begin(), tags.end(),
            [](const std::string& a, const std::string& b) { return std::stod(a) < std::stod(b); });
  if (tags.empty()) tags.push_back(threshold_tag(mean_table_threshold));

  // Strategies in canonical order, only those present.
  std::vector<std::string> strategies;
  for (Strategy s : all_strategies())
    if (by_strategy.count(to_string(s))) strategies.push_back(to_string(s));

  auto cell_runs = [&](const std::string& strategy,
                       const std::string& tag) -> const std::vector<const RunResult*>* {
    const auto& per_tag = by_strategy.at(strategy);
    if (auto it = per_tag.find("*"); it != per_tag.end()) return &it->second;
    if (auto it = per_tag.find(tag); it != per_tag.end()) return &it->second;
    return nullptr;
  };

  auto collect = [](const std::vector<const RunResult*>& runs, auto getter) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const RunResult* rr : runs) v.push_back(getter(*rr));
    return v;
  };
  auto acc_of = [](const RunResult& rr) { return rr.summary.final_val_accuracy; };
  auto auc_of = [](const RunResult& rr) { return rr.summary.final_val_auc; };

  {  // Mean performance at one threshold.
    std::ofstream out(fs::path(out_dir) / "table_mean.csv", std::ios::binary);
    const std::string tag = threshold_tag(mean_table_threshold);
    out << "strategy,threshold,mean_accuracy,mean_auc,mean_sparsity\n";
    for (const std::string& s : strategies) {
      const auto* runs = cell_runs(s, tag);
      if (!runs) continue;
      double acc = 0, auc = 0, sp = 0;
      for (const RunResult* rr : *runs) {
        acc += rr->summary.final_val_accuracy;
        auc += rr->summary.final_val_auc;
        sp += rr->summary.final_sparsity;
      }
      const double n = static_cast<double>(runs->size());
      out << s << "," << tag << "," << percent(acc / n) << "," << percent(auc / n) << ","
          << percent(sp / n) << "\n";
    }
  }

  auto write_max_table = [&](const std::string& filename, auto getter) {
    std::ofstream out(fs::path(out_dir) / filename, std::ios::binary);
    out << "strategy";
    for (const std::string& tag : tags) out << "," << tag;
    out << "\n";
    for (const std::string& s : strategies) {
      out << s;
      for (const std::string& tag : tags) {
        const auto* runs = cell_runs(s, tag);
        if (!runs) {
          out << ",";
          continue;
        }
        double best = -1;
        for (const RunResult* rr : *runs) best = std::max(best, getter(*rr));
        out << "," << percent(best);
      }
      out << "\n";
    }
  };
  write_max_table("table_max_accuracy.csv", acc_of);
  write_max_table("table_max_auc.csv", auc_of);

  {  // False starts: worst run per strategy at the mean-table threshold.
    std::ofstream out(fs::path(out_dir) / "false_starts.csv", std::ios::binary);
    const std::string tag = threshold_tag(mean_table_threshold);
    out << "strategy,threshold,min_final_accuracy,min_epoch_accuracy\n";
    for (const std::string& s : strategies) {
      const auto* runs = cell_runs(s, tag);
      if (!runs) continue;
      double min_final = 2.0, min_epoch = 2.0;
      for (const RunResult* rr : *runs) {
        min_final = std::min(min_final, rr->summary.final_val_accuracy);
        min_epoch = std::min(min_epoch, rr->summary.min_epoch_val_accuracy);
      }
      out << s << "," << tag << "," << percent(min_final) << "," << percent(min_epoch)
          << "\n";
    }
  }

  {  // Boxplot data per cell.
    std::ofstream out(fs::path(out_dir) / "boxplot.csv", std::ios::binary);
    out << "strategy,threshold,n,min,q1,median,q3,max,mean,outliers\n";
    for (const std::string& s : strategies) {
      for (const std::string& tag : tags) {
        const auto* runs = cell_runs(s, tag);
        if (!runs) continue;
        const BoxStats b = box_stats(collect(*runs, acc_of));
        out << s << "," << tag << "," << runs->size() << "," << format_double(b.min) << ","
            << format_double(b.q1) << "," << format_double(b.median) << ","
            << format_double(b.q3) << "," << format_double(b.max) << ","
            << format_double(b.mean);
        out << ",";
        for (std::size_t i = 0; i < b.outliers.size(); ++i)
          out << (i ? ";" : "") << format_double(b.outliers[i]);
        out << "\n";
      }
    }
  }

  {  // Notes: thresholds where synthesis had no capacity to act.
    std::ofstream out(fs::path(out_dir) / "notes.txt", std::ios::binary);
    for (const std::string& s : strategies) {
      const Strategy strategy = strategy_from_string(s);
      if (!uses_synthesis(strategy) || uses_pruning(strategy)) continue;
      for (const std::string& tag : tags) {
        const auto* runs = cell_runs(s, tag);
        if (!runs) continue;
        bool any_synthesis = false;
        for (const RunResult* rr : *runs)
          for (const StructuralEvent& ev : rr->events)
            if (ev.kind == EventKind::synthesize && !ev.connections.empty())
              any_synthesis = true;
        if (!any_synthesis)
          out << s << " at threshold " << tag
              << "%: no synthesis capacity (initial sub-network already at or above the "
                 "enabled budget); results coincide with subnet_only\n";
      }
    }
  }
}

SimilarityMatrix representative_similarity(const std::vector<RunResult>& results) {
  // Highest final accuracy per strategy; ties resolved toward the smaller
  // (threshold, seed) for determinism.
  std::map<std::string, const RunResult*> best;
  for (const RunResult& rr : results) {
    auto& slot = best[to_string(rr.strategy)];
    if (!slot || rr.summary.final_val_accuracy > slot->summary.final_val_accuracy ||
        (rr.summary.final_val_accuracy == slot->summary.final_val_accuracy &&
         std::make_pair(rr.sparsity_threshold, rr.seed) <
             std::make_pair(slot->sparsity_threshold, slot->seed)))
      slot = &rr;
  }
  std::vector<ConnectionMask> masks;
  std::vector<std::string> labels;
  for (Strategy s : all_strategies()) {
    const auto it = best.find(to_string(s));
    if (it == best.end()) continue;
    const RunResult* rr = it->second;
    std::ostringstream label;
    label << to_string(rr->strategy);
    if (threshold_dependent(rr->strategy)) label << "@" << threshold_tag(rr->sparsity_threshold);
    label << "#" << rr->seed;
    labels.push_back(label.str());
    masks.push_back(rr->final_mask);
  }
  return similarity_matrix(masks, labels);
}

void write_similarity_csv(std::ostream& out, const SimilarityMatrix& m) {
  out << "run";
  for (const std::string& label : m.labels) out << "," << label;
  out << "\n";
  for (int r = 0; r < m.values.rows; ++r) {
    out << m.labels[r];
    for (int c = 0; c < m.values.cols; ++c) out << "," << format_double(m.values.at(r, c));
    out << "\n";
  }
}

void write_similarity_report(const std::string& results_dir, const std::string& out_path) {
  const auto results = load_results(results_dir);
  const SimilarityMatrix m = representative_similarity(results);
  const auto parent = std::filesystem::path(out_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  write_similarity_csv(out, m);
}

}  // namespace synthnet
