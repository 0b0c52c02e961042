#pragma once

#include <string>
#include <vector>

#include "synthnet/analysis.hpp"
#include "synthnet/experiment.hpp"

namespace synthnet {

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

// Exclusive-median method: the median element(s) are excluded from the
// halves whose medians give Q1/Q3.
Quartiles exclusive_quartiles(std::vector<double> values);

struct BoxStats {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
  std::vector<double> outliers;  // outside 1.5 * IQR fences
};

BoxStats box_stats(std::vector<double> values);

// All run files under <dir>/runs, sorted by filename.
std::vector<RunResult> load_results(const std::string& results_dir);

// Emits mean-performance (given threshold), max-accuracy and max-AUC tables,
// the false-start table, per-cell boxplot data, and notes flagging
// thresholds where synthesis had no capacity to act.
void write_report(const std::string& results_dir, const std::string& out_dir,
                  double mean_table_threshold);

// Similarity matrix over the final masks of one representative run per
// strategy (highest final accuracy).
SimilarityMatrix representative_similarity(const std::vector<RunResult>& results);
void write_similarity_report(const std::string& results_dir, const std::string& out_path);

void write_similarity_csv(std::ostream& out, const SimilarityMatrix& m);

}  // namespace synthnet
