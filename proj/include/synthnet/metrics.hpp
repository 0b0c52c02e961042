#pragma once

#include <vector>

namespace synthnet {

// Fraction of samples where (score >= cutoff) matches the label.
double accuracy(const std::vector<double>& scores, const std::vector<int>& labels,
                double cutoff = 0.5);

// Area under the ROC curve via Mann-Whitney rank concordance, ties counted
// half. Throws if only one class is present.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct MetricRow {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  double val_auc = 0.0;
  double sparsity = 0.0;
};

using MetricTrace = std::vector<MetricRow>;

}  // namespace synthnet
