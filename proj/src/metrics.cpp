#include "synthnet/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace synthnet {

double accuracy(const std::vector<double>& scores, const std::vector<int>& labels,
                double cutoff) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("accuracy: length mismatch");
  if (scores.empty()) throw std::invalid_argument("accuracy: empty input");
  long correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int predicted = scores[i] >= cutoff ? 1 : 0;
    if (predicted == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("roc_auc: length mismatch");
  const std::size_t n = scores.size();
  long n_pos = 0;
  for (int y : labels) n_pos += (y != 0);
  const long n_neg = static_cast<long>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("roc_auc: needs both classes present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midranks over tied scores; rank sums stay half-integers, so the final
  // division is the only rounding step.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j + 1);  // 1-based
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]] != 0) pos_rank_sum += midrank;
    i = j;
  }
  const double u = pos_rank_sum - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace synthnet
