#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synthnet/matrix.hpp"

namespace synthnet {

// One row of the heart-disease table, fields in file column order.
struct RawRecord {
  double age = 0;
  int sex = 0;
  int cp = 0;
  double trestbps = 0;
  double chol = 0;
  int fbs = 0;
  int restecg = 0;
  double thalach = 0;
  int exang = 0;
  double oldpeak = 0;
  int slope = 0;
  int ca = 0;
  int thal = 0;
  int target = 0;
};

inline constexpr int kRawColumns = 14;
inline constexpr int kFeatureCount = 27;

// Encoded feature layout (27 columns, order is fixed so neuron indices are
// stable across runs):
//   0..4   z-scored continuous: age, trestbps, chol, thalach, oldpeak
//   5..7   binary 0/1: sex, fbs, exang
//   8..26  one-hot blocks: cp(4), restecg(3), slope(3), ca(5), thal(4)
struct EncodedDataset {
  Matrix features;  // samples x 27
  std::vector<int> labels;
  std::vector<std::string> feature_names;
};

struct SplitDataset {
  EncodedDataset train;
  EncodedDataset validation;
  std::uint64_t split_seed = 0;
};

// Population mean/stddev of the five continuous columns.
struct Standardizer {
  std::array<double, 5> mean{};
  std::array<double, 5> stddev{};
};

std::vector<RawRecord> load_csv(const std::string& path);

Standardizer fit_standardizer(const std::vector<RawRecord>& records);

// Encodes records into the 27-column layout. Continuous columns are z-scored
// with `standardizer` when given, otherwise with statistics fitted on
// `records` themselves.
EncodedDataset encode(const std::vector<RawRecord>& records,
                      const std::optional<Standardizer>& standardizer = std::nullopt);

// Seeded shuffle of 0..n-1; shared by split() and prepare_dataset() so both
// produce the same membership for the same seed.
std::vector<int> shuffled_indices(int n, std::uint64_t seed);

SplitDataset split(const EncodedDataset& ds, double ratio, std::uint64_t seed);

// Seeded shuffle + ratio split of the raw records, then encodes both sides
// with statistics fitted on the training portion only.
SplitDataset prepare_dataset(const std::vector<RawRecord>& records, double ratio,
                             std::uint64_t seed);

}  // namespace synthnet
