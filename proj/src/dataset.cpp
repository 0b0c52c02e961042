#include "synthnet/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "synthnet/rng.hpp"

namespace synthnet {

namespace {

const char* kHeader =
    "age,sex,cp,trestbps,chol,fbs,restecg,thalach,exang,oldpeak,slope,ca,thal,target";

const char* kColumnNames[kRawColumns] = {"age",     "sex",   "cp",      "trestbps", "chol",
                                         "fbs",     "restecg", "thalach", "exang",
                                         "oldpeak", "slope", "ca",      "thal",     "target"};

// Cardinality of each enumerated column; 0 marks a continuous column.
const int kCardinality[kRawColumns] = {0, 2, 4, 0, 0, 2, 3, 0, 2, 0, 3, 5, 4, 2};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

[[noreturn]] void fail_cell(const std::string& path, int line_no, const char* column,
                            const std::string& what) {
  std::ostringstream msg;
  msg << path << " line " << line_no << ", column '" << column << "': " << what;
  throw std::runtime_error(msg.str());
}

double parse_value(const std::string& path, int line_no, int col, const std::string& text) {
  std::size_t consumed = 0;
  double v = 0;
  try {
    v = std::stod(text, &consumed);
  } catch (const std::exception&) {
    fail_cell(path, line_no, kColumnNames[col], "unparsable value '" + text + "'");
  }
  while (consumed < text.size() && std::isspace(static_cast<unsigned char>(text[consumed])))
    ++consumed;
  if (consumed != text.size() || !std::isfinite(v))
    fail_cell(path, line_no, kColumnNames[col], "unparsable value '" + text + "'");
  if (int card = kCardinality[col]; card > 0) {
    if (v != std::floor(v) || v < 0 || v >= card) {
      std::ostringstream what;
      what << "value " << text << " outside {0.." << card - 1 << "}";
      fail_cell(path, line_no, kColumnNames[col], what.str());
    }
  }
  return v;
}

}  // namespace

std::vector<RawRecord> load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    auto names = split_line(line);
    if (names.size() != kRawColumns)
      throw std::runtime_error(path + ": header has " + std::to_string(names.size()) +
                               " columns, expected 14 (" + kHeader + ")");
    for (int c = 0; c < kRawColumns; ++c)
      if (names[c] != kColumnNames[c])
        throw std::runtime_error(path + ": unknown column '" + names[c] + "' at position " +
                                 std::to_string(c + 1) + ", expected '" + kColumnNames[c] + "'");
  }

  std::vector<RawRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != kRawColumns)
      throw std::runtime_error(path + " line " + std::to_string(line_no) + ": expected 14 fields, got " +
                               std::to_string(fields.size()));
    double v[kRawColumns];
    for (int c = 0; c < kRawColumns; ++c) v[c] = parse_value(path, line_no, c, fields[c]);
    RawRecord r;
    r.age = v[0];
    r.sex = static_cast<int>(v[1]);
    r.cp = static_cast<int>(v[2]);
    r.trestbps = v[3];
    r.chol = v[4];
    r.fbs = static_cast<int>(v[5]);
    r.restecg = static_cast<int>(v[6]);
    r.thalach = v[7];
    r.exang = static_cast<int>(v[8]);
    r.oldpeak = v[9];
    r.slope = static_cast<int>(v[10]);
    r.ca = static_cast<int>(v[11]);
    r.thal = static_cast<int>(v[12]);
    r.target = static_cast<int>(v[13]);
    records.push_back(r);
  }
  return records;
}

namespace {

double continuous_field(const RawRecord& r, int i) {
  switch (i) {
    case 0: return r.age;
    case 1: return r.trestbps;
    case 2: return r.chol;
    case 3: return r.thalach;
    default: return r.oldpeak;
  }
}

const char* kContinuousNames[5] = {"age", "trestbps", "chol", "thalach", "oldpeak"};

}  // namespace

Standardizer fit_standardizer(const std::vector<RawRecord>& records) {
  if (records.empty()) throw std::invalid_argument("fit_standardizer: empty record list");
  Standardizer s;
  const double n = static_cast<double>(records.size());
  for (int i = 0; i < 5; ++i) {
    double sum = 0;
    for (const auto& r : records) sum += continuous_field(r, i);
    s.mean[i] = sum / n;
    double var = 0;
    for (const auto& r : records) {
      double d = continuous_field(r, i) - s.mean[i];
      var += d * d;
    }
    s.stddev[i] = std::sqrt(var / n);
  }
  return s;
}

EncodedDataset encode(const std::vector<RawRecord>& records,
                      const std::optional<Standardizer>& standardizer) {
  if (records.empty()) throw std::invalid_argument("encode: empty record list");
  const Standardizer stats = standardizer ? *standardizer : fit_standardizer(records);
  for (int i = 0; i < 5; ++i)
    if (stats.stddev[i] == 0.0)
      throw std::runtime_error(std::string("encode: zero variance in continuous column '") +
                               kContinuousNames[i] + "'");

  EncodedDataset ds;
  const int n = static_cast<int>(records.size());
  ds.features = Matrix(n, kFeatureCount);
  ds.labels.reserve(records.size());

  for (int i = 0; i < 5; ++i) ds.feature_names.push_back(kContinuousNames[i]);
  for (const char* b : {"sex", "fbs", "exang"}) ds.feature_names.push_back(b);
  const struct {
    const char* name;
    int card;
  } onehot[5] = {{"cp", 4}, {"restecg", 3}, {"slope", 3}, {"ca", 5}, {"thal", 4}};
  for (const auto& g : onehot)
    for (int v = 0; v < g.card; ++v)
      ds.feature_names.push_back(std::string(g.name) + "_" + std::to_string(v));

  for (int row = 0; row < n; ++row) {
    const RawRecord& r = records[row];
    int c = 0;
    for (int i = 0; i < 5; ++i)
      ds.features.at(row, c++) = (continuous_field(r, i) - stats.mean[i]) / stats.stddev[i];
    ds.features.at(row, c++) = r.sex;
    ds.features.at(row, c++) = r.fbs;
    ds.features.at(row, c++) = r.exang;
    const int cat_values[5] = {r.cp, r.restecg, r.slope, r.ca, r.thal};
    for (int g = 0; g < 5; ++g)
      for (int v = 0; v < onehot[g].card; ++v)
        ds.features.at(row, c++) = (cat_values[g] == v) ? 1.0 : 0.0;
    ds.labels.push_back(r.target);
  }
  return ds;
}

std::vector<int> shuffled_indices(int n, std::uint64_t seed) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  return idx;
}

namespace {

int train_size(int n, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("split: ratio must be in (0, 1)");
  // The epsilon tolerates FP noise when ratio * n is an exact integer.
  int k = static_cast<int>(std::floor(ratio * n + 1e-9));
  if (k == 0 || k == n)
    throw std::runtime_error("split: degenerate split leaves one side empty");
  return k;
}

EncodedDataset take_rows(const EncodedDataset& ds, const std::vector<int>& idx, int begin,
                         int end) {
  EncodedDataset out;
  out.feature_names = ds.feature_names;
  out.features = Matrix(end - begin, ds.features.cols);
  out.labels.reserve(end - begin);
  for (int r = begin; r < end; ++r) {
    for (int c = 0; c < ds.features.cols; ++c)
      out.features.at(r - begin, c) = ds.features.at(idx[r], c);
    out.labels.push_back(ds.labels[idx[r]]);
  }
  return out;
}

}  // namespace

SplitDataset split(const EncodedDataset& ds, double ratio, std::uint64_t seed) {
  const int n = ds.features.rows;
  const int k = train_size(n, ratio);
  auto idx = shuffled_indices(n, seed);
  SplitDataset out;
  out.train = take_rows(ds, idx, 0, k);
  out.validation = take_rows(ds, idx, k, n);
  out.split_seed = seed;
  return out;
}

SplitDataset prepare_dataset(const std::vector<RawRecord>& records, double ratio,
                             std::uint64_t seed) {
  const int n = static_cast<int>(records.size());
  if (n == 0) throw std::invalid_argument("prepare_dataset: empty record list");
  const int k = train_size(n, ratio);
  auto idx = shuffled_indices(n, seed);
  std::vector<RawRecord> train_records, val_records;
  train_records.reserve(k);
  val_records.reserve(n - k);
  for (int i = 0; i < k; ++i) train_records.push_back(records[idx[i]]);
  for (int i = k; i < n; ++i) val_records.push_back(records[idx[i]]);

  const Standardizer stats = fit_standardizer(train_records);
  SplitDataset out;
  out.train = encode(train_records, stats);
  out.validation = encode(val_records, stats);
  out.split_seed = seed;
  return out;
}

}  // namespace synthnet
