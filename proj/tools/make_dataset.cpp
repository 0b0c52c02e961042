// Generates the synthetic heart-disease stand-in dataset shipped under
// data/. The real clinical table cannot be redistributed here, so this tool
// draws a cohort from class-conditional distributions matched to the
// published descriptive statistics of the original 303-patient study
// (means/deviations of the continuous measurements and category frequencies,
// both overall and by disease status). Columns, codings and class balance
// follow the layout expected by load_csv().
//
// The --separation knob scales every class-conditional gap toward the pooled
// distribution; it was calibrated once so that trained dense networks land
// near the accuracy regime reported for the original cohort, then frozen.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "synthnet/rng.hpp"

namespace {

struct Gaussian {
  double mean;
  double stddev;
};

struct ContinuousSpec {
  Gaussian healthy;   // target = 1
  Gaussian diseased;  // target = 0
  double lo, hi;
  int decimals;  // 0: integer-valued
};

struct CategoricalSpec {
  std::vector<double> healthy;
  std::vector<double> diseased;
};

double blend(double cond, double pooled, double separation) {
  return pooled + separation * (cond - pooled);
}

int sample_continuous(synthnet::Rng& rng, const ContinuousSpec& spec, bool healthy,
                      double separation, double& out) {
  const Gaussian& g = healthy ? spec.healthy : spec.diseased;
  const double pooled_mean = 0.5 * (spec.healthy.mean + spec.diseased.mean);
  const double mean = blend(g.mean, pooled_mean, separation);
  double v = rng.normal(mean, g.stddev);
  v = std::clamp(v, spec.lo, spec.hi);
  if (spec.decimals == 0) {
    out = std::round(v);
  } else {
    const double scale = std::pow(10.0, spec.decimals);
    out = std::round(v * scale) / scale;
  }
  return 0;
}

int sample_categorical(synthnet::Rng& rng, const CategoricalSpec& spec, bool healthy,
                       double separation) {
  const auto& cond = healthy ? spec.healthy : spec.diseased;
  std::vector<double> p(cond.size());
  double sum = 0;
  for (std::size_t i = 0; i < cond.size(); ++i) {
    const double pooled = 0.5 * (spec.healthy[i] + spec.diseased[i]);
    p[i] = std::max(1e-6, blend(cond[i], pooled, separation));
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return rng.discrete(p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"write the synthetic heart-disease stand-in CSV"};
  std::string out_path = "data/heart_synthetic.csv";
  std::uint64_t seed = 7;
  int samples = 303;
  int positives = 165;  // target = 1 rows, matching the original class balance
  double separation = 1.0;
  app.add_option("--out", out_path, "output CSV path");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--samples", samples, "total rows");
  app.add_option("--positives", positives, "rows with target = 1");
  app.add_option("--separation", separation, "class-conditional gap scale in [0,1]");
  CLI11_PARSE(app, argc, argv);

  // Continuous measurements: healthy vs diseased mean/sd, plausible range.
  const ContinuousSpec age{{52.6, 9.5}, {56.6, 8.0}, 29, 77, 0};
  const ContinuousSpec trestbps{{129.3, 16.2}, {134.4, 18.8}, 94, 200, 0};
  const ContinuousSpec chol{{242.2, 53.6}, {251.1, 49.6}, 126, 564, 0};
  const ContinuousSpec thalach{{158.4, 19.1}, {139.1, 22.6}, 71, 202, 0};
  const ContinuousSpec oldpeak{{0.58, 0.78}, {1.57, 1.30}, 0.0, 6.2, 1};

  // Category frequencies by class (healthy first).
  const CategoricalSpec sex{{0.56, 0.44}, {0.17, 0.83}};
  const CategoricalSpec cp{{0.24, 0.25, 0.42, 0.09}, {0.75, 0.07, 0.13, 0.05}};
  const CategoricalSpec fbs{{0.86, 0.14}, {0.84, 0.16}};
  const CategoricalSpec restecg{{0.43, 0.56, 0.01}, {0.54, 0.44, 0.02}};
  const CategoricalSpec exang{{0.86, 0.14}, {0.45, 0.55}};
  const CategoricalSpec slope{{0.05, 0.30, 0.65}, {0.09, 0.65, 0.26}};
  const CategoricalSpec ca{{0.79, 0.13, 0.05, 0.02, 0.01}, {0.33, 0.32, 0.21, 0.12, 0.02}};
  const CategoricalSpec thal{{0.01, 0.04, 0.78, 0.17}, {0.01, 0.09, 0.26, 0.64}};

  synthnet::Rng rng(seed);
  std::vector<int> labels(samples, 0);
  for (int i = 0; i < positives && i < samples; ++i) labels[i] = 1;
  rng.shuffle(labels);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }
  out << "age,sex,cp,trestbps,chol,fbs,restecg,thalach,exang,oldpeak,slope,ca,thal,target\n";
  char line[256];
  for (int i = 0; i < samples; ++i) {
    const bool healthy = labels[i] == 1;
    double v_age, v_bp, v_chol, v_hr, v_op;
    sample_continuous(rng, age, healthy, separation, v_age);
    sample_continuous(rng, trestbps, healthy, separation, v_bp);
    sample_continuous(rng, chol, healthy, separation, v_chol);
    sample_continuous(rng, thalach, healthy, separation, v_hr);
    sample_continuous(rng, oldpeak, healthy, separation, v_op);
    const int v_sex = sample_categorical(rng, sex, healthy, separation);
    const int v_cp = sample_categorical(rng, cp, healthy, separation);
    const int v_fbs = sample_categorical(rng, fbs, healthy, separation);
    const int v_recg = sample_categorical(rng, restecg, healthy, separation);
    const int v_ex = sample_categorical(rng, exang, healthy, separation);
    const int v_slope = sample_categorical(rng, slope, healthy, separation);
    const int v_ca = sample_categorical(rng, ca, healthy, separation);
    const int v_thal = sample_categorical(rng, thal, healthy, separation);
    std::snprintf(line, sizeof(line), "%d,%d,%d,%d,%d,%d,%d,%d,%d,%.1f,%d,%d,%d,%d\n",
                  static_cast<int>(v_age), v_sex, v_cp, static_cast<int>(v_bp),
                  static_cast<int>(v_chol), v_fbs, v_recg, static_cast<int>(v_hr), v_ex,
                  v_op, v_slope, v_ca, v_thal, labels[i]);
    out << line;
  }
  std::cout << "wrote " << samples << " rows to " << out_path << "\n";
  return 0;
}
