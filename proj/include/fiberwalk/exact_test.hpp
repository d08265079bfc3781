#pragma once

// Exact-test orchestration: observed statistics, fiber walks, p-value
// estimation and report/histogram emission.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fiberwalk/dataset.hpp"
#include "fiberwalk/glm.hpp"
#include "fiberwalk/mcmc.hpp"

namespace fiberwalk {

// alpha: LR test of the k-axis term (null mu + a*j), reported as L_alpha.
// beta:  LR test of the j-axis term (null mu + b*k), reported as L_beta.
// goodness_of_fit: additive linear logit against the row/column anova
// model, reported as L_0.
enum class ExactTestKind { alpha, beta, goodness_of_fit };

enum class MovesetChoice { full, unit };

struct HistogramBin {
  double bin_left = 0.0;
  long long count = 0;
};

struct TestReport {
  std::string statistic;
  double observed = 0.0;
  int df = 0;
  double asymptotic_p = 1.0;
  double exact_p = 1.0;
  long long sample_count = 0;
  long long burn_in = 0;
  std::uint64_t seed = 0;
  std::string moveset;
  std::vector<HistogramBin> histogram;
};

struct ExactTestOptions {
  ChainConfig chain;
  MovesetChoice moveset = MovesetChoice::full;
  double bin_width = 0.5;
  int chains = 1;  // seeds seed, seed+1, ...; samples concatenated in seed order
};

TestReport run_exact_test(const Dataset& data, ExactTestKind test, const ExactTestOptions& opts);
TestReport run_exact_test(const Dataset& data, ExactTestKind test, MovesetChoice moveset,
                          const ChainConfig& cfg);

std::vector<HistogramBin> build_histogram(std::span<const double> samples, double bin_width);

// JSON with a stable key order; byte-identical for identical inputs.
std::string report_to_json(const TestReport& r);
std::string histogram_to_csv(const TestReport& r);
void emit_report(const TestReport& r, const std::string& json_path, const std::string& csv_path);

}  // namespace fiberwalk
