#include "fiberwalk/exact_test.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

namespace fiberwalk {

namespace {

struct TestPlan {
  std::string statistic;
  ModelSpec null_spec;
  ModelSpec alt_spec;
  int df = 0;
};

TestPlan make_plan(ExactTestKind test, int jl, int kl) {
  TestPlan plan;
  switch (test) {
    case ExactTestKind::alpha:
      plan.statistic = "L_alpha";
      plan.null_spec = {ModelKind::linear_j_only, jl, kl};
      plan.alt_spec = {ModelKind::linear_bivariate, jl, kl};
      break;
    case ExactTestKind::beta:
      plan.statistic = "L_beta";
      plan.null_spec = {ModelKind::linear_k_only, jl, kl};
      plan.alt_spec = {ModelKind::linear_bivariate, jl, kl};
      break;
    case ExactTestKind::goodness_of_fit:
      plan.statistic = "L_0";
      plan.null_spec = {ModelKind::linear_bivariate, jl, kl};
      plan.alt_spec = {ModelKind::anova, jl, kl};
      break;
  }
  plan.df = plan.alt_spec.parameter_count() - plan.null_spec.parameter_count();
  return plan;
}

}  // namespace

TestReport run_exact_test(const Dataset& data, ExactTestKind test, const ExactTestOptions& opts) {
  opts.chain.validate();
  if (opts.chains < 1) throw DomainError("chain count must be at least 1");
  if (opts.bin_width <= 0.0) throw DomainError("bin width must be positive");
  if (!data.trials_all_positive())
    throw DomainError("exact tests need positive trials in every cell");

  const int jl = data.j_levels, kl = data.k_levels;
  const Table observed_table = data.lifted_table();
  const TestPlan plan = make_plan(test, jl, kl);

  const FitResult null_fit = fit_logit(observed_table, plan.null_spec);
  const FitResult alt_fit = fit_logit(observed_table, plan.alt_spec);
  if (!null_fit.converged || !alt_fit.converged)
    throw NumericError("observed fit did not converge for model " +
                       (null_fit.converged ? plan.alt_spec.name() : plan.null_spec.name()));

  TestReport report;
  report.statistic = plan.statistic;
  report.observed = lr_statistic(null_fit, alt_fit);
  report.df = plan.df;
  report.asymptotic_p = chisq_upper_tail(report.observed, report.df);
  report.burn_in = opts.chain.burn_in;
  report.seed = opts.chain.seed;

  const LrOverFiber statistic(plan.null_spec, plan.alt_spec);
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(opts.chain.samples) *
                  static_cast<std::size_t>(opts.chains));

  if (test == ExactTestKind::goodness_of_fit) {
    const MoveSet moves = opts.moveset == MovesetChoice::full ? bivariate_lifted_moves(jl, kl)
                                                              : bivariate_unit_moves(jl, kl);
    report.moveset = moves.source_tag();
    const TargetWeight weight(WeightKind::binomial_coefficient);
    for (int chain = 0; chain < opts.chains; ++chain) {
      ChainConfig cfg = opts.chain;
      cfg.seed = opts.chain.seed + static_cast<std::uint64_t>(chain);
      auto part = run_chain(observed_table, moves, weight,
                            [&](const Table& x) { return statistic(x); }, cfg);
      samples.insert(samples.end(), part.begin(), part.end());
    }
  } else {
    // submodel null: walk the margin table of the axis the null keeps,
    // then re-allocate successes within slices by hypergeometric draws
    const SubmodelNull which =
        test == ExactTestKind::alpha ? SubmodelNull::alpha_zero : SubmodelNull::beta_zero;
    const int margin_levels = test == ExactTestKind::alpha ? jl : kl;
    MoveSet reduced({}, "adjacent");
    if (margin_levels >= 3) {
      if (opts.moveset == MovesetChoice::full) {
        reduced = lift_moves(poisson_moves(margin_levels), static_cast<std::size_t>(margin_levels),
                             "poisson-lifted");
      } else {
        reduced = univariate_adjacent_moves(margin_levels);
      }
    }
    report.moveset = reduced.source_tag();
    for (int chain = 0; chain < opts.chains; ++chain) {
      ChainConfig cfg = opts.chain;
      cfg.seed = opts.chain.seed + static_cast<std::uint64_t>(chain);
      run_submodel_null_chain(observed_table, which, reduced, cfg,
                              [&](const Table& x) { samples.push_back(statistic(x)); });
    }
  }

  if (statistic.warning_count() > 0)
    std::cerr << "fiberwalk: " << statistic.warning_count()
              << " refits did not converge; best iterates used\n";

  report.sample_count = static_cast<long long>(samples.size());
  report.exact_p = estimate_pvalue(samples, report.observed);
  report.histogram = build_histogram(samples, opts.bin_width);
  return report;
}

TestReport run_exact_test(const Dataset& data, ExactTestKind test, MovesetChoice moveset,
                          const ChainConfig& cfg) {
  ExactTestOptions opts;
  opts.chain = cfg;
  opts.moveset = moveset;
  return run_exact_test(data, test, opts);
}

std::vector<HistogramBin> build_histogram(std::span<const double> samples, double bin_width) {
  if (bin_width <= 0.0) throw DomainError("bin width must be positive");
  if (samples.empty()) return {};
  long long lo = std::numeric_limits<long long>::max();
  long long hi = std::numeric_limits<long long>::min();
  for (double s : samples) {
    const long long unit = static_cast<long long>(std::floor(s / bin_width));
    lo = std::min(lo, unit);
    hi = std::max(hi, unit);
  }
  std::vector<HistogramBin> bins(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t i = 0; i < bins.size(); ++i)
    bins[i].bin_left = static_cast<double>(lo + static_cast<long long>(i)) * bin_width;
  for (double s : samples) {
    const long long unit = static_cast<long long>(std::floor(s / bin_width));
    ++bins[static_cast<std::size_t>(unit - lo)].count;
  }
  return bins;
}

std::string report_to_json(const TestReport& r) {
  nlohmann::ordered_json j;
  j["statistic"] = r.statistic;
  j["observed"] = r.observed;
  j["df"] = r.df;
  j["asymptotic_p"] = r.asymptotic_p;
  j["exact_p"] = r.exact_p;
  j["samples"] = r.sample_count;
  j["burn_in"] = r.burn_in;
  j["seed"] = r.seed;
  j["moveset"] = r.moveset;
  nlohmann::ordered_json bins = nlohmann::ordered_json::array();
  for (const HistogramBin& b : r.histogram) {
    nlohmann::ordered_json bin;
    bin["bin_left"] = b.bin_left;
    bin["count"] = b.count;
    bins.push_back(std::move(bin));
  }
  j["histogram"] = std::move(bins);
  return j.dump(2) + "\n";
}

std::string histogram_to_csv(const TestReport& r) {
  std::string out = "bin_left,count\n";
  for (const HistogramBin& b : r.histogram) {
    nlohmann::json left = b.bin_left;  // shortest round-trip formatting
    out += left.dump();
    out += ',';
    out += std::to_string(b.count);
    out += '\n';
  }
  return out;
}

void emit_report(const TestReport& r, const std::string& json_path, const std::string& csv_path) {
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + json_path + " for writing");
    out << report_to_json(r);
    if (!out) throw std::runtime_error("write failed for " + json_path);
  }
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + csv_path + " for writing");
    out << histogram_to_csv(r);
    if (!out) throw std::runtime_error("write failed for " + csv_path);
  }
}

}  // namespace fiberwalk
