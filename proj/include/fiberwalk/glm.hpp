#pragma once

// Maximum-likelihood logit fits on 2 x J x K success/failure tables,
// likelihood-ratio statistics between nested models, and chi-square
// upper tails.

#include <span>
#include <string>
#include <vector>

#include "fiberwalk/tables.hpp"

namespace fiberwalk {

// Linear predictors over the covariate lattice (j,k), j = 1..J, k = 1..K:
//   linear_bivariate  mu + a*j + b*k
//   anova             mu + a_j + b_k, sum-to-zero contrasts
//   linear_j_only     mu + a*j
//   linear_k_only     mu + b*k
//   intercept_only    mu
enum class ModelKind { intercept_only, linear_j_only, linear_k_only, linear_bivariate, anova };

struct ModelSpec {
  ModelKind kind = ModelKind::intercept_only;
  int j_levels = 0;
  int k_levels = 0;

  int parameter_count() const;
  bool nested_in(const ModelSpec& other) const;
  std::string name() const;
};

struct FitResult {
  ModelSpec spec;
  std::vector<double> coefficients;
  double log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Newton-Raphson with step halving on the binomial log-likelihood,
// zero start.  Converged when max |gradient| <= 1e-8 and the relative
// log-likelihood change <= 1e-12; coefficients beyond |30| on the logit
// scale are treated as separation and reported as non-convergence.
class LogitFitter {
 public:
  explicit LogitFitter(const ModelSpec& spec);

  const ModelSpec& spec() const { return spec_; }
  FitResult fit(const Table& data) const;
  double log_likelihood(const Table& data, std::span<const double> theta) const;
  std::vector<double> gradient(const Table& data, std::span<const double> theta) const;

 private:
  void split(const Table& data, std::vector<double>& successes, std::vector<double>& trials) const;

  ModelSpec spec_;
  int params_;
  std::size_t cells_;
  std::vector<double> design_;  // cells x params, row-major
};

FitResult fit_logit(const Table& data, const ModelSpec& spec);

// 2 (alt - null) log-likelihoods, floored at 0 for numerical negatives
// within 1e-8; requires converged fits of nested models.
double lr_statistic(const FitResult& null_fit, const FitResult& alt_fit);

// Regularized upper incomplete gamma Q(df/2, x/2); series for small
// arguments, continued fraction otherwise.
double chisq_upper_tail(double x, int df);

// Statistic closure for fiber walks: evaluates the LR statistic on any
// table of the fiber; non-convergent refits contribute their best
// iterate and bump the warning counter instead of aborting the chain.
class LrOverFiber {
 public:
  LrOverFiber(const ModelSpec& null_spec, const ModelSpec& alt_spec);
  double operator()(const Table& x) const;
  long long warning_count() const { return warnings_; }

 private:
  LogitFitter null_fitter_;
  LogitFitter alt_fitter_;
  mutable long long warnings_ = 0;
};

}  // namespace fiberwalk
