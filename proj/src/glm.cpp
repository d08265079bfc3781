#include "fiberwalk/glm.hpp"

#include <algorithm>
#include <cmath>

namespace fiberwalk {

int ModelSpec::parameter_count() const {
  switch (kind) {
    case ModelKind::intercept_only: return 1;
    case ModelKind::linear_j_only: return 2;
    case ModelKind::linear_k_only: return 2;
    case ModelKind::linear_bivariate: return 3;
    case ModelKind::anova: return 1 + (j_levels - 1) + (k_levels - 1);
  }
  throw DomainError("unknown model kind");
}

bool ModelSpec::nested_in(const ModelSpec& other) const {
  if (j_levels != other.j_levels || k_levels != other.k_levels) return false;
  if (kind == other.kind) return true;
  switch (kind) {
    case ModelKind::intercept_only: return true;
    case ModelKind::linear_j_only:
      return other.kind == ModelKind::linear_bivariate || other.kind == ModelKind::anova;
    case ModelKind::linear_k_only:
      return other.kind == ModelKind::linear_bivariate || other.kind == ModelKind::anova;
    case ModelKind::linear_bivariate: return other.kind == ModelKind::anova;
    case ModelKind::anova: return false;
  }
  return false;
}

std::string ModelSpec::name() const {
  switch (kind) {
    case ModelKind::intercept_only: return "intercept_only";
    case ModelKind::linear_j_only: return "linear_j_only";
    case ModelKind::linear_k_only: return "linear_k_only";
    case ModelKind::linear_bivariate: return "linear_bivariate";
    case ModelKind::anova: return "anova";
  }
  return "?";
}

namespace {

constexpr double kGradientTol = 1e-8;
constexpr double kRelLikTol = 1e-12;
constexpr double kSeparationBound = 30.0;
constexpr int kMaxIterations = 60;
constexpr int kMaxHalvings = 20;

double softplus(double eta) {
  // log(1 + e^eta), stable for both signs
  return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// dense symmetric positive-definite solve; false when a pivot fails
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double sum = a[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < i; ++k)
        sum -= a[static_cast<std::size_t>(i) * n + k] * a[static_cast<std::size_t>(j) * n + k];
      if (i == j) {
        if (sum <= 0.0) return false;
        a[static_cast<std::size_t>(i) * n + i] = std::sqrt(sum);
      } else {
        a[static_cast<std::size_t>(j) * n + i] = sum / a[static_cast<std::size_t>(i) * n + i];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    double sum = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) sum -= a[static_cast<std::size_t>(i) * n + k] * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = sum / a[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double sum = b[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) sum -= a[static_cast<std::size_t>(k) * n + i] * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = sum / a[static_cast<std::size_t>(i) * n + i];
  }
  return true;
}

}  // namespace

LogitFitter::LogitFitter(const ModelSpec& spec) : spec_(spec) {
  if (spec_.j_levels < 1 || spec_.k_levels < 1) throw DomainError("model needs positive axis sizes");
  params_ = spec_.parameter_count();
  cells_ = static_cast<std::size_t>(spec_.j_levels) * static_cast<std::size_t>(spec_.k_levels);
  design_.assign(cells_ * static_cast<std::size_t>(params_), 0.0);
  std::size_t c = 0;
  for (int j = 1; j <= spec_.j_levels; ++j)
    for (int k = 1; k <= spec_.k_levels; ++k, ++c) {
      double* row = design_.data() + c * static_cast<std::size_t>(params_);
      row[0] = 1.0;
      switch (spec_.kind) {
        case ModelKind::intercept_only: break;
        case ModelKind::linear_j_only: row[1] = j; break;
        case ModelKind::linear_k_only: row[1] = k; break;
        case ModelKind::linear_bivariate:
          row[1] = j;
          row[2] = k;
          break;
        case ModelKind::anova: {
          if (j < spec_.j_levels)
            row[j] = 1.0;
          else
            for (int a = 1; a < spec_.j_levels; ++a) row[a] = -1.0;
          if (k < spec_.k_levels)
            row[spec_.j_levels - 1 + k] = 1.0;
          else
            for (int b = 1; b < spec_.k_levels; ++b) row[spec_.j_levels - 1 + b] = -1.0;
          break;
        }
      }
    }
}

void LogitFitter::split(const Table& data, std::vector<double>& successes,
                        std::vector<double>& trials) const {
  if (data.axes.size() != 3 || data.axes[0] != 2 || data.axes[1] != spec_.j_levels ||
      data.axes[2] != spec_.k_levels)
    throw ShapeError("table axes do not match the model");
  successes.resize(cells_);
  trials.resize(cells_);
  for (std::size_t c = 0; c < cells_; ++c) {
    successes[c] = static_cast<double>(data.counts[c]);
    trials[c] = static_cast<double>(data.counts[c] + data.counts[cells_ + c]);
    if (trials[c] <= 0.0) throw DomainError("logit fit needs positive trials in every cell");
  }
}

double LogitFitter::log_likelihood(const Table& data, std::span<const double> theta) const {
  std::vector<double> y, t;
  split(data, y, t);
  double ll = 0.0;
  for (std::size_t c = 0; c < cells_; ++c) {
    double eta = 0.0;
    const double* row = design_.data() + c * static_cast<std::size_t>(params_);
    for (int p = 0; p < params_; ++p) eta += row[p] * theta[static_cast<std::size_t>(p)];
    ll += y[c] * eta - t[c] * softplus(eta);
  }
  return ll;
}

std::vector<double> LogitFitter::gradient(const Table& data, std::span<const double> theta) const {
  std::vector<double> y, t;
  split(data, y, t);
  std::vector<double> g(static_cast<std::size_t>(params_), 0.0);
  for (std::size_t c = 0; c < cells_; ++c) {
    double eta = 0.0;
    const double* row = design_.data() + c * static_cast<std::size_t>(params_);
    for (int p = 0; p < params_; ++p) eta += row[p] * theta[static_cast<std::size_t>(p)];
    const double resid = y[c] - t[c] * sigmoid(eta);
    for (int p = 0; p < params_; ++p) g[static_cast<std::size_t>(p)] += row[p] * resid;
  }
  return g;
}

FitResult LogitFitter::fit(const Table& data) const {
  std::vector<double> y, t;
  split(data, y, t);
  const int n = params_;
  FitResult res;
  res.spec = spec_;
  res.coefficients.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<double> eta(cells_), p(cells_);
  std::vector<double> g(static_cast<std::size_t>(n)), step(static_cast<std::size_t>(n));
  std::vector<double> hess(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  std::vector<double> theta = res.coefficients;

  const auto loglik = [&](const std::vector<double>& th) {
    double ll = 0.0;
    for (std::size_t c = 0; c < cells_; ++c) {
      double e = 0.0;
      const double* row = design_.data() + c * static_cast<std::size_t>(n);
      for (int q = 0; q < n; ++q) e += row[q] * th[static_cast<std::size_t>(q)];
      ll += y[c] * e - t[c] * softplus(e);
    }
    return ll;
  };

  double ll = loglik(theta);
  double rel_change = 0.0;
  for (res.iterations = 0; res.iterations < kMaxIterations; ++res.iterations) {
    // gradient and Hessian at theta
    std::fill(g.begin(), g.end(), 0.0);
    std::fill(hess.begin(), hess.end(), 0.0);
    for (std::size_t c = 0; c < cells_; ++c) {
      double e = 0.0;
      const double* row = design_.data() + c * static_cast<std::size_t>(n);
      for (int q = 0; q < n; ++q) e += row[q] * theta[static_cast<std::size_t>(q)];
      const double pc = sigmoid(e);
      const double resid = y[c] - t[c] * pc;
      const double wc = t[c] * pc * (1.0 - pc);
      for (int q = 0; q < n; ++q) {
        g[static_cast<std::size_t>(q)] += row[q] * resid;
        for (int r = q; r < n; ++r)
          hess[static_cast<std::size_t>(q) * n + r] += wc * row[q] * row[r];
      }
    }
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < q; ++r)
        hess[static_cast<std::size_t>(q) * n + r] = hess[static_cast<std::size_t>(r) * n + q];

    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax <= kGradientTol && rel_change <= kRelLikTol) {
      res.converged = true;
      break;
    }

    step = g;
    if (!cholesky_solve(hess, step, n)) break;  // singular curvature: report best iterate

    double scale = 1.0;
    double ll_new = ll;
    std::vector<double> theta_new = theta;
    bool improved = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      for (int q = 0; q < n; ++q)
        theta_new[static_cast<std::size_t>(q)] =
            theta[static_cast<std::size_t>(q)] + scale * step[static_cast<std::size_t>(q)];
      ll_new = loglik(theta_new);
      if (ll_new >= ll - 1e-13 * (1.0 + std::abs(ll))) {
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;

    rel_change = std::abs(ll_new - ll) / std::max(1.0, std::abs(ll_new));
    theta = theta_new;
    ll = ll_new;

    bool separated = false;
    for (double v : theta)
      if (std::abs(v) > kSeparationBound) separated = true;
    if (separated) break;  // divergence on the logit scale
  }
  res.coefficients = theta;
  res.log_likelihood = ll;
  return res;
}

FitResult fit_logit(const Table& data, const ModelSpec& spec) {
  return LogitFitter(spec).fit(data);
}

double lr_statistic(const FitResult& null_fit, const FitResult& alt_fit) {
  if (!null_fit.converged || !alt_fit.converged)
    throw DomainError("LR statistic needs converged fits");
  if (!null_fit.spec.nested_in(alt_fit.spec))
    throw DomainError("LR statistic needs the null nested in the alternative");
  const double value = 2.0 * (alt_fit.log_likelihood - null_fit.log_likelihood);
  if (value < -1e-8) throw NumericError("nested fit has lower alternative likelihood");
  return std::max(0.0, value);
}

double chisq_upper_tail(double x, int df) {
  if (x < 0.0) throw DomainError("chi-square statistic must be nonnegative");
  if (df < 1) throw DomainError("degrees of freedom must be positive");
  const double a = 0.5 * static_cast<double>(df);
  const double y = 0.5 * x;
  if (y == 0.0) return 1.0;

  const double log_prefactor = a * std::log(y) - y - std::lgamma(a);
  if (y < a + 1.0) {
    // lower series: P = e^pref * sum, Q = 1 - P
    double term = 1.0 / a;
    double sum = term;
    for (int i = 1; i < 10000; ++i) {
      term *= y / (a + i);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return 1.0 - std::exp(log_prefactor) * sum;
  }
  // continued fraction (modified Lentz)
  const double tiny = 1e-300;
  double b = y + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_prefactor) * h;
}

LrOverFiber::LrOverFiber(const ModelSpec& null_spec, const ModelSpec& alt_spec)
    : null_fitter_(null_spec), alt_fitter_(alt_spec) {
  if (!null_spec.nested_in(alt_spec))
    throw DomainError("LR statistic needs the null nested in the alternative");
}

double LrOverFiber::operator()(const Table& x) const {
  const FitResult null_fit = null_fitter_.fit(x);
  const FitResult alt_fit = alt_fitter_.fit(x);
  if (!null_fit.converged || !alt_fit.converged) ++warnings_;
  return std::max(0.0, 2.0 * (alt_fit.log_likelihood - null_fit.log_likelihood));
}

}  // namespace fiberwalk
