// fiberwalk command line: move-set dumps, logit fits, exact conditional
// tests and brute-force connectivity verification.
//
// Exit codes: 0 success, 1 usage/parse error, 2 verification
// counterexample, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fiberwalk/dataset.hpp"
#include "fiberwalk/exact_test.hpp"
#include "fiberwalk/fiber.hpp"
#include "fiberwalk/glm.hpp"
#include "fiberwalk/movesets.hpp"

namespace {

using namespace fiberwalk;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) sizes.push_back(std::stoi(part));
  if (sizes.empty()) throw DomainError("--sizes must name at least one axis");
  return sizes;
}

struct MovesArgs {
  std::string set;
  std::string sizes;
  bool count_only = false;
  std::string out;
};

int run_moves(const MovesArgs& args) {
  const std::vector<int> sizes = parse_sizes(args.sizes);
  MoveSet set;
  std::vector<int> axes;
  if (args.set == "poisson") {
    if (sizes.size() != 1) throw DomainError("poisson takes one size");
    set = poisson_moves(sizes[0]);
    axes = {sizes[0]};
  } else if (args.set == "adjacent") {
    if (sizes.size() != 1) throw DomainError("adjacent takes one size");
    set = univariate_adjacent_moves(sizes[0]);
    axes = {2, sizes[0]};
  } else if (args.set == "segre") {
    if (sizes.size() < 2) throw DomainError("segre takes at least two sizes");
    if (sizes.size() == 2) {
      set = segre_markov_basis(poisson_moves(sizes[0]), poisson_moves(sizes[1]), sizes[0], sizes[1]);
    } else {
      std::vector<MoveSet> bases;
      for (int s : sizes) bases.push_back(poisson_moves(s));
      set = multiway_segre_basis(bases, sizes);
    }
    axes = sizes;
  } else if (args.set == "bivariate") {
    if (sizes.size() != 2) throw DomainError("bivariate takes two sizes");
    set = bivariate_lifted_moves(sizes[0], sizes[1]);
    axes = {2, sizes[0], sizes[1]};
  } else if (args.set == "unit") {
    if (sizes.size() != 2) throw DomainError("unit takes two sizes");
    set = bivariate_unit_moves(sizes[0], sizes[1]);
    axes = {2, sizes[0], sizes[1]};
  } else {
    throw DomainError("unknown move set: " + args.set);
  }
  if (args.count_only) {
    write_output(args.out, std::to_string(set.size()) + "\n");
    return 0;
  }
  std::ostringstream csv;
  csv << "move,";
  for (std::size_t i = 0; i < axes.size(); ++i) csv << "axis" << (i + 1) << ',';
  csv << "delta\n";
  for (std::size_t m = 0; m < set.size(); ++m)
    for (const auto& [pos, delta] : set[m].deltas()) {
      csv << (m + 1) << ',';
      for (int c : cell_coords(axes, pos)) csv << c << ',';
      csv << delta << '\n';
    }
  write_output(args.out, csv.str());
  return 0;
}

struct FitArgs {
  std::string data;
  std::string format = "grid";
  std::string model = "bivariate";
  std::string out;
};

ModelKind model_kind_of(const std::string& name) {
  if (name == "bivariate") return ModelKind::linear_bivariate;
  if (name == "anova") return ModelKind::anova;
  if (name == "j-only") return ModelKind::linear_j_only;
  if (name == "k-only") return ModelKind::linear_k_only;
  if (name == "intercept") return ModelKind::intercept_only;
  throw DomainError("unknown model: " + name);
}

DataFormat format_of(const std::string& name) {
  if (name == "grid") return DataFormat::grid;
  if (name == "csv") return DataFormat::long_csv;
  throw DomainError("unknown format: " + name);
}

int run_fit(const FitArgs& args) {
  const Dataset data = parse_dataset(read_file(args.data), format_of(args.format));
  const ModelSpec spec{model_kind_of(args.model), data.j_levels, data.k_levels};
  const FitResult fit = fit_logit(data.lifted_table(), spec);
  nlohmann::ordered_json j;
  j["model"] = spec.name();
  j["j_levels"] = spec.j_levels;
  j["k_levels"] = spec.k_levels;
  j["coefficients"] = fit.coefficients;
  j["log_likelihood"] = fit.log_likelihood;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  write_output(args.out, j.dump(2) + "\n");
  return fit.converged ? 0 : 3;
}

struct TestArgs {
  std::string data;
  std::string format = "grid";
  std::string test = "gof";
  std::string moveset = "full";
  std::uint64_t seed = 1;
  long long burn_in = 50'000;
  long long samples = 100'000;
  long long thin = 1;
  int chains = 1;
  double bin_width = 0.5;
  std::string out;
};

int run_test(const TestArgs& args) {
  const Dataset data = parse_dataset(read_file(args.data), format_of(args.format));
  ExactTestKind kind;
  if (args.test == "alpha") kind = ExactTestKind::alpha;
  else if (args.test == "beta") kind = ExactTestKind::beta;
  else if (args.test == "gof") kind = ExactTestKind::goodness_of_fit;
  else throw DomainError("unknown test: " + args.test);

  ExactTestOptions opts;
  opts.chain.seed = args.seed;
  opts.chain.burn_in = args.burn_in;
  opts.chain.samples = args.samples;
  opts.chain.thin = args.thin;
  opts.chains = args.chains;
  opts.bin_width = args.bin_width;
  if (args.moveset == "full") opts.moveset = MovesetChoice::full;
  else if (args.moveset == "unit") opts.moveset = MovesetChoice::unit;
  else throw DomainError("unknown moveset: " + args.moveset);

  const TestReport report = run_exact_test(data, kind, opts);
  if (args.out.empty()) {
    std::cout << report_to_json(report);
  } else {
    emit_report(report, args.out + ".json", args.out + "_hist.csv");
    std::cout << report.statistic << " = " << report.observed << " (df " << report.df
              << "), asymptotic p = " << report.asymptotic_p
              << ", exact p = " << report.exact_p << " [" << report.sample_count
              << " samples, moveset " << report.moveset << "]\n";
  }
  return 0;
}

struct VerifyArgs {
  std::string theorem;
  std::string sizes;
  long long cap = 1;
  std::size_t node_guard = 1'000'000;
  std::string out;
};

int run_verify(const VerifyArgs& args) {
  TheoremId which;
  if (args.theorem == "prop1") which = TheoremId::prop1;
  else if (args.theorem == "thm1") which = TheoremId::thm1;
  else if (args.theorem == "thm2") which = TheoremId::thm2;
  else if (args.theorem == "thm3") which = TheoremId::thm3;
  else if (args.theorem == "conj-b02") which = TheoremId::conj_b02;
  else throw DomainError("unknown theorem: " + args.theorem);

  const VerifyReport report =
      verify_connectivity_theorem(which, parse_sizes(args.sizes), args.cap, args.node_guard);
  std::cout << args.theorem << ": " << report.fibers_checked << " fibers checked, "
            << report.move_count << " moves, largest fiber " << report.largest_fiber << ": "
            << (report.all_connected ? "all connected" : "COUNTEREXAMPLE FOUND") << "\n";
  if (report.all_connected) return 0;

  const Fiber& bad = *report.counterexample;
  std::ostringstream csv;
  csv << "# disconnected fiber for statistic " << bad.statistic.to_string() << "\n";
  csv << "table,";
  for (std::size_t i = 0; i < bad.tables.front().axes.size(); ++i) csv << "axis" << (i + 1) << ',';
  csv << "count\n";
  for (std::size_t t = 0; t < bad.tables.size(); ++t) {
    const Table& table = bad.tables[t];
    for (std::size_t c = 0; c < table.counts.size(); ++c) {
      if (table.counts[c] == 0) continue;
      csv << (t + 1) << ',';
      for (int coord : cell_coords(table.axes, c)) csv << coord << ',';
      csv << table.counts[c] << '\n';
    }
  }
  write_output(args.out, csv.str());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact conditional tests for Poisson and logistic regression via Markov-basis fiber walks"};
  app.require_subcommand(1);
  app.fallthrough();

  MovesArgs moves_args;
  auto* moves = app.add_subcommand("moves", "generate a move set as signed-delta CSV");
  moves->add_option("--set", moves_args.set, "poisson|adjacent|segre|bivariate|unit")->required();
  moves->add_option("--sizes", moves_args.sizes, "axis sizes, e.g. 7,8")->required();
  moves->add_flag("--count-only", moves_args.count_only, "print only the cardinality");
  moves->add_option("--out", moves_args.out, "output path (default stdout)");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit a logit model, print JSON");
  fit->add_option("--data", fit_args.data, "dataset path")->required();
  fit->add_option("--format", fit_args.format, "grid|csv");
  fit->add_option("--model", fit_args.model, "bivariate|anova|j-only|k-only|intercept");
  fit->add_option("--out", fit_args.out, "output path (default stdout)");

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "run an exact conditional test");
  test->add_option("--data", test_args.data, "dataset path")->required();
  test->add_option("--format", test_args.format, "grid|csv");
  test->add_option("--test", test_args.test, "alpha|beta|gof");
  test->add_option("--moveset", test_args.moveset, "full|unit");
  test->add_option("--seed", test_args.seed, "random seed");
  test->add_option("--burn-in", test_args.burn_in, "burn-in steps");
  test->add_option("--samples", test_args.samples, "retained draws");
  test->add_option("--thin", test_args.thin, "steps per retained draw");
  test->add_option("--chains", test_args.chains, "independent chains (seeds seed+i)");
  test->add_option("--bin-width", test_args.bin_width, "histogram bin width");
  test->add_option("--out", test_args.out, "output prefix (<out>.json, <out>_hist.csv)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "exhaustive connectivity check at desk scale");
  verify->add_option("--theorem", verify_args.theorem, "prop1|thm1|thm2|thm3|conj-b02")->required();
  verify->add_option("--sizes", verify_args.sizes, "axis sizes J[,K]")->required();
  verify->add_option("--cap", verify_args.cap, "total-count cap (prop1,thm2) or trials cap (thm1,thm3,conj-b02)");
  verify->add_option("--node-guard", verify_args.node_guard, "max tables per fiber");
  verify->add_option("--out", verify_args.out, "counterexample CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (moves->parsed()) return run_moves(moves_args);
    if (fit->parsed()) return run_fit(fit_args);
    if (test->parsed()) return run_test(test_args);
    if (verify->parsed()) return run_verify(verify_args);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
