// palm - command-line front end for the palm learning-curve library.
//
// Subcommands: fit, predict, compare, invert, gen. Curves travel as CSV,
// parameters as "palm/1" JSON documents. Everything goes through the C API
// in palm.h.
//
// Exit codes: 0 success (fit: clean converged fit), 1 error (a JSON error
// document is written to stdout), 2 fit completed but degenerate or with
// parameters pinned at bounds (document still written).

#include "palm.h"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

struct CliError {
  palm_status status;
};

// Prints the machine-readable error document for the last C API failure and
// signals exit code 1.
[[noreturn]] void fail(palm_status status) { throw CliError{status}; }

void check(palm_status status) {
  if (status != PALM_OK) fail(status);
}

std::string read_input(const std::string& path_or_dash) {
  if (path_or_dash == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path_or_dash);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", path_or_dash.c_str());
    std::exit(1);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

palm_params load_params(const std::string& path_or_dash) {
  const std::string text = read_input(path_or_dash);
  palm_params params{};
  check(palm_params_from_json(text.c_str(), &params));
  return params;
}

// "start:stop:step", inclusive of stop when it is exactly reachable.
std::vector<double> parse_budget_range(const std::string& spec) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char extra = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &extra) != 3 ||
      !(step > 0.0) || stop < start) {
    std::fprintf(stderr, "error: malformed budget range '%s' (want start:stop:step)\n",
                 spec.c_str());
    std::exit(1);
  }
  std::vector<double> budgets;
  const double span = (stop - start) / step;
  const auto count = static_cast<long long>(std::floor(span + 1e-9));
  for (long long k = 0; k <= count; ++k)
    budgets.push_back(start + static_cast<double>(k) * step);
  return budgets;
}

std::vector<double> budgets_from_csv(const std::string& path) {
  const std::string text = read_input(path);
  palm_curve* curve = nullptr;
  check(palm_curve_parse_csv(text.c_str(), nullptr, &curve));
  std::vector<double> budgets;
  const size_t n = palm_curve_point_count(curve);
  double prev = -1.0;
  for (size_t i = 0; i < n; ++i) {
    double budget = 0.0;
    palm_curve_point(curve, i, &budget, nullptr, nullptr);
    if (budget != prev) budgets.push_back(budget);  // collapse replicate rows
    prev = budget;
  }
  palm_curve_free(curve);
  return budgets;
}

void print_owned(char* text, bool newline) {
  std::fputs(text, stdout);
  if (newline) std::fputc('\n', stdout);
  palm_string_free(text);
}

int cmd_fit(const std::string& input, double b, std::size_t points, const std::string& agg,
            bool fraction, const std::string& output) {
  const std::string text = read_input(input);
  palm_ingest_options options{b, fraction ? 1 : 0};
  palm_curve* curve = nullptr;
  check(palm_curve_parse_csv(text.c_str(), &options, &curve));
  if (const char* warnings = palm_curve_warnings(curve); warnings && *warnings)
    std::fprintf(stderr, "warning: %s\n", warnings);

  if (!agg.empty()) {
    palm_curve* collapsed = nullptr;
    const palm_status st = palm_curve_aggregate(curve, agg.c_str(), &collapsed);
    palm_curve_free(curve);
    check(st);
    curve = collapsed;
  }
  if (points > 0) {
    palm_curve* cut = nullptr;
    const palm_status st = palm_curve_prefix(curve, points, &cut);
    palm_curve_free(curve);
    check(st);
    curve = cut;
  }

  palm_fit_result* result = nullptr;
  const palm_status st = palm_fit(curve, nullptr, &result);
  palm_curve_free(curve);
  check(st);

  char* json = nullptr;
  check(palm_fit_result_to_json(result, &json));
  const bool clean = palm_fit_result_degenerate(result) == 0 &&
                     palm_fit_result_boundary_flags(result) == 0;
  palm_fit_result_free(result);

  if (output.empty()) {
    print_owned(json, true);
  } else {
    std::ofstream out(output);
    if (!out) {
      palm_string_free(json);
      std::fprintf(stderr, "error: cannot write '%s'\n", output.c_str());
      return 1;
    }
    out << json << '\n';
    palm_string_free(json);
  }
  return clean ? 0 : 2;
}

int cmd_predict(const std::string& params_path, const std::string& range,
                const std::string& budgets_file) {
  const palm_params params = load_params(params_path);
  const std::vector<double> budgets =
      !range.empty() ? parse_budget_range(range) : budgets_from_csv(budgets_file);
  char* csv = nullptr;
  check(palm_predict_csv(&params, budgets.data(), budgets.size(), &csv));
  print_owned(csv, false);
  return 0;
}

int cmd_compare(const std::string& first_path, const std::string& second_path,
                const std::string& range) {
  const palm_params first = load_params(first_path);
  const palm_params second = load_params(second_path);
  const std::vector<double> budgets = parse_budget_range(range);
  char* json = nullptr;
  check(palm_compare_json(&first, &second, budgets.data(), budgets.size(), &json));
  print_owned(json, true);
  return 0;
}

int cmd_invert(const std::string& params_path, double target) {
  const palm_params params = load_params(params_path);
  char* json = nullptr;
  check(palm_required_budget_json(&params, target, &json));
  print_owned(json, true);
  return 0;
}

int cmd_gen(const palm_params& params, int iters, double noise, std::uint64_t seed,
            int reps) {
  palm_curve* curve = nullptr;
  check(palm_generate(&params, iters, noise, seed, reps, &curve));
  char* csv = nullptr;
  const palm_status st = palm_curve_to_csv(curve, &csv);
  palm_curve_free(curve);
  check(st);
  print_owned(csv, false);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit, extrapolate and compare active-learning accuracy curves"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit model parameters to a curve CSV");
  std::string fit_input = "-";
  double fit_b = 0.0;
  std::size_t fit_points = 0;
  std::string fit_agg;
  bool fit_fraction = false;
  std::string fit_output;
  fit->add_option("--input", fit_input, "Curve CSV path, or - for stdin");
  fit->add_option("--b", fit_b, "Mean budget per iteration (default: inferred)");
  fit->add_option("--points", fit_points, "Fit only the first N budgets");
  fit->add_option("--agg", fit_agg, "Aggregate replicates first")
      ->check(CLI::IsMember({"mean", "min", "max"}));
  fit->add_flag("--fraction", fit_fraction, "Accuracies are fractions in [0,1]");
  fit->add_option("--output", fit_output, "Write the document here instead of stdout");

  // predict
  auto* predict = app.add_subcommand("predict", "Evaluate a fitted model over budgets");
  std::string predict_params = "-";
  std::string predict_range;
  std::string predict_from;
  predict->add_option("--params", predict_params, "Parameter JSON path, or - for stdin");
  auto* range_opt =
      predict->add_option("--budgets", predict_range, "Budget grid start:stop:step");
  auto* from_opt =
      predict->add_option("--budgets-from", predict_from, "Take budgets from a curve CSV");
  range_opt->excludes(from_opt);

  // compare
  auto* compare = app.add_subcommand("compare", "Compare two fitted models");
  std::string compare_first, compare_second, compare_range;
  compare->add_option("--first", compare_first, "First parameter JSON")->required();
  compare->add_option("--second", compare_second, "Second parameter JSON")->required();
  compare->add_option("--budgets", compare_range, "Budget grid start:stop:step")
      ->required();

  // invert
  auto* invert = app.add_subcommand("invert", "Budget needed for a target accuracy");
  std::string invert_params = "-";
  double invert_target = 0.0;
  invert->add_option("--params", invert_params, "Parameter JSON path, or - for stdin");
  invert->add_option("--target", invert_target, "Target accuracy, percent")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic curve CSV");
  palm_params gen_params{0, 0, 0, 0, 0};
  int gen_iters = 0;
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 1;
  int gen_reps = 1;
  gen->add_option("--a-max", gen_params.a_max, "Accuracy ceiling, percent")->required();
  gen->add_option("--delta", gen_params.delta, "Coverage per sample")->required();
  gen->add_option("--alpha", gen_params.alpha, "Learning-onset shift")->required();
  gen->add_option("--beta", gen_params.beta, "Growth-scaling exponent")->required();
  gen->add_option("--b", gen_params.b, "Samples per iteration")->required();
  gen->add_option("--iters", gen_iters, "Number of iterations")->required();
  gen->add_option("--noise", gen_noise, "Gaussian noise sigma, percent-points");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--reps", gen_reps, "Number of replicates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // usage errors to stderr, nonzero exit (0 for --help)
  }

  try {
    if (fit->parsed())
      return cmd_fit(fit_input, fit_b, fit_points, fit_agg, fit_fraction, fit_output);
    if (predict->parsed()) {
      if (predict_range.empty() && predict_from.empty()) {
        std::fprintf(stderr, "error: predict needs --budgets or --budgets-from\n");
        return 1;
      }
      return cmd_predict(predict_params, predict_range, predict_from);
    }
    if (compare->parsed()) return cmd_compare(compare_first, compare_second, compare_range);
    if (invert->parsed()) return cmd_invert(invert_params, invert_target);
    if (gen->parsed()) return cmd_gen(gen_params, gen_iters, gen_noise, gen_seed, gen_reps);
  } catch (const CliError& e) {
    char* json = nullptr;
    if (palm_error_json(e.status, &json) == PALM_OK) {
      print_owned(json, true);
    } else {
      std::fprintf(stderr, "error: %s\n", palm_last_error());
    }
    return 1;
  }
  return 0;
}
