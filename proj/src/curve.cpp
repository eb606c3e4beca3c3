#include "curve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "error.hpp"
#include "format.hpp"

namespace palm {

namespace {

[[noreturn]] void fail_validation(const std::string& msg) {
  throw Error(ErrorCode::validation, msg);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw Error(ErrorCode::parse,
                "line " + std::to_string(line_no) + ": malformed number '" + token + "'",
                line_no);
  return value;
}

int parse_replicate(const std::string& token, std::size_t line_no) {
  int value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw Error(ErrorCode::parse,
                "line " + std::to_string(line_no) + ": malformed replicate '" + token + "'",
                line_no);
  return value;
}

}  // namespace

LearningCurve::LearningCurve(std::vector<CurvePoint> points, double b,
                             std::map<std::string, std::string> meta, bool replicated)
    : points_(std::move(points)), b_(b), meta_(std::move(meta)), replicated_(replicated) {
  if (points_.empty()) fail_validation("curve must contain at least one point");
  std::stable_sort(points_.begin(), points_.end(), [](const CurvePoint& a, const CurvePoint& d) {
    if (a.replicate != d.replicate) return a.replicate < d.replicate;
    return a.budget < d.budget;
  });
  for (const CurvePoint& pt : points_) {
    if (!std::isfinite(pt.budget) || pt.budget < 0.0)
      fail_validation("budget must be finite and >= 0, got " + format_double(pt.budget));
    if (!std::isfinite(pt.accuracy) || pt.accuracy < 0.0 || pt.accuracy > 100.0)
      fail_validation("accuracy must be in [0, 100], got " + format_double(pt.accuracy));
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].replicate == points_[i - 1].replicate &&
        points_[i].budget == points_[i - 1].budget)
      fail_validation("duplicate budget " + format_double(points_[i].budget) +
                      " within replicate " + std::to_string(points_[i].replicate));
  }
  if (!(b_ > 0.0)) {
    // Mean of consecutive budget gaps of the first replicate; the mean of
    // the deltas telescopes to (last - first) / (n - 1).
    const int first_rep = points_.front().replicate;
    std::size_t n = 0;
    while (n < points_.size() && points_[n].replicate == first_rep) ++n;
    if (n < 2)
      fail_validation("cannot infer b from fewer than two points; supply b explicitly");
    b_ = (points_[n - 1].budget - points_.front().budget) / static_cast<double>(n - 1);
  }
  if (!std::isfinite(b_) || b_ <= 0.0)
    fail_validation("b must be finite and > 0, got " + format_double(b_));
}

std::vector<double> LearningCurve::distinct_budgets() const {
  std::set<double> budgets;
  for (const CurvePoint& pt : points_) budgets.insert(pt.budget);
  return {budgets.begin(), budgets.end()};
}

std::vector<int> LearningCurve::replicate_labels() const {
  std::set<int> labels;
  for (const CurvePoint& pt : points_) labels.insert(pt.replicate);
  return {labels.begin(), labels.end()};
}

double LearningCurve::max_accuracy() const {
  double m = points_.front().accuracy;
  for (const CurvePoint& pt : points_) m = std::max(m, pt.accuracy);
  return m;
}

double LearningCurve::min_accuracy() const {
  double m = points_.front().accuracy;
  for (const CurvePoint& pt : points_) m = std::min(m, pt.accuracy);
  return m;
}

LearningCurve load_curve(std::istream& in, const LoadOptions& options,
                         std::vector<std::string>* warnings) {
  std::string line;
  std::size_t line_no = 0;

  // Header: first non-comment, non-empty line.
  std::size_t budget_col = 0, accuracy_col = 0, rep_col = 0;
  bool has_rep = false;
  std::size_t n_cols = 0;
  bool header_seen = false;
  std::vector<CurvePoint> points;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_row(line);
    if (!header_seen) {
      header_seen = true;
      n_cols = fields.size();
      bool has_budget = false, has_accuracy = false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "budget") {
          if (has_budget)
            throw Error(ErrorCode::parse, "line 1: duplicate 'budget' column", line_no);
          has_budget = true;
          budget_col = i;
        } else if (fields[i] == "accuracy") {
          if (has_accuracy)
            throw Error(ErrorCode::parse, "line 1: duplicate 'accuracy' column", line_no);
          has_accuracy = true;
          accuracy_col = i;
        } else if (fields[i] == "rep") {
          if (has_rep)
            throw Error(ErrorCode::parse, "line 1: duplicate 'rep' column", line_no);
          has_rep = true;
          rep_col = i;
        }
      }
      if (!has_budget || !has_accuracy)
        throw Error(ErrorCode::parse,
                    "header must contain 'budget' and 'accuracy' columns", line_no);
      continue;
    }
    if (fields.size() != n_cols)
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) + ": expected " + std::to_string(n_cols) +
                      " fields, got " + std::to_string(fields.size()),
                  line_no);
    CurvePoint pt;
    pt.budget = parse_double(fields[budget_col], line_no);
    pt.accuracy = parse_double(fields[accuracy_col], line_no);
    if (has_rep) pt.replicate = parse_replicate(fields[rep_col], line_no);
    if (options.fraction) pt.accuracy *= 100.0;
    points.push_back(pt);
  }
  if (!header_seen) throw Error(ErrorCode::parse, "empty input: missing header row");
  if (points.empty()) throw Error(ErrorCode::validation, "no data rows");

  if (!options.fraction && warnings) {
    bool all_small = true;
    for (const CurvePoint& pt : points)
      if (pt.accuracy > 1.0) { all_small = false; break; }
    if (all_small)
      warnings->push_back(
          "all accuracies are <= 1; if they are fractions rather than percents, "
          "enable fraction mode");
  }

  return LearningCurve(std::move(points), options.b, {}, has_rep);
}

LearningCurve load_curve(const std::string& text, const LoadOptions& options,
                         std::vector<std::string>* warnings) {
  std::istringstream in(text);
  return load_curve(in, options, warnings);
}

LearningCurve load_curve_file(const std::string& path, const LoadOptions& options,
                              std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  return load_curve(in, options, warnings);
}

LearningCurve aggregate_replicates(const LearningCurve& curve, AggregateStat stat) {
  const auto labels = curve.replicate_labels();
  if (labels.size() == 1) return curve;

  // Group per replicate, preserving the sorted in-replicate order.
  std::vector<std::vector<CurvePoint>> groups;
  for (int label : labels) {
    std::vector<CurvePoint> group;
    for (const CurvePoint& pt : curve.points())
      if (pt.replicate == label) group.push_back(pt);
    groups.push_back(std::move(group));
  }
  const std::size_t grid = groups.front().size();
  for (std::size_t g = 1; g < groups.size(); ++g) {
    if (groups[g].size() != grid)
      throw Error(ErrorCode::grid_mismatch, "replicates have different numbers of budgets");
    for (std::size_t i = 0; i < grid; ++i)
      if (groups[g][i].budget != groups[0][i].budget)
        throw Error(ErrorCode::grid_mismatch,
                    "replicate budget grids differ at budget " +
                        format_double(groups[0][i].budget));
  }

  std::vector<CurvePoint> out;
  out.reserve(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    double acc = 0.0;
    switch (stat) {
      case AggregateStat::mean: {
        double sum = 0.0;
        for (const auto& g : groups) sum += g[i].accuracy;
        acc = sum / static_cast<double>(groups.size());
        break;
      }
      case AggregateStat::min: {
        acc = groups.front()[i].accuracy;
        for (const auto& g : groups) acc = std::min(acc, g[i].accuracy);
        break;
      }
      case AggregateStat::max: {
        acc = groups.front()[i].accuracy;
        for (const auto& g : groups) acc = std::max(acc, g[i].accuracy);
        break;
      }
    }
    out.push_back({groups.front()[i].budget, acc, 0});
  }
  return LearningCurve(std::move(out), curve.b(), curve.meta(), false);
}

LearningCurve prefix(const LearningCurve& curve, std::size_t n_points) {
  const auto budgets = curve.distinct_budgets();
  if (n_points < 1 || n_points > budgets.size())
    throw Error(ErrorCode::range, "prefix size " + std::to_string(n_points) +
                                      " outside [1, " + std::to_string(budgets.size()) + "]");
  const double cutoff = budgets[n_points - 1];
  std::vector<CurvePoint> kept;
  for (const CurvePoint& pt : curve.points())
    if (pt.budget <= cutoff) kept.push_back(pt);
  return LearningCurve(std::move(kept), curve.b(), curve.meta(), curve.replicated());
}

std::string to_csv(const LearningCurve& curve) {
  std::string out = curve.replicated() ? "budget,accuracy,rep\n" : "budget,accuracy\n";
  for (const CurvePoint& pt : curve.points()) {
    out += format_double(pt.budget);
    out += ',';
    out += format_double(pt.accuracy);
    if (curve.replicated()) {
      out += ',';
      out += std::to_string(pt.replicate);
    }
    out += '\n';
  }
  return out;
}

}  // namespace palm
