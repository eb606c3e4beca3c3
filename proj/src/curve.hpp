#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace palm {

/// One observation of a learning curve.
struct CurvePoint {
  double budget;      ///< cumulative labeled samples, >= 0
  double accuracy;    ///< percent in [0, 100]
  int replicate = 0;  ///< optional repetition label
};

/// Immutable, validated learning curve. Points are kept sorted by
/// (replicate, budget); budgets are strictly increasing within a replicate.
/// Safe to share across threads after construction.
class LearningCurve {
public:
  /// Sorts and validates `points`. If `b <= 0` the mean per-iteration budget
  /// is inferred as the mean gap between consecutive budgets of the first
  /// replicate (requires at least two points there).
  LearningCurve(std::vector<CurvePoint> points, double b,
                std::map<std::string, std::string> meta = {},
                bool replicated = false);

  const std::vector<CurvePoint>& points() const { return points_; }
  double b() const { return b_; }
  const std::map<std::string, std::string>& meta() const { return meta_; }

  /// True when the curve carries meaningful replicate labels (a `rep` CSV
  /// column is written back out only in that case).
  bool replicated() const { return replicated_; }

  std::size_t size() const { return points_.size(); }

  /// Sorted unique budgets across all replicates.
  std::vector<double> distinct_budgets() const;

  /// Sorted unique replicate labels.
  std::vector<int> replicate_labels() const;

  double max_accuracy() const;
  double min_accuracy() const;

private:
  std::vector<CurvePoint> points_;
  double b_;
  std::map<std::string, std::string> meta_;
  bool replicated_;
};

struct LoadOptions {
  double b = 0.0;         ///< positive value overrides inference
  bool fraction = false;  ///< accuracies arrive in [0, 1] and are scaled by 100
};

/// Reads the canonical CSV format: UTF-8, header row with required columns
/// `budget` and `accuracy` plus optional `rep`, '#'-prefixed comment lines
/// skipped, decimal point only. Throws Error(parse) with a 1-based line
/// number on malformed input and Error(validation) on out-of-range values.
/// Non-error observations (e.g. all accuracies <= 1 without fraction mode)
/// are appended to `warnings` when given.
LearningCurve load_curve(std::istream& in, const LoadOptions& options = {},
                         std::vector<std::string>* warnings = nullptr);
LearningCurve load_curve(const std::string& text, const LoadOptions& options = {},
                         std::vector<std::string>* warnings = nullptr);
LearningCurve load_curve_file(const std::string& path, const LoadOptions& options = {},
                              std::vector<std::string>* warnings = nullptr);

enum class AggregateStat { mean, min, max };

/// Collapses replicates to a single curve whose accuracy at each budget is
/// the chosen statistic. All replicates must share the same budget grid.
LearningCurve aggregate_replicates(const LearningCurve& curve, AggregateStat stat);

/// Keeps the first `n_points` distinct budgets (all replicate observations
/// at those budgets); b and metadata are preserved.
LearningCurve prefix(const LearningCurve& curve, std::size_t n_points);

/// Serializes in the same CSV format load_curve reads. Output of this
/// function round-trips bit-identically through load_curve.
std::string to_csv(const LearningCurve& curve);

}  // namespace palm
