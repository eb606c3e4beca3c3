#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "fitter.hpp"
#include "model.hpp"

namespace palm {

inline constexpr const char* kSchemaVersion = "palm/1";

/// The serialized form of a (possibly fitted) parameter set: the "palm/1"
/// JSON schema. sse/rmse are NaN (serialized as null) for documents that did
/// not come from a fit.
struct ParamsDocument {
  PalmParams params{};
  double sse = std::numeric_limits<double>::quiet_NaN();
  double rmse = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  std::vector<std::string> boundary_flags;
  std::map<std::string, std::string> meta;
};

ParamsDocument make_document(const PalmParams& params);
ParamsDocument make_document(const FitResult& fit,
                             std::map<std::string, std::string> meta = {});

/// Serialization is lossless: numbers carry 17 significant digits and key
/// order is fixed, so identical documents produce identical bytes.
std::string to_json(const ParamsDocument& doc);
ParamsDocument params_document_from_json(const std::string& text);

std::string to_json(const ComparisonReport& report);
std::string to_json(const PredictionReport& report);

/// {"budget_samples": ..., "budget_iterations": ...}
std::string budget_to_json(const BudgetRequirement& req);

/// The canonical curve CSV with the model evaluated at each budget.
std::string predictions_csv(const PalmParams& params, const std::vector<double>& budgets);

}  // namespace palm
