#include "params_io.hpp"

#include <cmath>

#include "json.hpp"

#include "error.hpp"
#include "format.hpp"

namespace palm {

namespace {

std::string num_or_null(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string quoted(const std::string& s) { return '"' + json_escape(s) + '"'; }

std::string winner_list(const std::vector<std::pair<double, Verdict>>& entries) {
  std::string out = "[";
  bool first = true;
  for (const auto& [budget, verdict] : entries) {
    if (!first) out += ',';
    first = false;
    out += "{\"budget\":" + format_double(budget) + ",\"winner\":" +
           quoted(verdict_name(verdict)) + "}";
  }
  out += ']';
  return out;
}

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw Error(ErrorCode::json, std::string("missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

}  // namespace

ParamsDocument make_document(const PalmParams& params) {
  ParamsDocument doc;
  doc.params = params;
  return doc;
}

ParamsDocument make_document(const FitResult& fit, std::map<std::string, std::string> meta) {
  ParamsDocument doc;
  doc.params = fit.params;
  doc.sse = fit.sse;
  doc.rmse = fit.rmse;
  doc.converged = fit.converged;
  for (ParamId id : fit.boundary_flags) doc.boundary_flags.push_back(param_name(id));
  doc.meta = std::move(meta);
  if (fit.degenerate) doc.meta["degenerate"] = "true";
  return doc;
}

std::string to_json(const ParamsDocument& doc) {
  std::string out = "{";
  out += "\"schema_version\":" + quoted(kSchemaVersion);
  out += ",\"a_max\":" + format_double(doc.params.a_max);
  out += ",\"delta\":" + format_double(doc.params.delta);
  out += ",\"alpha\":" + format_double(doc.params.alpha);
  out += ",\"beta\":" + format_double(doc.params.beta);
  out += ",\"b\":" + format_double(doc.params.b);
  out += ",\"sse\":" + num_or_null(doc.sse);
  out += ",\"rmse\":" + num_or_null(doc.rmse);
  out += std::string(",\"converged\":") + (doc.converged ? "true" : "false");
  out += ",\"boundary_flags\":[";
  for (std::size_t i = 0; i < doc.boundary_flags.size(); ++i) {
    if (i) out += ',';
    out += quoted(doc.boundary_flags[i]);
  }
  out += "],\"meta\":{";
  bool first = true;
  for (const auto& [key, value] : doc.meta) {
    if (!first) out += ',';
    first = false;
    out += quoted(key) + ":" + quoted(value);
  }
  out += "}}";
  return out;
}

ParamsDocument params_document_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::json, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::json, "parameter document must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_string() ||
      j["schema_version"].get<std::string>() != kSchemaVersion)
    throw Error(ErrorCode::json,
                std::string("schema mismatch: expected schema_version \"") + kSchemaVersion +
                    "\"");
  ParamsDocument doc;
  doc.params.a_max = require_number(j, "a_max");
  doc.params.delta = require_number(j, "delta");
  doc.params.alpha = require_number(j, "alpha");
  doc.params.beta = require_number(j, "beta");
  doc.params.b = require_number(j, "b");
  if (j.contains("sse") && j["sse"].is_number()) doc.sse = j["sse"].get<double>();
  if (j.contains("rmse") && j["rmse"].is_number()) doc.rmse = j["rmse"].get<double>();
  if (j.contains("converged") && j["converged"].is_boolean())
    doc.converged = j["converged"].get<bool>();
  if (j.contains("boundary_flags") && j["boundary_flags"].is_array())
    for (const auto& flag : j["boundary_flags"])
      if (flag.is_string()) doc.boundary_flags.push_back(flag.get<std::string>());
  if (j.contains("meta") && j["meta"].is_object())
    for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it)
      if (it.value().is_string()) doc.meta[it.key()] = it.value().get<std::string>();
  validate(doc.params);
  return doc;
}

std::string to_json(const ComparisonReport& report) {
  std::string out = "{";
  out += "\"schema_version\":" + quoted(kSchemaVersion);
  out += ",\"winner_at\":" + winner_list(report.winner_at);
  out += ",\"crossovers\":[";
  for (std::size_t i = 0; i < report.crossovers.size(); ++i) {
    if (i) out += ',';
    out += format_double(report.crossovers[i]);
  }
  out += "],\"asymptotic_winner\":" + quoted(verdict_name(report.asymptotic_winner));
  out += ",\"slope_winner_at\":" + winner_list(report.slope_winner_at);
  const auto& pb = report.parameter_breakdown;
  out += ",\"parameter_breakdown\":{";
  out += "\"higher_a_max\":" + quoted(verdict_name(pb.higher_a_max));
  out += ",\"higher_delta\":" + quoted(verdict_name(pb.higher_delta));
  out += ",\"lower_alpha\":" + quoted(verdict_name(pb.lower_alpha));
  out += ",\"higher_beta\":" + quoted(verdict_name(pb.higher_beta));
  out += ",\"lower_b\":" + quoted(verdict_name(pb.lower_b));
  out += "}}";
  return out;
}

std::string to_json(const PredictionReport& report) {
  std::string out = "{";
  out += "\"schema_version\":" + quoted(kSchemaVersion);
  out += ",\"prefix_size\":" + std::to_string(report.prefix_size);
  out += ",\"fitted\":" + to_json(make_document(report.fitted));
  out += ",\"predictions\":[";
  for (std::size_t i = 0; i < report.predictions.size(); ++i) {
    if (i) out += ',';
    out += "{\"budget\":" + format_double(report.predictions[i].first) +
           ",\"accuracy\":" + format_double(report.predictions[i].second) + "}";
  }
  out += "],\"holdout_errors\":[";
  for (std::size_t i = 0; i < report.holdout_errors.size(); ++i) {
    if (i) out += ',';
    out += format_double(report.holdout_errors[i]);
  }
  out += "],\"mae\":" + format_double(report.mae);
  out += ",\"rmse\":" + format_double(report.rmse);
  out += ",\"max_abs_err\":" + format_double(report.max_abs_err);
  out += "}";
  return out;
}

std::string budget_to_json(const BudgetRequirement& req) {
  return "{\"schema_version\":" + quoted(kSchemaVersion) +
         ",\"budget_samples\":" + format_double(req.samples) +
         ",\"budget_iterations\":" + format_double(req.iterations) + "}";
}

std::string predictions_csv(const PalmParams& params, const std::vector<double>& budgets) {
  std::string out = "budget,accuracy\n";
  for (double budget : budgets) {
    out += format_double(budget);
    out += ',';
    out += format_double(palm_accuracy(params, budget));
    out += '\n';
  }
  return out;
}

}  // namespace palm
