#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "priceopt/scenario.hpp"

namespace priceopt {

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* field,
                                           const std::string& where) {
  auto it = j.find(field);
  if (it == j.end())
    throw validation_error("missing field '" + std::string(field) + "' in " + where);
  return *it;
}

inline double require_number(const nlohmann::json& j, const char* field,
                             const std::string& where) {
  const nlohmann::json& v = require_field(j, field, where);
  if (!v.is_number())
    throw validation_error("field '" + std::string(field) + "' in " + where +
                           " must be a number");
  return v.get<double>();
}

inline ValueWeight weight_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw validation_error(where + " must be an object");
  const std::string form = require_field(j, "form", where).get<std::string>();
  const nlohmann::json& params = require_field(j, "params", where);
  if (form == "constant") return ValueWeight::constant(require_number(params, "c", where));
  if (form == "exponential_decay")
    return ValueWeight::exponential_decay(require_number(params, "rate", where));
  if (form == "linear") return ValueWeight::linear(require_number(params, "slope", where));
  if (form == "sampled") {
    const nlohmann::json& pts = require_field(params, "points", where);
    if (!pts.is_array()) throw validation_error(where + ".params.points must be an array");
    std::vector<ValueWeight::Sample> samples;
    for (const auto& p : pts)
      samples.push_back({require_number(p, "t", where + ".points"),
                         require_number(p, "value", where + ".points")});
    return ValueWeight::sampled(std::move(samples));
  }
  throw validation_error("unknown weight form '" + form + "' in " + where);
}

inline nlohmann::json weight_to_json(const ValueWeight& w) {
  nlohmann::json j;
  switch (w.form()) {
    case ValueWeight::Form::constant:
      j["form"] = "constant";
      j["params"] = {{"c", w.param()}};
      break;
    case ValueWeight::Form::exponential_decay:
      j["form"] = "exponential_decay";
      j["params"] = {{"rate", w.param()}};
      break;
    case ValueWeight::Form::linear:
      j["form"] = "linear";
      j["params"] = {{"slope", w.param()}};
      break;
    case ValueWeight::Form::sampled: {
      j["form"] = "sampled";
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& s : w.samples()) pts.push_back({{"t", s.t}, {"value", s.value}});
      j["params"] = {{"points", std::move(pts)}};
      break;
    }
  }
  return j;
}

}  // namespace detail

inline constexpr int kScenarioSchemaVersion = 1;

/// Parses the scenario JSON schema:
///   { "schema_version": 1, "horizon_days": T, "total_stock": S,
///     "demand": [{"t", "rate"}...], "phi": {...}, "kappa": {...},
///     "propensity": {"form": "linear", "a", "b"} | {"form": "table", "points"},
///     "constraints": [{"tau", "min_sales"?, "min_revenue"?}...] }
inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::require_field;
  using detail::require_number;
  if (!j.is_object()) throw validation_error("scenario must be a JSON object");

  const nlohmann::json& ver = require_field(j, "schema_version", "scenario");
  if (!ver.is_number_integer() || ver.get<int>() != kScenarioSchemaVersion)
    throw validation_error("unsupported scenario schema_version");

  const double horizon = require_number(j, "horizon_days", "scenario");
  const double stock = require_number(j, "total_stock", "scenario");

  const nlohmann::json& dj = require_field(j, "demand", "scenario");
  if (!dj.is_array()) throw validation_error("field 'demand' must be an array");
  std::vector<DemandCurve::Point> points;
  for (const auto& p : dj)
    points.push_back({require_number(p, "t", "demand"), require_number(p, "rate", "demand")});
  DemandCurve demand(std::move(points));

  ValueWeight phi = detail::weight_from_json(require_field(j, "phi", "scenario"), "phi");
  ValueWeight kappa = detail::weight_from_json(require_field(j, "kappa", "scenario"), "kappa");

  const nlohmann::json& pj = require_field(j, "propensity", "scenario");
  const std::string form = require_field(pj, "form", "propensity").get<std::string>();
  Propensity propensity = Propensity::linear(1.0, 1.0);
  if (form == "linear") {
    propensity = Propensity::linear(require_number(pj, "a", "propensity"),
                                    require_number(pj, "b", "propensity"));
  } else if (form == "table") {
    const nlohmann::json& pts = require_field(pj, "points", "propensity");
    if (!pts.is_array()) throw validation_error("propensity.points must be an array");
    std::vector<Propensity::Sample> samples;
    for (const auto& p : pts)
      samples.push_back({require_number(p, "price", "propensity.points"),
                         require_number(p, "fraction", "propensity.points")});
    propensity = Propensity::tabulated(std::move(samples));
  } else {
    throw validation_error("unknown propensity form '" + form + "'");
  }

  std::vector<ConstraintEntry> entries;
  if (auto it = j.find("constraints"); it != j.end()) {
    if (!it->is_array()) throw validation_error("field 'constraints' must be an array");
    for (const auto& c : *it) {
      ConstraintEntry e;
      e.tau = require_number(c, "tau", "constraints");
      if (c.contains("min_sales")) e.min_sales = c["min_sales"].get<double>();
      if (c.contains("min_revenue")) e.min_revenue = c["min_revenue"].get<double>();
      entries.push_back(e);
    }
  }

  return Scenario(std::move(demand), std::move(phi), std::move(kappa), std::move(propensity),
                  ConstraintSchedule(horizon, stock, std::move(entries)));
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["horizon_days"] = s.horizon();
  j["total_stock"] = s.schedule().total_stock();
  nlohmann::json demand = nlohmann::json::array();
  for (const auto& p : s.demand().points()) demand.push_back({{"t", p.t}, {"rate", p.rate}});
  j["demand"] = std::move(demand);
  j["phi"] = detail::weight_to_json(s.phi());
  j["kappa"] = detail::weight_to_json(s.kappa());
  if (s.propensity().is_linear()) {
    j["propensity"] = {{"form", "linear"},
                       {"a", s.propensity().linear_a()},
                       {"b", s.propensity().linear_b()}};
  } else {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : s.propensity().samples())
      pts.push_back({{"price", p.price}, {"fraction", p.fraction}});
    j["propensity"] = {{"form", "table"}, {"points", std::move(pts)}};
  }
  nlohmann::json constraints = nlohmann::json::array();
  for (std::size_t i = 1; i < s.schedule().grid_size(); ++i) {
    constraints.push_back({{"tau", s.schedule().tau(i)},
                           {"min_sales", s.schedule().min_sales(i)},
                           {"min_revenue", s.schedule().min_revenue(i)}});
  }
  j["constraints"] = std::move(constraints);
  return j;
}

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("malformed JSON in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace priceopt
