#pragma once

// JSON wire formats.  Rationals travel as canonical reduced "a/b" strings,
// complex numbers as {"re","im"}, magnitudes and disk radii as base-p
// exponents (|x| = p^exp).  Parsing is mode-directed: the same document
// reads differently only where scalars appear.

#include <berkfekete/bounds.hpp>
#include <berkfekete/dynamics.hpp>
#include <berkfekete/search.hpp>

#include <json.hpp>

namespace berkfekete::io {

using nlohmann::json;

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("JSON parse error: ") + e.what());
  }
}

// ---- scalars ---------------------------------------------------------------

inline json rat_json(const Rat& q) { return rat_to_string(q); }

inline Rat json_rat(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (!j.is_string()) throw parse_error("expected a rational string");
  return rat_from_string(j.get<std::string>());
}

inline json complex_json(const std::complex<double>& z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

inline std::complex<double> json_complex(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw parse_error("expected a complex number {\"re\",\"im\"}");
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

inline json scalar_json(const Scalar& s) {
  return s.is_rational() ? rat_json(s.rat()) : complex_json(s.cplx());
}

inline Scalar json_scalar(const json& j, const FieldMode& mode) {
  if (mode.is_padic()) return Scalar::rational(json_rat(j));
  return Scalar::complex_val(json_complex(j));
}

inline json magnitude_json(const Magnitude& m) {
  if (m.mode().is_arch()) return json{{"value", m.to_double()}};
  json j{{"approx", m.to_double()}};
  if (m.is_zero())
    j["exp"] = "-inf";
  else if (m.is_infinite())
    j["exp"] = "+inf";
  else
    j["exp"] = rat_to_string(m.exponent());
  return j;
}

inline Magnitude json_magnitude(const json& j, const FieldMode& mode) {
  if (mode.is_arch()) return Magnitude::arch(j.at("value").get<double>());
  auto e = j.at("exp").get<std::string>();
  if (e == "-inf") return Magnitude::zero(mode);
  if (e == "+inf") return Magnitude::infinite(mode);
  return Magnitude::p_power(mode.prime(), rat_from_string(e));
}

// ---- points ----------------------------------------------------------------

inline json proj_json(const ProjPoint& z) {
  if (z.is_inf()) return json{{"type", "infinity"}};
  return json{{"type", "classical"}, {"value", scalar_json(z.value())}};
}

inline ProjPoint json_proj(const json& j, const FieldMode& mode) {
  auto type = j.at("type").get<std::string>();
  if (type == "infinity") return ProjPoint::infinity();
  if (type == "classical") return ProjPoint::affine(json_scalar(j.at("value"), mode));
  throw parse_error("unknown point type '" + type + "'");
}

inline json berk_json(const BerkPoint& s) {
  switch (s.kind()) {
    case BerkPoint::Kind::Infinity: return json{{"type", "infinity"}};
    case BerkPoint::Kind::Classical:
      return json{{"type", "classical"}, {"value", scalar_json(s.center())}};
    default:
      return json{{"type", "disk"},
                  {"center", rat_json(s.center().rat())},
                  {"radius_exp", rat_to_string(s.radius().exponent())}};
  }
}

inline BerkPoint json_berk(const json& j, const FieldMode& mode) {
  auto type = j.at("type").get<std::string>();
  if (type == "infinity") return BerkPoint::infinity();
  if (type == "classical") return BerkPoint::classical(json_proj(j, mode));
  if (type == "disk") {
    if (mode.is_arch()) throw parse_error("disk points need --mode padic");
    return BerkPoint::disk(json_rat(j.at("center")),
                           Magnitude::p_power(mode.prime(),
                                              rat_from_string(j.at("radius_exp").get<std::string>())));
  }
  throw parse_error("unknown Berkovich point type '" + type + "'");
}

// ---- divisors and energies -------------------------------------------------

inline json divisor_json(const Divisor& z) {
  json arr = json::array();
  for (const auto& e : z.entries)
    arr.push_back(json{{"point", proj_json(e.point)}, {"mult", e.mult}});
  return arr;
}

inline Divisor json_divisor(const json& j, const FieldMode& mode) {
  if (!j.is_array()) throw parse_error("divisor: expected a JSON array");
  std::vector<Divisor::Entry> entries;
  for (const auto& item : j) {
    Divisor::Entry e;
    e.point = json_proj(item.at("point"), mode);
    e.mult = item.value("mult", 1);
    entries.push_back(std::move(e));
  }
  return Divisor::from_entries(std::move(entries));
}

inline json energy_json(const EnergyValue& v) {
  json j;
  j["exact"] = v.exact ? json(rat_to_string(*v.exact)) : json(nullptr);
  j["approx"] = v.approx;
  j["log_base_prime"] = v.log_base_prime ? json(*v.log_base_prime) : json(nullptr);
  return j;
}

inline EnergyValue json_energy(const json& j) {
  EnergyValue v;
  if (!j.at("exact").is_null()) v.exact = rat_from_string(j.at("exact").get<std::string>());
  v.approx = j.at("approx").get<double>();
  if (!j.at("log_base_prime").is_null()) v.log_base_prime = j.at("log_base_prime").get<std::uint64_t>();
  return v;
}

// ---- reports ----------------------------------------------------------------

inline json bound_report_json(const BoundReport& r) {
  return json{{"name", r.name},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"slack", r.slack},
              {"holds", r.holds},
              {"exactness", r.exactness == BoundReport::Exactness::Exact ? "exact" : "float"},
              {"metadata",
               json{{"n_points", r.meta.n_points},
                    {"epsilon", r.meta.epsilon},
                    {"weight", r.meta.weight},
                    {"C", r.meta.C},
                    {"Cprime", r.meta.Cprime},
                    {"kappa", r.meta.kappa},
                    {"eps_K", r.meta.eps_K},
                    {"sup_abs", r.meta.sup_abs},
                    {"sup_estimated", r.meta.sup_estimated}}}};
}

inline json quad_json(const QuadStatus& q) {
  return json{{"converged", q.converged}, {"disagreement", q.disagreement}};
}

inline json periodic_report_json(const PeriodicFeketeReport& r) {
  return json{{"n", r.n},
              {"degree", r.degree},
              {"point_count", r.point_count},
              {"sum", energy_json(r.sum)},
              {"predicted", energy_json(r.predicted)},
              {"ratio", r.ratio},
              {"ratio_predicted", r.ratio_predicted},
              {"match", r.match},
              {"squarefree", r.squarefree},
              {"single_slope", r.single_slope}};
}

// ---- weights and maps --------------------------------------------------------

inline PolyMap json_polymap(const json& j, const FieldMode& mode) {
  if (!j.contains("coeffs") || !j.at("coeffs").is_array())
    throw parse_error("polynomial: expected {\"coeffs\": [...]} ascending");
  if (mode.is_padic()) {
    std::vector<Rat> c;
    for (const auto& item : j.at("coeffs")) c.push_back(json_rat(item));
    return PolyMap::from_rational(RatPoly::from_coeffs(std::move(c)), mode);
  }
  std::vector<std::complex<double>> c;
  for (const auto& item : j.at("coeffs")) c.push_back(json_complex(item));
  return PolyMap::from_complex(std::move(c));
}

// {"builtin":"zero"|"g0"|"green", "f":{...}, "C":..., "kappa":...}
inline Weight json_weight(const json& j, const FieldMode& mode) {
  auto builtin = j.value("builtin", std::string("zero"));
  Weight g;
  if (builtin == "zero") {
    g = zero_weight(mode);
  } else if (builtin == "g0") {
    if (mode.is_padic()) throw parse_error("weight g0 is archimedean");
    g = g0_weight();
  } else if (builtin == "green") {
    if (!j.contains("f")) throw parse_error("green weight needs \"f\"");
    g = green_weight(json_polymap(j.at("f"), mode));
  } else {
    throw parse_error("unknown builtin weight '" + builtin + "'");
  }
  if (j.contains("C") || j.contains("kappa")) {
    HolderData h = g.holder.value_or(HolderData{});
    if (j.contains("C")) h.C = j.at("C").get<double>();
    if (j.contains("kappa")) h.kappa = j.at("kappa").get<double>();
    h.estimated = false;  // caller-supplied constants are declared
    g.holder = h;
  }
  return g;
}

// ---- search -------------------------------------------------------------------

inline json search_config_json(const SearchConfig& c) {
  return json{{"n", c.n_points},
              {"iterations", c.iterations},
              {"restarts", c.restarts},
              {"initial_step", c.initial_step},
              {"step_decay", c.step_decay},
              {"seed", c.seed},
              {"structured_seeds", c.include_structured_seeds}};
}

inline json search_result_json(const SearchResult& r) {
  return json{{"config", search_config_json(r.config)},
              {"best", divisor_json(r.best)},
              {"best_value", r.best_value},
              {"ratio", r.ratio},
              {"bound_report", bound_report_json(r.bound_report)}};
}

}  // namespace berkfekete::io
