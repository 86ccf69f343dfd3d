#pragma once

// JSON encodings. Big integers travel as decimal strings.

#include <string>
#include <vector>

#include <json.hpp>

#include "toricurves/dim_series.hpp"
#include "toricurves/euler_product.hpp"
#include "toricurves/fan.hpp"
#include "toricurves/laurent.hpp"
#include "toricurves/mobius.hpp"
#include "toricurves/moduli.hpp"
#include "toricurves/oracle.hpp"

namespace toricurves {

using nlohmann::json;

inline BigInt big_from_string(const std::string& s) {
  BigInt out;
  if (s.empty() || out.set_str(s, 10) != 0) throw ValidationError("not a decimal integer: \"" + s + "\"");
  return out;
}

inline json to_json(const LaurentClass& x) {
  json coeffs = json::object();
  for (const auto& [e, c] : x.terms()) coeffs[std::to_string(e)] = c.get_str();
  return {{"coeffs", coeffs}};
}

inline LaurentClass laurent_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_object()) throw ValidationError("Laurent class JSON needs a \"coeffs\" object");
  LaurentClass::Terms terms;
  for (const auto& [key, val] : j["coeffs"].items()) {
    std::size_t used = 0;
    int e = 0;
    try {
      e = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size()) throw ValidationError("bad exponent key \"" + key + "\"");
    if (!val.is_string()) throw ValidationError("coefficients must be decimal strings");
    terms[e] = big_from_string(val.get<std::string>());
  }
  return LaurentClass::from_terms(std::move(terms));
}

inline json to_json(const DimSeries& x) {
  json j = to_json(x.known());
  if (x.floor()) {
    j["floor"] = *x.floor();
  } else {
    j["floor"] = "exact";
  }
  return j;
}

inline DimSeries dim_series_from_json(const json& j) {
  const LaurentClass known = laurent_from_json(j);
  if (!j.contains("floor")) throw ValidationError("DimSeries JSON needs \"floor\"");
  const auto& f = j["floor"];
  if (f.is_string() && f.get<std::string>() == "exact") return DimSeries::exact(known);
  if (!f.is_number_integer()) throw ValidationError("floor must be an integer or \"exact\"");
  return DimSeries::truncated(known, f.get<int>());
}

inline json to_json(const Dimension& d) {
  if (d.is_minus_infinity()) return "-inf";
  return d.value();
}

inline Dimension dimension_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "-inf") return Dimension::minus_infinity();
  if (!j.is_number_integer()) throw ValidationError("dimension must be an integer or \"-inf\"");
  return Dimension(j.get<int>());
}

inline json to_json(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw ValidationError("rational must be a string");
  Rational q;
  if (q.set_str(j.get<std::string>(), 10) != 0) throw ValidationError("bad rational \"" + j.get<std::string>() + "\"");
  q.canonicalize();
  return q;
}

inline json to_json(const FanReport& r) {
  return {{"smooth", r.smooth}, {"complete", r.complete}, {"details", r.details}, {"warnings", r.warnings}};
}

inline json to_json(const PicardData& p) { return {{"rank", p.rank}, {"projection", p.projection}}; }

/// Nonzero entries only, in weight-then-lexicographic order.
inline json to_json(const MobiusTable& t) {
  json out = json::array();
  for (std::uint32_t m : t.ordered_masks())
    if (t.at_mask(m) != 0) out.push_back({{"n", PatternSet::to_vector(m, t.nvars())}, {"mu", t.at_mask(m)}});
  return out;
}

inline json to_json(const IntPoly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exp", e}, {"coeff", c.get_si()}});
  return {{"terms", terms}};
}

inline json to_json(const GlobalMobius& gm) {
  json out = json::array();
  for (const auto& [e, c] : gm.coeffs.terms()) out.push_back({{"e", e}, {"mu", to_json(c)}});
  return out;
}

inline json to_json(const LocalIdentityResult& r) {
  return {{"holds", r.holds}, {"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}};
}

inline json verdict_to_json(Verdict v) {
  if (v == Verdict::inconclusive) return "inconclusive";
  return v == Verdict::pass;
}

inline json to_json(const ErrorReport& r) {
  return {{"degree", r.degree},
          {"hom_class", to_json(r.hom)},
          {"normalized", to_json(r.normalized)},
          {"tau", to_json(r.tau_trunc)},
          {"delta", to_json(r.delta)},
          {"delta_dim", to_json(r.delta_dim)},
          {"bound", to_json(r.bound)},
          {"pass", verdict_to_json(r.verdict)}};
}

/// Rebuilds a report from JSON, recomputing delta and the verdict from the serialized classes.
inline ErrorReport error_report_from_json(const json& j) {
  ErrorReport r;
  r.degree = j.at("degree").get<std::vector<int>>();
  r.hom = laurent_from_json(j.at("hom_class"));
  r.normalized = laurent_from_json(j.at("normalized"));
  r.tau_trunc = dim_series_from_json(j.at("tau"));
  r.delta = r.tau_trunc - DimSeries::exact(r.normalized);
  r.delta_dim = r.delta.virtual_dimension();
  r.bound = rational_from_json(j.at("bound"));
  r.verdict = decide_verdict(r.delta_dim, r.delta.floor(), r.bound);
  return r;
}

inline json to_json(const OracleReport& r) {
  return {{"p", r.p},
          {"mode", r.mode == OracleMode::hom ? "hom" : "configurations"},
          {"removed_points", r.removed_points},
          {"e_or_d", r.degree},
          {"class", to_json(r.motivic)},
          {"brute", r.brute.get_str()},
          {"predicted", r.predicted.get_str()},
          {"equal", r.equal},
          {"elapsed_ms", r.elapsed_ms}};
}

inline OracleReport oracle_report_from_json(const json& j) {
  OracleReport r;
  r.p = j.at("p").get<int>();
  r.mode = j.at("mode").get<std::string>() == "hom" ? OracleMode::hom : OracleMode::configurations;
  r.removed_points = j.at("removed_points").get<int>();
  r.degree = j.at("e_or_d").get<std::vector<int>>();
  r.motivic = laurent_from_json(j.at("class"));
  r.brute = big_from_string(j.at("brute").get<std::string>());
  const Rational v = r.motivic.evaluate(r.p);
  if (v.get_den() != 1) throw ConsistencyError("class does not evaluate to an integer");
  r.predicted = v.get_num();
  r.equal = r.predicted == r.brute;
  r.elapsed_ms = j.at("elapsed_ms").get<double>();
  return r;
}

}  // namespace toricurves
