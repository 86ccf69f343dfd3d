#pragma once

// Command-line front end. run_cli returns the exit status; output is assembled
// in full before anything is written.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toricurves/toricurves.hpp"

namespace toricurves {

struct RunConfig {
  std::string command;
  std::string fan_path;
  std::string degree;
  int order = 8;
  int prime = 3;
  int removed = 0;
  std::vector<std::string> jets;
  bool normalized = false;
  bool configurations = false;
  bool iso_classes = false;
  std::string format = "text";
  std::uint64_t seed = 0;
  int jobs = 1;
  double budget = 0;  // 0: TORICURVES_BUDGET or the built-in default
};

namespace cli_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline long long parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw UsageError("bad " + what + ": \"" + s + "\"");
  return v;
}

inline DegreeVector parse_degree(const std::string& s) {
  if (s.empty()) throw UsageError("--degree is required");
  DegreeVector d;
  for (const auto& part : split(s, ',')) d.push_back(static_cast<int>(parse_int(part, "degree entry")));
  return d;
}

/// POINT,ORDER,TARGET with POINT an integer or "inf", TARGET components split by ':'
/// and coefficients within a component by '/'.
inline JetSpec parse_jet(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw UsageError("--jet expects POINT,ORDER,TARGET; got \"" + s + "\"");
  JetSpec js;
  if (parts[0] == "inf") {
    js.point = JetPoint{true, 0};
  } else {
    js.point = JetPoint{false, parse_int(parts[0], "jet point")};
  }
  js.order = static_cast<int>(parse_int(parts[1], "jet order"));
  for (const auto& comp : split(parts[2], ':')) {
    std::vector<int> coeffs;
    for (const auto& c : split(comp, '/')) coeffs.push_back(static_cast<int>(parse_int(c, "jet coefficient")));
    js.target.push_back(std::move(coeffs));
  }
  return js;
}

inline std::string vec_string(const std::vector<int>& v) { return exponent_to_string(v); }

inline std::string rational_string(const Rational& q) {
  std::ostringstream os;
  os << q.get_str();
  if (q.get_den() != 1) os << " (" << std::setprecision(6) << q.get_d() << ")";
  return os.str();
}

inline void validate_config(const RunConfig& c) {
  if (c.format != "text" && c.format != "json") throw UsageError("--format must be text or json");
  if (c.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (c.budget < 0) throw UsageError("--budget must be positive");
  if (c.order < 0) throw UsageError("--order must be nonnegative");
  if (c.removed < 0) throw UsageError("--removed must be nonnegative");
  if (c.command == "oracle" || c.command == "constrained")
    if (!is_small_prime(c.prime)) throw UsageError("--p must be one of 2, 3, 5, 7");
}

inline OracleOptions oracle_options(const RunConfig& c) {
  OracleOptions o;
  if (c.budget > 0) o.budget = c.budget;
  o.jobs = c.jobs;
  return o;
}

inline std::string empty_message() { return "empty: degree not in Eff∨"; }

inline std::pair<json, std::string> cmd_analyze(const ToricModel& m) {
  const auto& fan = m.fan();
  const auto fv = enumerate_cones(fan);
  const auto li = local_identity_check(fan);
  std::vector<std::vector<int>> prim;
  for (auto j : m.patterns().minimal) prim.push_back(PatternSet::to_vector(j, fan.nrays()));
  json j{{"fan", fan_to_json(fan)},
         {"report", to_json(m.report())},
         {"f_vector", fv},
         {"picard_rank", m.picard_rank()},
         {"picard", to_json(m.picard())},
         {"class", to_json(m.variety_class())},
         {"primitive_collections", prim},
         {"mobius", to_json(m.mobius())},
         {"polynomial", to_json(m.local_polynomial())},
         {"polynomial_text", m.local_polynomial().to_string()},
         {"local_identity", to_json(li)}};
  std::ostringstream os;
  os << "smooth: " << (m.report().smooth ? "yes" : "no") << ", complete: " << (m.report().complete ? "yes" : "no") << "\n";
  for (const auto& w : m.report().warnings) os << "warning: " << w << "\n";
  os << "dimension: " << m.dim() << ", rays: " << m.nrays() << ", r = " << m.picard_rank() << "\n";
  os << "f-vector: (";
  for (std::size_t i = 0; i < fv.size(); ++i) os << (i ? ", " : "") << fv[i];
  os << ")\n";
  os << "[V] = " << m.variety_class() << "\n";
  os << "primitive collections:";
  for (const auto& v : prim) os << " " << vec_string(v);
  os << "\n";
  os << "mu:\n";
  for (auto mask : m.mobius().ordered_masks())
    if (m.mobius().at_mask(mask) != 0)
      os << "  " << vec_string(PatternSet::to_vector(mask, fan.nrays())) << " -> " << m.mobius().at_mask(mask) << "\n";
  os << "P = " << m.local_polynomial().to_string() << "\n";
  os << "local identity P(L^{-1}) = [V]L^{-n}(1 − L^{-1})^r: " << (li.holds ? "holds" : "FAILS") << "\n";
  return {j, os.str()};
}

inline std::pair<json, std::string> cmd_mobius(const ToricModel& m, bool iso) {
  json j{{"mobius", to_json(m.mobius())}, {"polynomial", to_json(m.local_polynomial())}};
  std::ostringstream os;
  for (auto mask : m.mobius().ordered_masks())
    if (m.mobius().at_mask(mask) != 0)
      os << vec_string(PatternSet::to_vector(mask, m.fan().nrays())) << " -> " << m.mobius().at_mask(mask) << "\n";
  os << "P = " << m.local_polynomial().to_string() << "\n";
  if (iso) {
    json classes = json::array();
    os << "by isomorphism class of the nonintersection subgraph:\n";
    for (const auto& c : mobius_by_isomorphism_class(m.mobius(), m.patterns())) {
      classes.push_back({{"size", c.size},
                         {"edges", c.edges},
                         {"connected", c.connected},
                         {"members", c.members},
                         {"values", std::vector<long long>(c.values.begin(), c.values.end())}});
      os << "  size " << c.size << ", edges " << c.edges << (c.connected ? ", connected" : ", disconnected") << ", " << c.members
         << " subsets: mu =";
      for (auto v : c.values) os << " " << v;
      os << "\n";
    }
    j["isomorphism_classes"] = classes;
  }
  return {j, os.str()};
}

inline std::pair<json, std::string> cmd_hom(const ToricModel& m, const RunConfig& c) {
  const DegreeVector d = parse_degree(c.degree);
  check_degree_arity(m, d);
  if (!eff_dual_contains(m.fan(), d)) return {json{{"degree", d}, {"empty", true}}, empty_message() + "\n"};
  const LaurentClass h = c.normalized ? normalized_hom_class(m, d) : hom_class(m, d);
  json j{{"degree", d}, {"empty", false}, {c.normalized ? "normalized" : "hom_class", to_json(h)}};
  return {j, h.to_string() + "\n"};
}

inline std::pair<json, std::string> cmd_tamagawa(const ToricModel& m, const RunConfig& c) {
  const DimSeries t = tamagawa(m, c.order);
  return {json{{"order", c.order}, {"tau", to_json(t)}}, t.to_string() + "\n"};
}

inline std::pair<json, std::string> cmd_converge(const ToricModel& m, const RunConfig& c) {
  const DegreeVector d = parse_degree(c.degree);
  const ErrorReport r = convergence_report(m, d, c.order);
  std::ostringstream os;
  os << "degree: " << vec_string(d) << "\n";
  os << "tau: " << r.tau_trunc << "\n";
  os << "normalized: " << r.normalized << "\n";
  os << "delta: " << r.delta << "\n";
  os << "delta_dim: " << r.delta_dim.to_string() << "\n";
  os << "bound: " << rational_string(r.bound) << "\n";
  os << "verdict: " << to_string(r.verdict) << "\n";
  return {to_json(r), os.str()};
}

inline std::pair<json, std::string> cmd_oracle(const ToricModel& m, const RunConfig& c) {
  const DegreeVector d = parse_degree(c.degree);
  check_degree_arity(m, d);
  const OracleOptions opt = oracle_options(c);
  if (!c.jets.empty()) {
    std::vector<JetSpec> jets;
    for (const auto& s : c.jets) jets.push_back(parse_jet(s));
    const auto t0 = std::chrono::steady_clock::now();
    const BigInt count = ff_constrained_count(c.prime, m.fan(), d, jets, opt);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    json j{{"p", c.prime}, {"e_or_d", d}, {"brute", count.get_str()}, {"elapsed_ms", ms}};
    std::ostringstream os;
    os << "constrained count at p = " << c.prime << ": " << count << "\n";
    return {j, os.str()};
  }
  if (!c.configurations && !eff_dual_contains(m.fan(), d)) return {json{{"degree", d}, {"empty", true}}, empty_message() + "\n"};
  const OracleReport r =
      oracle_compare(c.prime, m, d, c.configurations ? OracleMode::configurations : OracleMode::hom, c.removed, opt);
  std::ostringstream os;
  os << (r.equal ? "equal" : "DIFFERENT") << ": brute " << r.brute << ", predicted " << r.predicted << " (p = " << r.p << ", "
     << std::fixed << std::setprecision(1) << r.elapsed_ms << " ms)\n";
  return {to_json(r), os.str()};
}

inline std::pair<json, std::string> cmd_constrained(const ToricModel& m, const RunConfig& c) {
  if (c.jets.empty()) throw UsageError("constrained needs at least one --jet");
  std::vector<JetSpec> jets;
  std::vector<std::pair<JetPoint, int>> pts;
  for (const auto& s : c.jets) {
    jets.push_back(parse_jet(s));
    pts.emplace_back(jets.back().point, jets.back().order);
  }
  const JetCondition jc = JetCondition::single_torus_jet(pts);
  const DimSeries main = constrained_main_term(m, jc, c.order);
  json j{{"order", c.order}, {"main_term", to_json(main)}};
  std::ostringstream os;
  os << "main term: " << main << "\n";
  if (!c.degree.empty()) {
    const DegreeVector d = parse_degree(c.degree);
    check_degree_arity(m, d);
    const BigInt count = ff_constrained_count(c.prime, m.fan(), d, jets, oracle_options(c));
    const Rational scaled = Rational(count) / Rational(big_pow(c.prime, static_cast<unsigned long>(degree_total(d))));
    const Rational predicted = main.known().evaluate(c.prime);
    Rational err = scaled - predicted;
    if (err < 0) err = -err;
    j["p"] = c.prime;
    j["degree"] = d;
    j["brute"] = count.get_str();
    j["scaled"] = to_json(scaled);
    j["predicted"] = to_json(predicted);
    j["error"] = to_json(err);
    os << "count at p = " << c.prime << ": " << count << "\n";
    os << "count p^{-|d|}: " << rational_string(scaled) << "\n";
    os << "main term at p: " << rational_string(predicted) << "\n";
    os << "error: " << rational_string(err) << "\n";
  }
  return {j, os.str()};
}

}  // namespace cli_detail

/// Runs one command; returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Motivic classes of spaces of rational curves on smooth complete toric varieties", "toricurves"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", c.format, "text or json")->capture_default_str();
  app.add_option("--seed", c.seed, "seed for the completeness sampler")->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker threads for point counting")->capture_default_str();
  app.add_option("--budget", c.budget, "enumeration budget in tuples (default: TORICURVES_BUDGET or 1e8)");

  auto fan_arg = [&](CLI::App* sub) { sub->add_option("fan", c.fan_path, "fan JSON file")->required(); };
  auto* analyze = app.add_subcommand("analyze", "validation, cones, Picard data, patterns, Moebius function");
  fan_arg(analyze);
  auto* mobius = app.add_subcommand("mobius", "local Moebius function and its generating polynomial");
  fan_arg(mobius);
  mobius->add_flag("--iso", c.iso_classes, "group values by nonintersection subgraph type");
  auto* hom = app.add_subcommand("hom", "class of the space of degree-d morphisms");
  fan_arg(hom);
  hom->add_option("--degree", c.degree, "comma-separated degree")->required();
  hom->add_flag("--normalized", c.normalized, "multiply by L^{-|d|}");
  auto* tam = app.add_subcommand("tamagawa", "truncated Tamagawa number");
  fan_arg(tam);
  tam->add_option("--order", c.order, "Euler product order E")->capture_default_str();
  auto* conv = app.add_subcommand("converge", "error report against the Tamagawa number");
  fan_arg(conv);
  conv->add_option("--degree", c.degree, "comma-separated degree")->required();
  conv->add_option("--order", c.order, "Euler product order E")->capture_default_str();
  auto* orc = app.add_subcommand("oracle", "compare with brute-force counts over F_p");
  fan_arg(orc);
  orc->add_option("--p", c.prime, "prime in {2, 3, 5, 7}")->capture_default_str();
  orc->add_option("--degree", c.degree, "comma-separated degree")->required();
  orc->add_flag("--configurations", c.configurations, "count pattern-avoiding divisor tuples instead of morphisms");
  orc->add_option("--removed", c.removed, "remove the first s rational points (with --configurations)");
  orc->add_option("--jet", c.jets, "POINT,ORDER,TARGET (e.g. 0,0,1:1:1 or inf,1,1/0:1/1:2/0)");
  auto* con = app.add_subcommand("constrained", "main term for curves with prescribed jets");
  fan_arg(con);
  con->add_option("--jet", c.jets, "POINT,ORDER,TARGET")->required();
  con->add_option("--order", c.order, "Euler product order E")->capture_default_str();
  con->add_option("--degree", c.degree, "also count over F_p at this degree");
  con->add_option("--p", c.prime, "prime for the count")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::usage);
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    cli_detail::validate_config(c);
    ToricModel model(load_fan(c.fan_path), c.seed);
    std::pair<json, std::string> res;
    if (c.command == "analyze") res = cli_detail::cmd_analyze(model);
    if (c.command == "mobius") res = cli_detail::cmd_mobius(model, c.iso_classes);
    if (c.command == "hom") res = cli_detail::cmd_hom(model, c);
    if (c.command == "tamagawa") res = cli_detail::cmd_tamagawa(model, c);
    if (c.command == "converge") res = cli_detail::cmd_converge(model, c);
    if (c.command == "oracle") res = cli_detail::cmd_oracle(model, c);
    if (c.command == "constrained") res = cli_detail::cmd_constrained(model, c);
    if (c.format == "json") {
      out << res.first.dump(2) << "\n";
    } else {
      out << res.second;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_status();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::consistency);
  }
}

}  // namespace toricurves
