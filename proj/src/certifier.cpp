#include "nodal/certifier.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace nodal::certifier {

using catalog::NamedClass;
using feasibility::Inequality;
using feasibility::InequalitySystem;
using feasibility::Sense;
using nlohmann::json;

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::known_general_type: return "KnownGeneralType";
    case Regime::case_one: return "CaseI";
    case Regime::case_one_boundary: return "CaseI_boundary";
    case Regime::case_two: return "CaseII";
    case Regime::out_of_scope: return "OutOfScope";
  }
  return "OutOfScope";
}

std::string to_string(AuditResult::Verdict verdict) {
  switch (verdict) {
    case AuditResult::Verdict::pass: return "PASS";
    case AuditResult::Verdict::inconclusive: return "INCONCLUSIVE";
    case AuditResult::Verdict::fail: return "FAIL";
  }
  return "FAIL";
}

int pointed_threshold(int g) {
  static constexpr std::array<int, 19> table = {8, 8, 8, 7, 7, 6, 6, 6, 6, 5, 5, 5, 5, 5, 4, 3, 2, 2, 1};
  if (g < 5 || g > 23) return 0;
  return table[static_cast<std::size_t>(g - 5)];
}

Route route(int g, int n) {
  validate({g, n});
  Route out;
  out.bn_side = is_prime(g + 1) ? "E" : "B";
  out.glue_side = is_prime(g + n + 1) ? "F" : "D";
  out.third = "W";
  out.mrc = catalog::solve_rk({g, n}) ? (g % 2 == 1 ? "U" : "V") : "none";
  if (g >= 24) {
    out.regime = Regime::known_general_type;
  } else if (g < 5 || n < pointed_threshold(g)) {
    out.regime = Regime::out_of_scope;
  } else if (2 * n <= g - 2) {
    out.regime = Regime::case_one;
  } else if (2 * n == g - 1) {
    out.regime = Regime::case_one_boundary;
  } else {
    out.regime = Regime::case_two;
  }
  if (!out.certifiable()) {
    out.glue_side = out.third = out.mrc = "none";
    return out;
  }
  for (const catalog::SpecialEntry& e : catalog::special_registry())
    if (e.applies_to({g, n})) out.specials.push_back(e.name);
  return out;
}

InequalitySystem build_system(const SpaceParams& params, const std::vector<NamedClass>& columns, bool strict_psi) {
  for (const NamedClass& c : columns)
    if (!(c.cls.params() == params))
      throw error_params_mismatch("column " + c.name + " was built for a different space");
  const CriticalVector k = catalog::canonical_K(params, catalog::Extent::critical).critical();
  const auto kv = k.values();
  const auto gens = critical_generators();

  InequalitySystem sys;
  for (std::size_t j = 0; j < columns.size(); ++j) sys.add_variable("x" + std::to_string(j));
  std::vector<std::array<Rational, 5>> crit;
  for (const NamedClass& c : columns) crit.push_back(c.cls.critical().values());
  for (std::size_t row = 0; row < 5; ++row) {
    Inequality ineq;
    for (std::size_t j = 0; j < columns.size(); ++j) ineq.coefficients["x" + std::to_string(j)] = crit[j][row];
    ineq.bound = kv[row];
    ineq.sense = (row == 1 && strict_psi) ? Sense::lt : Sense::le;
    ineq.label = gens[row].str();
    sys.add_row(std::move(ineq));
  }
  return sys;
}

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::vector<NamedClass> build_columns(int g, int n, const std::vector<std::string>& names,
                                      catalog::MrcLambdaTerm term) {
  std::vector<NamedClass> out;
  for (const std::string& name : names) out.push_back(catalog::build_named(name, {g, n}, term, catalog::Extent::critical));
  return out;
}

Certificate make_certificate(int g, int n, const std::vector<NamedClass>& cols, const std::vector<Rational>& x,
                             bool strict_psi, catalog::MrcLambdaTerm term, bool audit) {
  Certificate cert;
  cert.g = g;
  cert.n = n;
  cert.route = route(g, n);
  cert.route.third = "none";
  CriticalVector residual = catalog::canonical_K({g, n}, catalog::Extent::critical).critical();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const CriticalVector crit = cols[j].cls.critical();
    cert.columns.push_back({cols[j].name, cols[j].params, crit, x[j]});
    residual = residual - x[j] * crit;
    if (cols[j].name == "W" || cols[j].name == "U" || cols[j].name == "V") cert.route.third = cols[j].name;
  }
  cert.residual_critical = residual;
  cert.epsilon = residual.psi;
  cert.status = strict_psi ? "GENERAL_TYPE_CERTIFIED" : "EFFECTIVE_ONLY";
  if (audit) cert.audit = audit_full(cert, term);

  for (const NamedClass& c : cols) {
    const catalog::SpecialEntry* e = catalog::find_special(c.name);
    if (!e) continue;
    if (e->deep == catalog::DeepRule::truncated)
      cert.notes.push_back(c.name + " is known only on the critical generators; other boundary entries audited against bound 0");
    if (e->name == "Z10" && n == 7)
      cert.notes.push_back("companion set {Z10, D, W} at n = 7 is an assumed reading of the n = 6 instruction");
    if (e->name == "NF14")
      cert.notes.push_back("NF14 coefficients carry a different index label than the space they are applied on");
  }
  if (!strict_psi) cert.notes.push_back("psi row solved non-strictly: shows effectivity of K only");
  if (cert.route.regime == Regime::case_two && cert.route.third == "W") {
    const Rational pg = feasibility::cutoff_pg(g, n);
    const Rational alt = feasibility::cutoff_pg_alternate(g, n);
    cert.notes.push_back("cutoff_pg = " + pg.str() + " (constant term 4g^2-11g+9); the g^2-11g+9 expansion gives " +
                         alt.str());
  }
  return cert;
}

std::string witness_detail(const feasibility::Witness& w) {
  std::vector<std::string> parts;
  for (const auto& [name, v] : w.assignment) parts.push_back(name + "=" + v.str());
  return join(parts, ", ");
}

struct Solved {
  Attempt attempt;
  std::optional<Certificate> cert;
};

Solved joint_solve(int g, int n, const std::vector<std::string>& names, catalog::MrcLambdaTerm term,
                   bool strict_psi, bool audit = true, const std::string& method = "joint_solve") {
  Solved out;
  out.attempt.columns = names;
  out.attempt.method = method;
  std::vector<NamedClass> cols;
  try {
    cols = build_columns(g, n, names, term);
  } catch (const std::invalid_argument& e) {
    out.attempt.detail = std::string("column unavailable: ") + e.what();
    return out;
  }
  const InequalitySystem sys = build_system({g, n}, cols, strict_psi);
  const feasibility::SolveResult res = feasibility::solve(sys);
  if (const auto* w = std::get_if<feasibility::Witness>(&res)) {
    std::vector<Rational> x;
    for (std::size_t j = 0; j < cols.size(); ++j) x.push_back(w->assignment.at("x" + std::to_string(j)));
    out.attempt.feasible = true;
    out.attempt.detail = witness_detail(*w);
    out.cert = make_certificate(g, n, cols, x, strict_psi, term, audit);
  } else {
    const auto& trace = std::get<feasibility::InfeasibilityTrace>(res);
    out.attempt.detail = "infeasible: " + trace.contradiction_str();
  }
  return out;
}

// Checks a candidate multiplier vector against the system; records it as a
// closed-form attempt.
Solved closed_form(int g, int n, const std::vector<std::string>& names, const std::vector<Rational>& x,
                   catalog::MrcLambdaTerm term, bool audit, const std::string& label) {
  Solved out;
  out.attempt.columns = names;
  out.attempt.method = "closed_form";
  const std::vector<NamedClass> cols = build_columns(g, n, names, term);
  const InequalitySystem sys = build_system({g, n}, cols, true);
  feasibility::Assignment a;
  for (std::size_t j = 0; j < x.size(); ++j) a["x" + std::to_string(j)] = x[j];
  out.attempt.feasible = sys.satisfied_by(a);
  out.attempt.detail = label + (out.attempt.feasible ? "" : " fails a critical row");
  if (out.attempt.feasible) out.cert = make_certificate(g, n, cols, x, true, term, audit);
  return out;
}

// delta_irr magnitude of the bn-side class.
Rational bn_irr(const std::string& side, int g) {
  return side == "E" ? Rational(long(g / 2 + 1) * (g / 2)) : Rational(g + 1, 6);
}

std::optional<Solved> case_one_fast_path(int g, int n, const Route& r, catalog::MrcLambdaTerm term, bool audit) {
  const catalog::WCoefficients w = catalog::weierstrass_coefficients({g, n});
  const Rational x = Rational(2) / bn_irr(r.bn_side, g);
  if (r.regime == Regime::case_one) {
    return closed_form(g, n, {r.bn_side, "W"}, {x, Rational(3) / w.w2}, term, audit,
                       "x = 2/" + std::string(r.bn_side == "E" ? "e0" : "b0") + ", z = 3/w2");
  }
  if (r.regime != Regime::case_one_boundary) return std::nullopt;
  const long h2 = g + n;
  Rational eps(1, 8);
  Solved last;
  for (int step = 0; step < 48; ++step, eps /= Rational(2)) {
    std::vector<Rational> mult;
    std::string label;
    if (r.glue_side == "D") {
      const Rational d0(h2 + 1, 6);
      mult = {x, Rational(2) * eps / d0, (Rational(1) - Rational(3) * eps) / w.psi};
      label = "D form, eps = " + eps.str();
    } else {
      const Rational f0((h2 / 2 + 1) * (h2 / 2));
      mult = {x, Rational(3) * eps / f0, (Rational(1) - Rational(4) * eps) / w.psi};
      label = "F form, eps = " + eps.str();
    }
    last = closed_form(g, n, {r.bn_side, r.glue_side, "W"}, mult, term, audit, label);
    if (last.attempt.feasible) return last;
  }
  return last;
}

}  // namespace

std::optional<Certificate> certify_with(int g, int n, const std::vector<std::string>& names,
                                        catalog::MrcLambdaTerm term, bool strict_psi) {
  return joint_solve(g, n, names, term, strict_psi).cert;
}

CertifyResult certify(int g, int n, const CertifyOptions& options) {
  CertifyResult result;
  result.g = g;
  result.n = n;
  result.route = route(g, n);
  const Route& r = result.route;
  if (r.regime == Regime::known_general_type) {
    result.status = "KNOWN_GENERAL_TYPE";
    return result;
  }
  if (r.regime == Regime::out_of_scope) {
    result.status = "OUT_OF_SCOPE";
    return result;
  }

  const auto take = [&](Solved s) {
    result.attempts.push_back(std::move(s.attempt));
    if (s.cert && !result.certificate) {
      result.status = s.cert->status;
      result.certificate = std::move(s.cert);
    }
    return result.certificate.has_value();
  };

  if (!options.explicit_set.empty()) {
    take(joint_solve(g, n, options.explicit_set, options.term, true, options.audit));
    if (!result.certificate) result.status = "INFEASIBLE";
    return result;
  }

  if (options.pipeline == Pipeline::full) {
    for (const std::string& name : r.specials) {
      const catalog::SpecialEntry* e = catalog::find_special(name);
      std::vector<std::string> set = {name};
      for (const std::string& role : e->companions) {
        if (role == "bn") set.push_back(r.bn_side);
        else if (role == "glue") set.push_back(r.glue_side);
        else set.push_back(role);
      }
      if (take(joint_solve(g, n, set, options.term, true, options.audit))) return result;
      if (std::find(set.begin(), set.end(), r.glue_side) == set.end()) {
        set.push_back(r.glue_side);
        if (take(joint_solve(g, n, set, options.term, true, options.audit))) return result;
      }
    }
  }

  if (auto fast = case_one_fast_path(g, n, r, options.term, options.audit))
    if (take(std::move(*fast))) return result;
  if (take(joint_solve(g, n, {r.bn_side, r.glue_side, "W"}, options.term, true, options.audit))) return result;
  if (options.pipeline != Pipeline::weierstrass && r.mrc != "none")
    if (take(joint_solve(g, n, {r.bn_side, r.glue_side, r.mrc}, options.term, true, options.audit))) return result;

  if (options.pipeline == Pipeline::full) {
    for (const std::string& name : r.specials)
      if (take(joint_solve(g, n, {name}, options.term, false, options.audit, "effectivity"))) return result;
  }
  result.status = "INFEASIBLE";
  return result;
}

AuditResult audit_full(const Certificate& cert, catalog::MrcLambdaTerm term) {
  const SpaceParams space{cert.g, cert.n};
  const std::vector<Generator> gens = enumerate_generators(space);
  std::vector<Rational> lower;
  for (const Coefficient& c : catalog::canonical_K(space).coeffs(gens)) lower.push_back(c.value);
  std::vector<bool> bounded(gens.size(), false);

  for (const Column& col : cert.columns) {
    if (col.multiplier.is_zero()) continue;
    const std::vector<Coefficient> cs = catalog::build_named(col.name, space, term).cls.coeffs(gens);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      // for a bound, value is the largest the coefficient can be
      if (!cs[k].value.is_zero()) lower[k] -= col.multiplier * cs[k].value;
      if (!cs[k].exact) bounded[k] = true;
    }
  }

  AuditResult out;
  std::vector<Generator> failed, undecided;
  for (std::size_t k = 0; k < gens.size(); ++k)
    if (lower[k].is_negative()) (bounded[k] ? undecided : failed).push_back(gens[k]);
  if (!failed.empty()) {
    out.verdict = AuditResult::Verdict::fail;
    out.flagged = failed;
  } else if (!undecided.empty()) {
    out.verdict = AuditResult::Verdict::inconclusive;
    out.flagged = undecided;
  }
  return out;
}

namespace {

json rational_array(const CriticalVector& v) {
  json arr = json::array();
  for (const Rational& x : v.values()) arr.push_back(x.str());
  return arr;
}

CriticalVector parse_critical(const json& arr) {
  if (!arr.is_array() || arr.size() != 5) throw std::invalid_argument("critical vector needs five entries");
  std::array<Rational, 5> v;
  for (std::size_t k = 0; k < 5; ++k) v[k] = Rational::parse(arr.at(k).get<std::string>());
  return CriticalVector::from_values(v);
}

Regime parse_regime(const std::string& s) {
  for (Regime r : {Regime::known_general_type, Regime::case_one, Regime::case_one_boundary, Regime::case_two,
                   Regime::out_of_scope})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown regime \"" + s + "\"");
}

AuditResult::Verdict parse_verdict(const std::string& s) {
  for (auto v : {AuditResult::Verdict::pass, AuditResult::Verdict::inconclusive, AuditResult::Verdict::fail})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown audit verdict \"" + s + "\"");
}

}  // namespace

json to_json(const Route& r) {
  return json{{"regime", to_string(r.regime)}, {"bn_side", r.bn_side}, {"glue_side", r.glue_side},
              {"third", r.third},  {"mrc", r.mrc},   {"specials", r.specials}};
}

json to_json(const Certificate& cert) {
  json columns = json::array();
  for (const Column& c : cert.columns) {
    json params = json::object();
    for (const auto& [k, v] : c.params) params[k] = v;
    columns.push_back({{"name", c.name},
                       {"params", params},
                       {"critical", rational_array(c.critical)},
                       {"multiplier", c.multiplier.str()}});
  }
  json flagged = json::array();
  for (const Generator& gen : cert.audit.flagged) flagged.push_back(gen.str());
  return json{{"g", cert.g},
              {"n", cert.n},
              {"status", cert.status},
              {"route", to_json(cert.route)},
              {"columns", columns},
              {"epsilon", cert.epsilon.str()},
              {"residual_critical", rational_array(cert.residual_critical)},
              {"audit", {{"verdict", to_string(cert.audit.verdict)}, {"flagged", flagged}}},
              {"notes", cert.notes},
              {"tool_version", tool_version}};
}

json to_json(const CertifyResult& result) {
  json attempts = json::array();
  for (const Attempt& a : result.attempts)
    attempts.push_back(
        {{"columns", a.columns}, {"method", a.method}, {"feasible", a.feasible}, {"detail", a.detail}});
  return json{{"g", result.g},
              {"n", result.n},
              {"status", result.status},
              {"route", to_json(result.route)},
              {"attempts", attempts},
              {"certificate", result.certificate ? to_json(*result.certificate) : json(nullptr)},
              {"tool_version", tool_version}};
}

Certificate certificate_from_json(const json& doc) {
  Certificate cert;
  cert.g = doc.at("g").get<int>();
  cert.n = doc.at("n").get<int>();
  cert.status = doc.at("status").get<std::string>();
  const json& r = doc.at("route");
  cert.route.regime = parse_regime(r.at("regime").get<std::string>());
  cert.route.bn_side = r.at("bn_side").get<std::string>();
  cert.route.glue_side = r.at("glue_side").get<std::string>();
  cert.route.third = r.at("third").get<std::string>();
  cert.route.mrc = r.at("mrc").get<std::string>();
  cert.route.specials = r.at("specials").get<std::vector<std::string>>();
  for (const json& c : doc.at("columns")) {
    Column col;
    col.name = c.at("name").get<std::string>();
    for (const auto& [k, v] : c.at("params").items()) col.params[k] = v.get<long>();
    col.critical = parse_critical(c.at("critical"));
    col.multiplier = Rational::parse(c.at("multiplier").get<std::string>());
    cert.columns.push_back(std::move(col));
  }
  cert.epsilon = Rational::parse(doc.at("epsilon").get<std::string>());
  cert.residual_critical = parse_critical(doc.at("residual_critical"));
  cert.audit.verdict = parse_verdict(doc.at("audit").at("verdict").get<std::string>());
  for (const json& gen : doc.at("audit").at("flagged")) cert.audit.flagged.push_back(Generator::parse(gen.get<std::string>()));
  cert.notes = doc.at("notes").get<std::vector<std::string>>();
  return cert;
}

VerifyReport verify(const Certificate& cert) {
  VerifyReport report;
  auto fail = [&](std::string why) { report.problems.push_back(std::move(why)); };

  if (cert.g < 2 || cert.n < 1) {
    fail("invalid space parameters");
    return report;
  }
  const Route fresh = route(cert.g, cert.n);
  if (!fresh.certifiable()) fail("cell is not certifiable (" + to_string(fresh.regime) + ")");
  if (cert.route.regime != fresh.regime) fail("stored regime differs from the computed route");
  if (cert.status != "GENERAL_TYPE_CERTIFIED" && cert.status != "EFFECTIVE_ONLY")
    fail("unknown status \"" + cert.status + "\"");
  if (cert.columns.empty()) fail("no columns");

  CriticalVector residual = catalog::canonical_K({cert.g, cert.n}, catalog::Extent::critical).critical();
  for (const Column& c : cert.columns) {
    if (c.multiplier.is_negative()) fail("negative multiplier on " + c.name);
    const bool bn = c.name == "B" || c.name == "E";
    const bool glue = c.name == "D" || c.name == "F";
    if (bn && c.name != fresh.bn_side) fail(c.name + " is not the route's bn class (" + fresh.bn_side + ")");
    if (glue && c.name != fresh.glue_side) fail(c.name + " is not the route's glue class (" + fresh.glue_side + ")");
    if ((c.name == "U" || c.name == "V") && c.name != fresh.mrc) fail(c.name + " is not available on this route");
    if (catalog::find_special(c.name) &&
        std::find(fresh.specials.begin(), fresh.specials.end(), c.name) == fresh.specials.end())
      fail(c.name + " is not registered for this cell");
    try {
      const NamedClass rebuilt = catalog::build_named(c.name, {cert.g, cert.n}, catalog::MrcLambdaTerm::corrected,
                                                     catalog::Extent::critical);
      if (rebuilt.params != c.params) fail("parameter block of " + c.name + " does not match the catalog");
      const CriticalVector crit = rebuilt.cls.critical();
      if (!(crit == c.critical)) fail("stored critical vector of " + c.name + " does not match the catalog");
      residual = residual - c.multiplier * crit;
    } catch (const std::exception& e) {
      fail("cannot rebuild " + c.name + ": " + e.what());
    }
  }
  if (!report.problems.empty()) return report;

  if (!(residual == cert.residual_critical)) fail("stored critical residual does not match recomputation");
  for (const Rational& v : residual.values())
    if (v.is_negative()) fail("critical residual has a negative entry");
  if (residual.psi != cert.epsilon) fail("epsilon differs from the psi residual");
  if (cert.status == "GENERAL_TYPE_CERTIFIED" && !cert.epsilon.is_positive()) fail("epsilon must be positive");
  if (cert.status == "EFFECTIVE_ONLY" && cert.epsilon.is_negative()) fail("epsilon must be nonnegative");

  const AuditResult audit = audit_full(cert);
  if (audit.verdict == AuditResult::Verdict::fail) fail("full audit fails on " + audit.flagged.front().str());
  if (audit.verdict != cert.audit.verdict) fail("stored audit verdict differs from recomputation");

  report.ok = report.problems.empty();
  return report;
}

VerifyReport verify(const json& doc) {
  try {
    return verify(certificate_from_json(doc));
  } catch (const std::exception& e) {
    return {false, {std::string("parse error: ") + e.what()}};
  }
}

}  // namespace nodal::certifier
