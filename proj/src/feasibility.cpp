#include "nodal/feasibility.hpp"

#include "nodal/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nodal::feasibility {

bool Inequality::is_constant() const {
  return std::all_of(coefficients.begin(), coefficients.end(),
                     [](const auto& kv) { return kv.second.is_zero(); });
}

bool Inequality::constant_holds() const {
  return strict() ? bound.is_positive() : !bound.is_negative();
}

std::string Inequality::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, c] : coefficients) {
    if (c.is_zero()) continue;
    if (!first) os << (c.is_negative() ? " - " : " + ");
    else if (c.is_negative()) os << "-";
    first = false;
    const Rational mag = c.abs();
    if (mag != Rational(1)) os << mag << "*";
    os << name;
  }
  if (first) os << "0";
  os << (strict() ? " < " : " <= ") << bound;
  return os.str();
}

void InequalitySystem::add_variable(const std::string& name, bool nonnegative) {
  if (declared(name)) throw std::invalid_argument("variable \"" + name + "\" declared twice");
  variables_.push_back({name, nonnegative});
}

void InequalitySystem::add_row(Inequality row) {
  for (auto it = row.coefficients.begin(); it != row.coefficients.end();) {
    if (!declared(it->first))
      throw std::invalid_argument("row mentions undeclared variable \"" + it->first + "\"");
    it = it->second.is_zero() ? row.coefficients.erase(it) : std::next(it);
  }
  rows_.push_back(std::move(row));
}

bool InequalitySystem::declared(const std::string& name) const {
  return std::any_of(variables_.begin(), variables_.end(), [&](const Variable& v) { return v.name == name; });
}

namespace {

Rational lhs_value(const Inequality& row, const Assignment& a) {
  Rational total(0);
  for (const auto& [name, c] : row.coefficients) {
    auto it = a.find(name);
    if (it != a.end()) total += c * it->second;
  }
  return total;
}

bool holds(const Inequality& row, const Assignment& a) {
  const Rational lhs = lhs_value(row, a);
  return row.strict() ? lhs < row.bound : lhs <= row.bound;
}

}  // namespace

bool InequalitySystem::satisfied_by(const Assignment& assignment) const {
  for (const Variable& v : variables_) {
    auto it = assignment.find(v.name);
    if (it == assignment.end()) return false;
    if (v.nonnegative && it->second.is_negative()) return false;
  }
  return std::all_of(rows_.begin(), rows_.end(), [&](const Inequality& r) { return holds(r, assignment); });
}

std::string InfeasibilityTrace::contradiction_str() const {
  return std::string("0 ") + (contradiction_sense == Sense::lt ? "< " : "<= ") + contradiction_bound.str();
}

bool recombines(const InfeasibilityTrace& trace) {
  if (trace.multipliers.size() != trace.origin_rows.size()) return false;
  std::map<std::string, Rational> coeffs;
  Rational bound(0);
  bool strict = false;
  for (std::size_t i = 0; i < trace.origin_rows.size(); ++i) {
    const Rational& m = trace.multipliers[i];
    if (m.is_negative()) return false;
    if (m.is_zero()) continue;
    const Inequality& row = trace.origin_rows[i];
    for (const auto& [name, c] : row.coefficients) coeffs[name] += m * c;
    bound += m * row.bound;
    strict = strict || row.strict();
  }
  for (const auto& [name, c] : coeffs)
    if (!c.is_zero()) return false;
  if (bound != trace.contradiction_bound) return false;
  if (strict != (trace.contradiction_sense == Sense::lt)) return false;
  return strict ? !bound.is_positive() : bound.is_negative();
}

std::vector<Inequality> origin_rows(const InequalitySystem& system) {
  std::vector<Inequality> out = system.rows();
  for (const Variable& v : system.variables())
    if (v.nonnegative) out.push_back({{{v.name, Rational(-1)}}, Rational(0), Sense::le, "nonneg(" + v.name + ")"});
  return out;
}

namespace {

// Dense row over a fixed variable order, carrying its multipliers over the
// origin rows.
struct Tracked {
  std::vector<Rational> coef;
  Rational bound;
  bool strict = false;
  std::vector<Rational> mult;

  bool constant() const {
    return std::all_of(coef.begin(), coef.end(), [](const Rational& c) { return c.is_zero(); });
  }
  bool contradictory() const { return strict ? !bound.is_positive() : bound.is_negative(); }
};

Tracked combine(const Tracked& up, const Tracked& low, std::size_t var) {
  // up has coefficient a > 0 on var, low has -b < 0
  const Rational a = up.coef[var];
  const Rational b = -low.coef[var];
  Tracked out;
  out.coef.resize(up.coef.size());
  for (std::size_t k = 0; k < up.coef.size(); ++k) out.coef[k] = b * up.coef[k] + a * low.coef[k];
  out.coef[var] = Rational(0);
  out.bound = b * up.bound + a * low.bound;
  out.strict = up.strict || low.strict;
  out.mult.resize(up.mult.size());
  for (std::size_t k = 0; k < up.mult.size(); ++k) out.mult[k] = b * up.mult[k] + a * low.mult[k];

  Rational scale(0);
  for (const Rational& c : out.coef)
    if (!c.is_zero()) {
      scale = c.abs();
      break;
    }
  if (scale.is_zero()) scale = out.bound.is_zero() ? Rational(1) : out.bound.abs();
  if (scale != Rational(1)) {
    for (Rational& c : out.coef) c /= scale;
    out.bound /= scale;
    for (Rational& m : out.mult) m /= scale;
  }
  return out;
}

std::vector<Tracked> fm_step(const std::vector<Tracked>& rows, std::size_t var) {
  std::vector<const Tracked*> up, low;
  std::vector<Tracked> out;
  for (const Tracked& r : rows) {
    const int s = r.coef[var].sign();
    if (s > 0)
      up.push_back(&r);
    else if (s < 0)
      low.push_back(&r);
    else
      out.push_back(r);
  }
  for (const Tracked* u : up)
    for (const Tracked* l : low) out.push_back(combine(*u, *l, var));

  // drop exact duplicates, keeping the first occurrence
  std::vector<Tracked> unique;
  for (Tracked& r : out) {
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Tracked& u) {
      return u.strict == r.strict && u.bound == r.bound && u.coef == r.coef;
    });
    if (!seen) unique.push_back(std::move(r));
  }
  return unique;
}

std::vector<Tracked> to_tracked(const std::vector<Inequality>& rows, const std::vector<Variable>& vars) {
  std::vector<Tracked> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Tracked t;
    t.coef.assign(vars.size(), Rational(0));
    for (std::size_t k = 0; k < vars.size(); ++k) {
      auto it = rows[i].coefficients.find(vars[k].name);
      if (it != rows[i].coefficients.end()) t.coef[k] = it->second;
    }
    t.bound = rows[i].bound;
    t.strict = rows[i].strict();
    t.mult.assign(rows.size(), Rational(0));
    t.mult[i] = Rational(1);
    out.push_back(std::move(t));
  }
  return out;
}

InfeasibilityTrace make_trace(const Tracked& row, std::vector<std::string> order, std::vector<Inequality> origin) {
  InfeasibilityTrace trace;
  trace.elimination_order = std::move(order);
  trace.origin_rows = std::move(origin);
  trace.multipliers = row.mult;
  trace.contradiction_bound = row.bound;
  trace.contradiction_sense = row.strict ? Sense::lt : Sense::le;
  if (!recombines(trace)) throw std::logic_error("infeasibility trace does not recombine");
  return trace;
}

struct Interval {
  std::optional<Rational> lo, hi;
  bool lo_strict = false, hi_strict = false;

  void raise(const Rational& v, bool strict) {
    if (!lo || v > *lo || (v == *lo && strict)) {
      lo = v;
      lo_strict = strict;
    }
  }
  void lower(const Rational& v, bool strict) {
    if (!hi || v < *hi || (v == *hi && strict)) {
      hi = v;
      hi_strict = strict;
    }
  }
  Rational pick() const {
    if (lo && hi) return (*lo + *hi) / Rational(2);
    if (lo) return *lo + Rational(1);
    if (hi) return *hi - Rational(1);
    return Rational(0);
  }
};

}  // namespace

InequalitySystem eliminate(const InequalitySystem& system, const std::string& var) {
  const auto& vars = system.variables();
  auto pos = std::find_if(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == var; });
  if (pos == vars.end()) throw std::invalid_argument("eliminate: undeclared variable \"" + var + "\"");
  const std::size_t idx = static_cast<std::size_t>(pos - vars.begin());

  std::vector<Inequality> rows = system.rows();
  if (pos->nonnegative) rows.push_back({{{var, Rational(-1)}}, Rational(0), Sense::le, "nonneg(" + var + ")"});
  const std::vector<Tracked> reduced = fm_step(to_tracked(rows, vars), idx);

  InequalitySystem out;
  for (const Variable& v : vars)
    if (v.name != var) out.add_variable(v.name, v.nonnegative);
  for (const Tracked& t : reduced) {
    Inequality row;
    for (std::size_t k = 0; k < vars.size(); ++k)
      if (k != idx && !t.coef[k].is_zero()) row.coefficients[vars[k].name] = t.coef[k];
    row.bound = t.bound;
    row.sense = t.strict ? Sense::lt : Sense::le;
    std::string label;
    for (std::size_t k = 0; k < t.mult.size(); ++k) {
      if (t.mult[k].is_zero()) continue;
      if (!label.empty()) label += " + ";
      label += t.mult[k].str() + "*[" + (rows[k].label.empty() ? rows[k].str() : rows[k].label) + "]";
    }
    row.label = label;
    out.add_row(std::move(row));
  }
  return out;
}

SolveResult solve(const InequalitySystem& system) {
  const auto& vars = system.variables();
  if (vars.size() > 8) throw std::invalid_argument("solve: at most 8 variables supported");

  const std::vector<Inequality> origin = origin_rows(system);
  std::vector<std::string> order;
  for (const Variable& v : vars) order.push_back(v.name);

  // stages[k] holds the rows in which variables 0..k-1 are already eliminated
  std::vector<std::vector<Tracked>> stages;
  std::vector<Tracked> current = to_tracked(origin, vars);
  for (std::size_t k = 0; k <= vars.size(); ++k) {
    std::vector<Tracked> kept;
    for (Tracked& row : current) {
      if (!row.constant()) {
        kept.push_back(std::move(row));
        continue;
      }
      if (row.contradictory()) return make_trace(row, order, origin);
    }
    stages.push_back(kept);
    if (k == vars.size()) break;
    current = fm_step(kept, k);
  }

  Assignment assignment;
  std::vector<Rational> values(vars.size(), Rational(0));
  for (std::size_t k = vars.size(); k-- > 0;) {
    Interval interval;
    for (const Tracked& row : stages[k]) {
      Rational rest = row.bound;
      for (std::size_t j = k + 1; j < vars.size(); ++j) rest -= row.coef[j] * values[j];
      const Rational& c = row.coef[k];
      if (c.is_positive())
        interval.lower(rest / c, row.strict);
      else if (c.is_negative())
        interval.raise(rest / c, row.strict);
    }
    values[k] = interval.pick();
    assignment[vars[k].name] = values[k];
  }

  if (!system.satisfied_by(assignment))
    throw std::logic_error("solve: back-substituted witness fails substitution");
  return Witness{std::move(assignment)};
}

namespace {

void require_case_two(int g, int n) {
  if (g < 5 || 2 * n < g) throw std::domain_error("cutoff_pg needs g >= 5 and 2n >= g");
}

}  // namespace

Rational cutoff_pg(int g, int n) {
  require_case_two(g, n);
  const Rational d0(g + n + 1, 6);
  const Rational d1(g + n - 1);
  const catalog::WCoefficients w = catalog::weierstrass_coefficients({g, n});
  const Rational core = (d1 - Rational(3) * d0) * (w.w2 - w.psi) - (d1 * w.psi - d0 * w.w2);
  return Rational(6) * Rational(2L * n - 1) * core / binom(2L * n - 1, g - 1);
}

Rational cutoff_pg_closed(int g, int n) {
  const long G = g, N = n;
  return Rational(-2 * N * N + (2 * G - 5) * N + 4 * G * G - 11 * G + 9);
}

Rational cutoff_pg_alternate(int g, int n) {
  const long G = g, N = n;
  return Rational(-2 * N * N + (2 * G - 5) * N + G * G - 11 * G + 9);
}

std::pair<double, double> cutoff_pg_roots(int g) {
  const double s = std::sqrt(36.0 * g * g - 108.0 * g + 97.0);
  return {(2.0 * g - 5.0 - s) / 4.0, (2.0 * g - 5.0 + s) / 4.0};
}

Rational cutoff_pg_discriminant(int g) {
  const long G = g;
  return Rational(36 * G * G - 108 * G + 97);
}

Rational cutoff_pgrk(int g, int n, int r, int k) {
  if (g < 5 || g % 2 == 0) throw std::domain_error("cutoff_pgrk needs g odd and g >= 5");
  const auto rk = catalog::solve_rk({g, n});
  if (!rk || rk->r != r || rk->k != k) throw std::domain_error("cutoff_pgrk: (r,k) does not match (g,n)");
  const catalog::MrcCoefficients u = catalog::mrc_coefficients(g, *rk);
  const Rational d0(g + n + 1, 6);
  const Rational d1(g + n - 1);
  return Rational(6) * ((d1 - Rational(3) * d0) * (u.d02 - u.psi) - (d1 * u.psi - d0 * u.d02));
}

Rational cutoff_pgrk_polynomial(int g, int n, int r, int k) {
  const long G = g, N = n, R = r, Kk = k;
  return Rational(9 - 12 * G + 3 * G * G + Kk + G * Kk - 3 * N + 3 * G * N + Kk * N + R - G * G * R + N * R -
                  G * N * R);
}

int nmax_formula(int g) {
  if (g < 5) throw std::domain_error("nmax_formula needs g >= 5");
  const int twice = 7 * (g - 1) - 6;  // 2 * (7(g-1)/2 - 3)
  if (twice % 2 != 0) return twice / 2;
  const int c = twice / 2;
  return is_prime(g + c + 1) ? c - 1 : c;
}

InequalitySystem reduced_system(int g, int n) {
  const Rational d0(g + n + 1, 6);
  const Rational d1(g + n - 1);
  const catalog::WCoefficients w = catalog::weierstrass_coefficients({g, n});
  InequalitySystem sys;
  sys.add_variable("y");
  sys.add_variable("z");
  sys.add_row({{{"y", d0}, {"z", w.psi}}, Rational(1), Sense::lt, "psi"});
  sys.add_row({{{"y", -d1}, {"z", -w.w2}}, Rational(-3), Sense::le, "delta[0;1,0]"});
  sys.add_row({{{"y", -d0}, {"z", -w.w2}}, Rational(-2), Sense::le, "delta[0;0,2]"});
  return sys;
}

}  // namespace nodal::feasibility
