#pragma once

#include "nodal/rational.hpp"

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nodal::feasibility {

enum class Sense { le, lt };

/// sum coefficients[v] * v  (<= | <)  bound
struct Inequality {
  std::map<std::string, Rational> coefficients;
  Rational bound;
  Sense sense = Sense::le;
  std::string label;

  bool strict() const { return sense == Sense::lt; }
  bool is_constant() const;
  /// For a constant row, whether 0 (sense) bound holds.
  bool constant_holds() const;
  std::string str() const;
};

struct Variable {
  std::string name;
  bool nonnegative = true;
};

using Assignment = std::map<std::string, Rational>;

class InequalitySystem {
public:
  /// Throws std::invalid_argument on a duplicate name.
  void add_variable(const std::string& name, bool nonnegative = true);
  /// Throws std::invalid_argument if the row mentions an undeclared variable.
  /// Zero coefficients are dropped.
  void add_row(Inequality row);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Inequality>& rows() const { return rows_; }
  bool declared(const std::string& name) const;

  /// Exact check of every row and every nonnegativity flag.
  bool satisfied_by(const Assignment& assignment) const;

private:
  std::vector<Variable> variables_;
  std::vector<Inequality> rows_;
};

struct Witness {
  Assignment assignment;
};

/// A nonnegative combination of origin rows that sums to a false constant
/// row. Origin rows are the system's rows followed by one -v <= 0 row per
/// nonnegative variable.
struct InfeasibilityTrace {
  std::vector<std::string> elimination_order;
  std::vector<Inequality> origin_rows;
  std::vector<Rational> multipliers;
  Rational contradiction_bound;
  Sense contradiction_sense = Sense::le;

  std::string contradiction_str() const;
};

/// Recomputes the combination and checks it reproduces the stored
/// contradiction, which must itself be false.
bool recombines(const InfeasibilityTrace& trace);

using SolveResult = std::variant<Witness, InfeasibilityTrace>;

inline bool is_feasible(const SolveResult& r) { return std::holds_alternative<Witness>(r); }

/// Origin rows of a system: its rows, then -v <= 0 for each nonnegative v.
std::vector<Inequality> origin_rows(const InequalitySystem& system);

/// One Fourier-Motzkin step. The variable's nonnegativity flag, if any, is
/// used as a lower-bound row. Constant rows produced by the step are kept.
InequalitySystem eliminate(const InequalitySystem& system, const std::string& var);

/// Eliminates in declared order and back-substitutes. The witness is
/// re-verified by substitution before being returned.
SolveResult solve(const InequalitySystem& system);

/// 6(2n-1)((d1-3d0)(w2-wpsi) - (d1 wpsi - d0 w2)) / C(2n-1, g-1), evaluated
/// from the class coefficients. Requires g >= 5 and 2n >= g.
Rational cutoff_pg(int g, int n);
/// -2n^2 + (2g-5)n + 4g^2 - 11g + 9.
Rational cutoff_pg_closed(int g, int n);
/// The same expansion with constant term g^2 - 11g + 9.
Rational cutoff_pg_alternate(int g, int n);
/// Real roots of the closed form in n, (2g-5 -+ sqrt(36g^2-108g+97))/4.
std::pair<double, double> cutoff_pg_roots(int g);
/// Discriminant of the closed form, 36g^2 - 108g + 97.
Rational cutoff_pg_discriminant(int g);

/// 6((d1-3d0)(u02-upsi) - (d1 upsi - d0 u02)) from the class coefficients.
/// Requires g odd and (r,k) equal to the admissible pair for (g,n).
Rational cutoff_pgrk(int g, int n, int r, int k);
/// 9-12g+3g^2+k+gk-3n+3gn+kn+r-g^2r+nr-gnr.
Rational cutoff_pgrk_polynomial(int g, int n, int r, int k);

/// Upper end of the expected n-range: floor(7(g-1)/2 - 3), lowered by one
/// when that value is an integer c with g+c+1 prime.
int nmax_formula(int g);

/// The (psi, delta[0;1,0], delta[0;0,2]) rows in multipliers y (glue class
/// with the D coefficients) and z (W).
InequalitySystem reduced_system(int g, int n);

}  // namespace nodal::feasibility
