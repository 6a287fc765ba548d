#pragma once

#include "nodal/rational.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nodal {

/// Genus g and node count n; the ambient space has 2n marked points grouped
/// into n pairs.
struct SpaceParams {
  int g = 0;
  int n = 0;

  int points() const { return 2 * n; }
  friend bool operator==(const SpaceParams&, const SpaceParams&) = default;
};

/// Throws std::invalid_argument unless g >= 2 and n >= 1.
void validate(const SpaceParams& params);

/// One element of the pair-symmetric basis: lambda, psi, delta_irr, or
/// delta[i;a,b] (genus-i side carries a full pairs and b singles).
struct Generator {
  enum class Kind { lambda, psi, delta_irr, delta };

  Kind kind = Kind::lambda;
  int i = 0;
  int a = 0;
  int b = 0;

  static Generator lambda() { return {Kind::lambda}; }
  static Generator psi() { return {Kind::psi}; }
  static Generator delta_irr() { return {Kind::delta_irr}; }
  static Generator delta(int i, int a, int b) { return {Kind::delta, i, a, b}; }

  bool is_delta() const { return kind == Kind::delta; }
  /// |S| on the genus-i side.
  int points() const { return 2 * a + b; }

  std::string str() const;
  static Generator parse(std::string_view text);

  friend auto operator<=>(const Generator&, const Generator&) = default;
};

std::ostream& operator<<(std::ostream& os, const Generator& gen);

/// True when gen indexes a nonzero class on the space (ignores the i = g/2
/// identification).
bool is_valid(const SpaceParams& params, const Generator& gen);

/// For g even and i = g/2, delta[i;a,b] and delta[i;n-a-b,b] are the same
/// class; the representative is the lexicographically smaller (a,b).
Generator canonical(const SpaceParams& params, const Generator& gen);

/// lambda, psi, delta_irr, then delta[i;a,b] in (i,a,b) order, one entry
/// per canonical generator.
std::vector<Generator> enumerate_generators(const SpaceParams& params);

/// The five generators whose residual rows the certifier solves for.
std::array<Generator, 5> critical_generators();

class error_params_mismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A class coefficient. When exact is false, value is only an upper bound:
/// the class subtracts at least -value of the generator.
struct Coefficient {
  Rational value;
  bool exact = true;
};

/// Projection of a class onto the critical generators, in the order
/// lambda, psi, delta_irr, delta[0;1,0], delta[0;0,2].
struct CriticalVector {
  Rational lam, psi, dirr, d010, d002;

  std::array<Rational, 5> values() const { return {lam, psi, dirr, d010, d002}; }
  static CriticalVector from_values(const std::array<Rational, 5>& v);

  friend bool operator==(const CriticalVector&, const CriticalVector&) = default;
};

CriticalVector operator-(const CriticalVector& lhs, const CriticalVector& rhs);
CriticalVector operator*(const Rational& c, const CriticalVector& v);

/// Sparse class over the generators of one space. exact holds known
/// coefficients; lower_bounds holds L for generators whose coefficient is
/// only known to be at most -L. A generator lives in at most one of the two.
class DivisorClass {
public:
  explicit DivisorClass(SpaceParams params);

  const SpaceParams& params() const { return params_; }
  const std::map<Generator, Rational>& exact() const { return exact_; }
  const std::map<Generator, Rational>& lower_bounds() const { return lower_bounds_; }

  /// Sets an exact coefficient (gen is canonicalized; out-of-range indices throw).
  void set(const Generator& gen, Rational value);
  /// Marks gen as subtracting at least `bound`.
  void set_lower_bound(const Generator& gen, Rational bound);

  Coefficient coeff(const Generator& gen) const;
  /// coeff() for each entry of a sorted list of canonical generators, such
  /// as enumerate_generators() returns.
  std::vector<Coefficient> coeffs(const std::vector<Generator>& sorted) const;
  CriticalVector critical() const;

  DivisorClass scaled(const Rational& c) const;

  friend DivisorClass operator+(const DivisorClass& lhs, const DivisorClass& rhs);

private:
  SpaceParams params_;
  std::map<Generator, Rational> exact_;
  std::map<Generator, Rational> lower_bounds_;

  Generator checked(const Generator& gen) const;
};

/// c * A for c > 0.
DivisorClass scale(const Rational& c, const DivisorClass& cls);
DivisorClass add(const DivisorClass& lhs, const DivisorClass& rhs);

/// Sum of the relative dualizing classes over all marked points:
/// psi - sum_S |S| delta_{0,S}.
DivisorClass omega_total(const SpaceParams& params);

}  // namespace nodal
