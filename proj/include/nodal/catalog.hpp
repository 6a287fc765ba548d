#pragma once

#include "nodal/picard.hpp"
#include "nodal/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nodal::catalog {

class catalog_error : public std::invalid_argument {
public:
  enum class Code { prime_input, parity, degenerate, rk_mismatch, unknown_class, not_applicable };

  catalog_error(Code code, const std::string& what) : std::invalid_argument(what), code_(code) {}
  Code code() const { return code_; }

private:
  Code code_;
};

/// Integer parameters a constructor reports alongside its class (m,k,r for
/// W; r,k for U/V; source_points for pulled-back specials).
using ParamBlock = std::map<std::string, long>;

/// Weierstrass weights: g = m*k + r with 0 <= r < m and m = min(2n, g).
struct WParams {
  int m = 0;
  int k = 0;
  int r = 0;
};

struct WCoefficients {
  Rational lambda;  // a(g,n,m,r), positive; the class carries -lambda
  Rational psi;
  Rational w2;
};

WParams weierstrass_params(const SpaceParams& params);
WCoefficients weierstrass_coefficients(const SpaceParams& params);

/// (r,k) of the minimal-resolution divisor: 2n = (2r+1)(g-1) - 2k for g odd,
/// 2n-1 = (2r+1)(g-1) - 2k for g even, with r >= 1 and 0 <= k <= g-2.
struct RKParams {
  int r = 0;
  int k = 0;
  friend bool operator==(const RKParams&, const RKParams&) = default;
};

/// Unique admissible (r,k), or nullopt when 2n is too small.
std::optional<RKParams> solve_rk(const SpaceParams& params);

/// Constant term inside the lambda coefficient of the minimal-resolution
/// class. The corrected form reproduces the published cutoff tables; the
/// printed one is kept for comparison.
enum class MrcLambdaTerm { corrected, as_printed };

struct MrcCoefficients {
  Rational lambda;  // positive; the class carries -lambda
  Rational psi;
  Rational irr;     // the class carries +irr
  Rational d02;     // coefficient magnitude on |S| = 2
};

/// a_{0,s} = C(s+1,2)(g-1) + s(rg - r - k).
Rational mrc_boundary(int g, const RKParams& rk, int s);
/// Coefficients of the class on the space with `points` marked points.
MrcCoefficients mrc_coefficients(int g, const RKParams& rk, MrcLambdaTerm term = MrcLambdaTerm::corrected);

/// How much of a class to materialize: every generator, or only the
/// critical ones (enough for the 5-row system).
enum class Extent { full, critical };

DivisorClass canonical_K(const SpaceParams& params, Extent extent = Extent::full);
DivisorClass class_B(const SpaceParams& params, Extent extent = Extent::full);
DivisorClass class_D(const SpaceParams& params, Extent extent = Extent::full);
DivisorClass class_E(const SpaceParams& params, Extent extent = Extent::full);
DivisorClass class_F(const SpaceParams& params, Extent extent = Extent::full);
DivisorClass class_W(const SpaceParams& params, Extent extent = Extent::full);
DivisorClass class_U(const SpaceParams& params, const RKParams& rk,
                     MrcLambdaTerm term = MrcLambdaTerm::corrected, Extent extent = Extent::full);
DivisorClass class_V(const SpaceParams& params, const RKParams& rk,
                     MrcLambdaTerm term = MrcLambdaTerm::corrected, Extent extent = Extent::full);

/// V's critical coefficients (lambda and psi magnitudes etc.) for the given (r,k).
MrcCoefficients v_coefficients(const SpaceParams& params, const RKParams& rk,
                               MrcLambdaTerm term = MrcLambdaTerm::corrected);

/// How a special class behaves away from the critical generators.
enum class DeepRule {
  /// pulled back from M_g: zero on every delta[0;a,b]; delta[i;a,b], i >= 1,
  /// subtract at least the listed per-genus bound (0 if unlisted)
  from_unpointed,
  /// nothing known beyond the critical entries: every other delta bounded by 0
  truncated,
};

struct SpecialEntry {
  std::string name;
  std::vector<SpaceParams> applicable;
  CriticalVector critical;
  DeepRule deep = DeepRule::truncated;
  std::map<int, Rational> genus_bounds;  // i -> bound on delta[i;.,.]
  /// Catalog roles combined with the entry, "bn" / "glue" / "W".
  std::vector<std::string> companions;
  ParamBlock params;
  std::string source_note;

  bool applies_to(const SpaceParams& p) const;
};

/// Sum of the pullbacks of a class along all P+1 single-point forgetful maps
/// from a (P+1)-pointed space to a P-pointed one. Requires equal |S| = 2
/// entries in the input.
CriticalVector forgetful_pullback_sum(const CriticalVector& critical, int source_points);

const std::vector<SpecialEntry>& special_registry();
const SpecialEntry* find_special(std::string_view name);

DivisorClass special_class(const SpecialEntry& entry, const SpaceParams& params,
                           Extent extent = Extent::full);

/// A catalog class by name ("B", "D", "E", "F", "W", "U", "V" or a special
/// entry name) together with its reported parameter block.
struct NamedClass {
  std::string name;
  ParamBlock params;
  DivisorClass cls;
};

NamedClass build_named(std::string_view name, const SpaceParams& params,
                       MrcLambdaTerm term = MrcLambdaTerm::corrected, Extent extent = Extent::full);

}  // namespace nodal::catalog
