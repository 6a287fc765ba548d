#pragma once

#include "nodal/catalog.hpp"
#include "nodal/feasibility.hpp"
#include "nodal/picard.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace nodal::certifier {

inline constexpr const char* tool_version = "nodal-certifier 0.3.1";

enum class Regime { known_general_type, case_one, case_one_boundary, case_two, out_of_scope };

std::string to_string(Regime regime);

struct Route {
  Regime regime = Regime::out_of_scope;
  std::string bn_side;    // "B" or "E"
  std::string glue_side;  // "D", "F" or "none"
  std::string third;      // "W", "U", "V" or "none"
  std::string mrc;        // "U", "V" or "none": the alternative third class
  std::vector<std::string> specials;

  bool certifiable() const {
    return regime != Regime::known_general_type && regime != Regime::out_of_scope;
  }
};

/// Smallest n for which the 2n-pointed space is known to be of general type,
/// g = 5..23; 0 outside that range.
int pointed_threshold(int g);

Route route(int g, int n);

/// Which attempts certify() makes.
enum class Pipeline {
  weierstrass,  // {bn, glue, W} only
  resolution,   // then {bn, glue, U|V}
  full,         // registered special sets first, then the above
};

struct Column {
  std::string name;
  catalog::ParamBlock params;
  CriticalVector critical;
  Rational multiplier;
};

struct AuditResult {
  enum class Verdict { pass, inconclusive, fail };
  Verdict verdict = Verdict::pass;
  /// Generators with a negative exact residual (fail) or an undecided bound.
  std::vector<Generator> flagged;
};

std::string to_string(AuditResult::Verdict verdict);

struct Certificate {
  int g = 0;
  int n = 0;
  std::string status;  // GENERAL_TYPE_CERTIFIED or EFFECTIVE_ONLY
  Route route;
  std::vector<Column> columns;
  Rational epsilon;
  CriticalVector residual_critical;
  AuditResult audit;
  std::vector<std::string> notes;
};

struct Attempt {
  std::vector<std::string> columns;
  std::string method;  // closed_form, joint_solve or effectivity
  bool feasible = false;
  std::string detail;
};

struct CertifyResult {
  int g = 0;
  int n = 0;
  /// GENERAL_TYPE_CERTIFIED, EFFECTIVE_ONLY, INFEASIBLE, KNOWN_GENERAL_TYPE
  /// or OUT_OF_SCOPE.
  std::string status;
  Route route;
  std::optional<Certificate> certificate;
  std::vector<Attempt> attempts;

  bool certified() const { return status == "GENERAL_TYPE_CERTIFIED"; }
};

struct CertifyOptions {
  Pipeline pipeline = Pipeline::full;
  /// When non-empty, only this column set is tried (joint solve).
  std::vector<std::string> explicit_set;
  catalog::MrcLambdaTerm term = catalog::MrcLambdaTerm::corrected;
  /// Run audit_full on the certificate. Scans that only need the verdict
  /// turn this off; the certificate then carries an unset (PASS) audit.
  bool audit = true;
};

/// Variables x0, x1, ... (one per column, nonnegative) and the five critical
/// residual rows of K - sum x_j C_j; the psi row is strict unless
/// strict_psi is false.
feasibility::InequalitySystem build_system(const SpaceParams& params,
                                           const std::vector<catalog::NamedClass>& columns,
                                           bool strict_psi = true);

CertifyResult certify(int g, int n, const CertifyOptions& options = {});

/// Solves one explicit column set; returns the certificate when feasible.
std::optional<Certificate> certify_with(int g, int n, const std::vector<std::string>& names,
                                        catalog::MrcLambdaTerm term = catalog::MrcLambdaTerm::corrected,
                                        bool strict_psi = true);

/// Residual of K - sum multiplier_j C_j on every generator of the space.
AuditResult audit_full(const Certificate& cert,
                       catalog::MrcLambdaTerm term = catalog::MrcLambdaTerm::corrected);

struct VerifyReport {
  bool ok = false;
  std::vector<std::string> problems;
};

/// Rebuilds every column from its name and the space, never trusting the
/// stored coefficients.
VerifyReport verify(const nlohmann::json& doc);
VerifyReport verify(const Certificate& cert);

nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const Route& route);
nlohmann::json to_json(const CertifyResult& result);
Certificate certificate_from_json(const nlohmann::json& doc);

}  // namespace nodal::certifier
