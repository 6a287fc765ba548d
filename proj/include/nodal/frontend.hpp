#pragma once

#include "nodal/certifier.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nodal::frontend {

enum class TableKind { thm2, prop51, prop52, mg2n_reference };
enum class TableFormat { markdown, csv };

struct TableSpec {
  TableKind which = TableKind::thm2;
  TableFormat format = TableFormat::markdown;
};

std::optional<TableKind> parse_table_kind(const std::string& s);
std::optional<TableFormat> parse_table_format(const std::string& s);
std::string to_string(TableKind kind);

struct KnownRow {
  int g = 0;
  int n_min = 0;
  int n_max = 0;  // 0 where the table has no upper end
};

namespace known {
// Published tables, transcribed as printed.
const std::vector<KnownRow>& thm2();
const std::vector<KnownRow>& prop51();
const std::vector<KnownRow>& prop52();
const std::vector<KnownRow>& mg2n();
const std::vector<KnownRow>& table(TableKind kind);
}  // namespace known

struct TableRow {
  int g = 0;
  std::optional<int> n_min;
  std::optional<int> n_max;
  KnownRow expected;
  bool match = false;
};

struct Discrepancy {
  int g = 0;
  std::string field;  // n_min or n_max
  std::optional<int> computed;
  int expected = 0;
  /// certify results at the computed and the expected n
  std::vector<certifier::CertifyResult> log;
};

struct TableResult {
  std::vector<TableRow> rows;
  std::vector<Discrepancy> discrepancies;
  std::string rendered;
  bool all_match() const { return discrepancies.empty(); }
};

certifier::Pipeline pipeline_for(TableKind kind);

/// Certified n-range for one genus: every n from 1 to nmax_formula(g)+2.
std::vector<int> feasible_cells(int g, certifier::Pipeline pipeline);

/// Regenerates the table (genera concurrently), compares with the known
/// values and renders it.
TableResult gen_table(const TableSpec& spec);

std::string render_discrepancies(const std::vector<Discrepancy>& discrepancies);

struct IdentityReport {
  bool ok = true;
  long checked = 0;
  std::vector<std::string> lines;
};

/// Definition vs closed form of cutoff_pg for 5 <= g <= 30, g <= 2n <= 6g;
/// sign vs the reduced (y,z) system; largest admissible n; the alternate
/// constant term is reported.
IdentityReport check_pg();
/// Definition vs expanded polynomial of cutoff_pgrk, g odd, 5 <= g <= 29.
IdentityReport check_pgrk();
/// sign(w2 - 3 wpsi) against 2n vs g for 5 <= g <= 40, n <= 3g.
IdentityReport check_trichotomy();

/// Exit codes: 0 ok, 1 infeasible / rejected / mismatch, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nodal::frontend
