#include "nodal/frontend.hpp"

#include "nodal/catalog.hpp"
#include "nodal/feasibility.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace nodal::frontend {

using certifier::CertifyResult;
using certifier::Pipeline;

std::optional<TableKind> parse_table_kind(const std::string& s) {
  if (s == "thm2") return TableKind::thm2;
  if (s == "prop51") return TableKind::prop51;
  if (s == "prop52") return TableKind::prop52;
  if (s == "mg2n_reference") return TableKind::mg2n_reference;
  return std::nullopt;
}

std::optional<TableFormat> parse_table_format(const std::string& s) {
  if (s == "markdown") return TableFormat::markdown;
  if (s == "csv") return TableFormat::csv;
  return std::nullopt;
}

std::string to_string(TableKind kind) {
  switch (kind) {
    case TableKind::thm2: return "thm2";
    case TableKind::prop51: return "prop51";
    case TableKind::prop52: return "prop52";
    case TableKind::mg2n_reference: return "mg2n_reference";
  }
  return "thm2";
}

namespace known {

namespace {

std::vector<KnownRow> zip(int g0, const std::vector<int>& lo, const std::vector<int>& hi) {
  std::vector<KnownRow> out;
  for (std::size_t i = 0; i < lo.size(); ++i)
    out.push_back({g0 + static_cast<int>(i), lo[i], hi.empty() ? 0 : hi[i]});
  return out;
}

}  // namespace

const std::vector<KnownRow>& thm2() {
  static const auto rows = zip(5, {9, 9, 8, 8, 8, 6, 6, 6, 6, 5, 6, 5, 5, 5, 4, 4, 2, 2, 1},
                               {10, 14, 18, 21, 25, 28, 32, 35, 38, 42, 46, 49, 52, 56, 60, 63, 66, 70, 74});
  return rows;
}

const std::vector<KnownRow>& prop51() {
  static const auto rows = zip(7, {9, 8, 8, 8, 6, 7, 6, 6, 6, 6, 5, 6, 4, 4, 3, 4, 1},
                               {10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 32, 34, 36, 38, 40, 42});
  return rows;
}

const std::vector<KnownRow>& prop52() {
  static const auto rows = zip(5, {9, 9, 8, 8, 8, 8, 6, 7, 6, 6, 6, 6, 5, 6, 4, 4, 3, 4, 1},
                               {10, 14, 18, 21, 25, 28, 32, 35, 38, 42, 46, 49, 52, 56, 60, 63, 66, 70, 74});
  return rows;
}

const std::vector<KnownRow>& mg2n() {
  static const auto rows = zip(5, {8, 8, 8, 7, 7, 6, 6, 6, 6, 5, 5, 5, 5, 5, 4, 3, 2, 2, 1}, {});
  return rows;
}

const std::vector<KnownRow>& table(TableKind kind) {
  switch (kind) {
    case TableKind::thm2: return thm2();
    case TableKind::prop51: return prop51();
    case TableKind::prop52: return prop52();
    case TableKind::mg2n_reference: return mg2n();
  }
  return thm2();
}

}  // namespace known

Pipeline pipeline_for(TableKind kind) {
  switch (kind) {
    case TableKind::prop51: return Pipeline::weierstrass;
    case TableKind::prop52: return Pipeline::resolution;
    default: return Pipeline::full;
  }
}

std::vector<int> feasible_cells(int g, Pipeline pipeline) {
  std::vector<int> out;
  const int top = feasibility::nmax_formula(g) + 2;
  certifier::CertifyOptions opts;
  opts.pipeline = pipeline;
  opts.audit = false;
  for (int n = 1; n <= top; ++n)
    if (certifier::certify(g, n, opts).certified()) out.push_back(n);
  return out;
}

namespace {

std::string cell(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

std::string render(const TableSpec& spec, const std::vector<TableRow>& rows) {
  std::ostringstream os;
  const bool has_max = spec.which != TableKind::mg2n_reference;
  if (spec.format == TableFormat::csv) {
    os << "# " << certifier::tool_version << " table=" << to_string(spec.which) << "\n";
    os << "g,n_min,n_max\n";
    for (const TableRow& r : rows) os << r.g << "," << cell(r.n_min) << "," << (has_max ? cell(r.n_max) : "") << "\n";
    return os.str();
  }
  os << "| g |";
  for (const TableRow& r : rows) os << " " << r.g << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < rows.size(); ++i) os << "---|";
  os << "\n| n_min |";
  for (const TableRow& r : rows) os << " " << cell(r.n_min) << " |";
  os << "\n";
  if (has_max) {
    os << "| n_max |";
    for (const TableRow& r : rows) os << " " << cell(r.n_max) << " |";
    os << "\n";
  }
  os << "\n_" << certifier::tool_version << ", table " << to_string(spec.which) << "_\n";
  return os.str();
}

std::vector<CertifyResult> log_cells(int g, const std::vector<int>& ns, Pipeline pipeline) {
  certifier::CertifyOptions opts;
  opts.pipeline = pipeline;
  std::vector<CertifyResult> out;
  for (int n : ns)
    if (n >= 1) out.push_back(certifier::certify(g, n, opts));
  return out;
}

}  // namespace

TableResult gen_table(const TableSpec& spec) {
  TableResult result;
  const auto& expected = known::table(spec.which);
  const Pipeline pipeline = pipeline_for(spec.which);

  if (spec.which == TableKind::mg2n_reference) {
    for (const KnownRow& k : expected) {
      const int computed = certifier::pointed_threshold(k.g);
      result.rows.push_back({k.g, computed, std::nullopt, k, computed == k.n_min});
      if (computed != k.n_min) result.discrepancies.push_back({k.g, "n_min", computed, k.n_min, {}});
    }
    result.rendered = render(spec, result.rows);
    return result;
  }

  std::vector<std::future<std::vector<int>>> jobs;
  for (const KnownRow& k : expected)
    jobs.push_back(std::async(std::launch::async, feasible_cells, k.g, pipeline));

  for (std::size_t i = 0; i < expected.size(); ++i) {
    const KnownRow& k = expected[i];
    const std::vector<int> cells = jobs[i].get();
    TableRow row{k.g, std::nullopt, std::nullopt, k, false};
    if (!cells.empty()) {
      row.n_min = cells.front();
      row.n_max = cells.back();
    }
    row.match = row.n_min == k.n_min && row.n_max == k.n_max;
    if (row.n_min != k.n_min)
      result.discrepancies.push_back(
          {k.g, "n_min", row.n_min, k.n_min, log_cells(k.g, {row.n_min.value_or(0), k.n_min}, pipeline)});
    if (row.n_max != k.n_max)
      result.discrepancies.push_back(
          {k.g, "n_max", row.n_max, k.n_max, log_cells(k.g, {row.n_max.value_or(0), k.n_max}, pipeline)});
    result.rows.push_back(row);
  }
  result.rendered = render(spec, result.rows);
  return result;
}

std::string render_discrepancies(const std::vector<Discrepancy>& discrepancies) {
  std::ostringstream os;
  for (const Discrepancy& d : discrepancies) {
    os << "g=" << d.g << " " << d.field << ": computed " << cell(d.computed) << ", expected " << d.expected << "\n";
    for (const CertifyResult& r : d.log) {
      os << "  n=" << r.n << " " << r.status << "\n";
      for (const certifier::Attempt& a : r.attempts) {
        os << "    [";
        for (std::size_t i = 0; i < a.columns.size(); ++i) os << (i ? ", " : "") << a.columns[i];
        os << "] " << a.method << " " << (a.feasible ? "feasible" : "infeasible") << ": " << a.detail << "\n";
      }
    }
  }
  return os.str();
}

IdentityReport check_pg() {
  IdentityReport rep;
  long alternate_differs = 0;
  for (int g = 5; g <= 30; ++g) {
    int largest = 0;
    for (int n = (g + 1) / 2; 2 * n <= 6 * g; ++n) {
      ++rep.checked;
      const Rational def = feasibility::cutoff_pg(g, n);
      if (def != feasibility::cutoff_pg_closed(g, n)) {
        rep.ok = false;
        rep.lines.push_back("closed form differs at g=" + std::to_string(g) + " n=" + std::to_string(n));
      }
      if (def != feasibility::cutoff_pg_alternate(g, n)) ++alternate_differs;
      const bool feasible = feasibility::is_feasible(feasibility::solve(feasibility::reduced_system(g, n)));
      if (feasible != def.is_positive()) {
        rep.ok = false;
        rep.lines.push_back("sign disagrees with the reduced system at g=" + std::to_string(g) +
                            " n=" + std::to_string(n));
      }
      if (!def.is_negative()) largest = n;
    }
    if (largest != 2 * g - 4) {
      rep.ok = false;
      rep.lines.push_back("largest admissible n at g=" + std::to_string(g) + " is " + std::to_string(largest));
    }
    const long G = g;
    if (feasibility::cutoff_pg_discriminant(g) != Rational((2 * G - 5) * (2 * G - 5) + 8 * (4 * G * G - 11 * G + 9))) {
      rep.ok = false;
      rep.lines.push_back("discriminant mismatch at g=" + std::to_string(g));
    }
  }
  rep.lines.push_back("cutoff_pg: definition equals -2n^2+(2g-5)n+4g^2-11g+9 on " + std::to_string(rep.checked) +
                      " cells");
  rep.lines.push_back("discrepancy: constant term g^2-11g+9 disagrees with the definition on " +
                      std::to_string(alternate_differs) + " of " + std::to_string(rep.checked) + " cells");
  return rep;
}

IdentityReport check_pgrk() {
  IdentityReport rep;
  for (int g = 5; g <= 29; g += 2) {
    for (int n = 1; n <= 6 * g; ++n) {
      const auto rk = catalog::solve_rk({g, n});
      if (!rk) continue;
      ++rep.checked;
      if (feasibility::cutoff_pgrk(g, n, rk->r, rk->k) != feasibility::cutoff_pgrk_polynomial(g, n, rk->r, rk->k)) {
        rep.ok = false;
        rep.lines.push_back("mismatch at g=" + std::to_string(g) + " n=" + std::to_string(n));
      }
    }
  }
  rep.lines.push_back("cutoff_pgrk: definition equals the expanded polynomial on " + std::to_string(rep.checked) +
                      " points");
  return rep;
}

IdentityReport check_trichotomy() {
  IdentityReport rep;
  for (int g = 5; g <= 40; ++g) {
    for (int n = 1; n <= 3 * g; ++n) {
      ++rep.checked;
      const auto w = catalog::weierstrass_coefficients({g, n});
      const int sign = (w.w2 - Rational(3) * w.psi).sign();
      const int expected = 2 * n <= g - 2 ? 1 : (2 * n <= g ? 0 : -1);
      if (sign != expected) {
        rep.ok = false;
        rep.lines.push_back("sign " + std::to_string(sign) + " at g=" + std::to_string(g) + " n=" + std::to_string(n));
      }
    }
  }
  rep.lines.push_back("trichotomy of w2 - 3 wpsi holds on " + std::to_string(rep.checked) + " cells");
  return rep;
}

namespace {

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_certify(int g, int n, const std::string& set, const std::string& pipeline, bool audit,
                const std::string& out_file, std::ostream& out, std::ostream& err) {
  certifier::CertifyOptions opts;
  if (pipeline == "weierstrass") opts.pipeline = Pipeline::weierstrass;
  else if (pipeline == "resolution") opts.pipeline = Pipeline::resolution;
  else if (pipeline != "full") {
    err << "unknown pipeline \"" << pipeline << "\"\n";
    return 2;
  }
  if (set != "auto") opts.explicit_set = split_names(set);
  if (g < 2 || n < 1) {
    err << "need g >= 2 and n >= 1\n";
    return 2;
  }
  for (const std::string& name : opts.explicit_set) {
    try {
      catalog::build_named(name, {g, n}, opts.term, catalog::Extent::critical);
    } catch (const catalog::catalog_error& e) {
      if (e.code() != catalog::catalog_error::Code::unknown_class) continue;
      err << e.what() << "\n";
      return 2;
    }
  }
  const CertifyResult result = certifier::certify(g, n, opts);
  const nlohmann::json doc = result.certificate ? certifier::to_json(*result.certificate) : certifier::to_json(result);
  const std::string text = doc.dump(2) + "\n";
  if (!out_file.empty()) {
    std::ofstream f(out_file);
    if (!f) {
      err << "cannot write " << out_file << "\n";
      return 2;
    }
    f << text;
  } else {
    out << text;
  }
  if (!result.certificate) {
    for (const certifier::Attempt& a : result.attempts) {
      err << "[";
      for (std::size_t i = 0; i < a.columns.size(); ++i) err << (i ? ", " : "") << a.columns[i];
      err << "] " << a.method << ": " << a.detail << "\n";
    }
  }
  if (audit && result.certificate) {
    err << "audit: " << certifier::to_string(result.certificate->audit.verdict) << "\n";
    if (result.certificate->audit.verdict == certifier::AuditResult::Verdict::fail) return 1;
  }
  return result.certified() || result.status == "KNOWN_GENERAL_TYPE" ? 0 : 1;
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path);
  if (!f) {
    err << "cannot read " << path << "\n";
    return 2;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(f);
  } catch (const std::exception& e) {
    err << "malformed JSON: " << e.what() << "\n";
    return 2;
  }
  const certifier::VerifyReport rep = certifier::verify(doc);
  if (rep.ok) {
    out << "verified\n";
    return 0;
  }
  out << "rejected\n";
  for (const std::string& p : rep.problems) err << "  " << p << "\n";
  return 1;
}

int cmd_table(const std::string& which, const std::string& format, bool compare, std::ostream& out,
              std::ostream& err) {
  const auto kind = parse_table_kind(which);
  const auto fmt = parse_table_format(format);
  if (!kind || !fmt) {
    err << "unknown table or format\n";
    return 2;
  }
  const TableResult t = gen_table({*kind, *fmt});
  out << t.rendered;
  if (!compare) return 0;
  if (t.all_match()) {
    err << "all cells match\n";
    return 0;
  }
  err << render_discrepancies(t.discrepancies);
  return 1;
}

int cmd_scan(int g, int from, int to, std::ostream& out, std::ostream& err) {
  if (g < 2 || from < 1 || to < from) {
    err << "need g >= 2 and 1 <= n-from <= n-to\n";
    return 2;
  }
  for (int n = from; n <= to; ++n) {
    const CertifyResult r = certifier::certify(g, n);
    out << "g=" << g << " n=" << n << " " << r.status;
    if (r.certificate) {
      out << " [";
      for (std::size_t i = 0; i < r.certificate->columns.size(); ++i)
        out << (i ? ", " : "") << r.certificate->columns[i].name;
      out << "] audit=" << certifier::to_string(r.certificate->audit.verdict);
    }
    out << "\n";
  }
  return 0;
}

int cmd_identity(const std::string& which, std::ostream& out, std::ostream& err) {
  IdentityReport rep;
  if (which == "pg") rep = check_pg();
  else if (which == "pgrk") rep = check_pgrk();
  else if (which == "trichotomy") rep = check_trichotomy();
  else {
    err << "unknown identity \"" << which << "\"\n";
    return 2;
  }
  for (const std::string& line : rep.lines) out << line << "\n";
  out << (rep.ok ? "OK" : "MISMATCH") << "\n";
  return rep.ok ? 0 : 1;
}

int cmd_bounds(int g, std::ostream& out, std::ostream& err) {
  if (g < 5) {
    err << "bounds need g >= 5\n";
    return 2;
  }
  const auto [lo, hi] = feasibility::cutoff_pg_roots(g);
  out << "2g-4: " << 2 * g - 4 << "\n";
  out << "nmax_formula: " << feasibility::nmax_formula(g) << "\n";
  out << std::fixed << std::setprecision(6) << "cutoff_pg roots: " << lo << ", " << hi << "\n";
  out << "cutoff_pg discriminant: " << feasibility::cutoff_pg_discriminant(g) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact general-type certifier for nodal curve moduli"};
  app.set_version_flag("--version", std::string(certifier::tool_version));
  app.require_subcommand(1);

  int g = 0, n = 0, n_from = 1, n_to = 0;
  bool audit = false, compare = false;
  std::string set = "auto", pipeline = "full", out_file, cert, which, format = "markdown";

  auto* c_certify = app.add_subcommand("certify", "certify one (g,n) cell");
  c_certify->add_option("--g", g)->required();
  c_certify->add_option("--n", n)->required();
  c_certify->add_option("--set", set, "auto or comma-separated class names");
  c_certify->add_option("--pipeline", pipeline, "full, weierstrass or resolution");
  c_certify->add_flag("--audit", audit);
  c_certify->add_option("--out", out_file);

  auto* c_verify = app.add_subcommand("verify", "re-check a certificate file");
  c_verify->add_option("--cert", cert)->required();

  auto* c_table = app.add_subcommand("table", "regenerate a table");
  c_table->add_option("--which", which)->required();
  c_table->add_option("--format", format);
  c_table->add_flag("--compare", compare);

  auto* c_scan = app.add_subcommand("scan", "certify a range of n");
  c_scan->add_option("--g", g)->required();
  c_scan->add_option("--n-from", n_from);
  c_scan->add_option("--n-to", n_to);

  auto* c_identity = app.add_subcommand("identity-check", "check a cutoff identity");
  c_identity->add_option("--which", which)->required();

  auto* c_bounds = app.add_subcommand("bounds", "print n-range bounds for a genus");
  c_bounds->add_option("--g", g)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << certifier::tool_version << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_certify) return cmd_certify(g, n, set, pipeline, audit, out_file, out, err);
    if (*c_verify) return cmd_verify(cert, out, err);
    if (*c_table) return cmd_table(which, format, compare, out, err);
    if (*c_scan) {
      if (n_to == 0) n_to = g >= 5 ? feasibility::nmax_formula(g) + 2 : 10;
      return cmd_scan(g, n_from, n_to, out, err);
    }
    if (*c_identity) return cmd_identity(which, out, err);
    if (*c_bounds) return cmd_bounds(g, out, err);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace nodal::frontend
