#include "nodal/catalog.hpp"
#include "nodal/certifier.hpp"
#include "nodal/feasibility.hpp"
#include "support/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nodal;
using namespace nodal::feasibility;

namespace {

Inequality row(std::map<std::string, Rational> c, Rational b, Sense s = Sense::le) {
  return {std::move(c), std::move(b), s, ""};
}

}  // namespace

TEST(Eliminate, SinglePairing) {
  InequalitySystem sys;
  sys.add_variable("y", false);
  sys.add_variable("z", false);
  sys.add_row(row({{"y", 1}, {"z", 1}}, 1, Sense::lt));
  sys.add_row(row({{"z", -1}}, -3));
  const InequalitySystem out = eliminate(sys, "z");
  ASSERT_EQ(out.rows().size(), 1u);
  EXPECT_EQ(out.rows()[0].coefficients, (std::map<std::string, Rational>{{"y", 1}}));
  EXPECT_EQ(out.rows()[0].bound, Rational(-2));
  EXPECT_TRUE(out.rows()[0].strict());
  EXPECT_EQ(out.variables().size(), 1u);
}

TEST(Eliminate, NoLowerBoundDropsRows) {
  InequalitySystem sys;
  sys.add_variable("x", false);
  sys.add_variable("y");
  sys.add_row(row({{"x", 1}, {"y", 1}}, 4));
  sys.add_row(row({{"x", 2}}, 7));
  sys.add_row(row({{"y", 1}}, 1));
  const InequalitySystem out = eliminate(sys, "x");
  ASSERT_EQ(out.rows().size(), 1u);
  EXPECT_EQ(out.rows()[0].str(), "y <= 1");
}

TEST(Eliminate, NonnegativityActsAsLowerBound) {
  InequalitySystem sys;
  sys.add_variable("x");
  sys.add_row(row({{"x", 1}}, -1));
  const InequalitySystem out = eliminate(sys, "x");
  ASSERT_EQ(out.rows().size(), 1u);
  EXPECT_TRUE(out.rows()[0].is_constant());
  EXPECT_FALSE(out.rows()[0].constant_holds());
}

TEST(Eliminate, UndeclaredVariableThrows) {
  InequalitySystem sys;
  sys.add_variable("x");
  EXPECT_THROW(eliminate(sys, "q"), std::invalid_argument);
}

TEST(System, DeclarationErrors) {
  InequalitySystem sys;
  sys.add_variable("x");
  EXPECT_THROW(sys.add_variable("x"), std::invalid_argument);
  EXPECT_THROW(sys.add_row(row({{"w", 1}}, 0)), std::invalid_argument);
  InequalitySystem big;
  for (int i = 0; i < 9; ++i) big.add_variable("v" + std::to_string(i));
  EXPECT_THROW(solve(big), std::invalid_argument);
}

TEST(Solve, ContradictionTrace) {
  InequalitySystem sys;
  sys.add_variable("x", false);
  sys.add_row(row({{"x", 1}}, 1));
  sys.add_row(row({{"x", -1}}, -2));
  const SolveResult res = solve(sys);
  ASSERT_FALSE(is_feasible(res));
  const auto& t = std::get<InfeasibilityTrace>(res);
  EXPECT_EQ(t.contradiction_str(), "0 <= -1");
  EXPECT_TRUE(recombines(t));
  EXPECT_EQ(t.multipliers, (std::vector<Rational>{1, 1}));
}

TEST(Solve, StrictContradiction) {
  InequalitySystem sys;
  sys.add_variable("x");
  sys.add_row(row({{"x", 1}}, 0, Sense::lt));
  const SolveResult res = solve(sys);
  ASSERT_FALSE(is_feasible(res));
  EXPECT_EQ(std::get<InfeasibilityTrace>(res).contradiction_str(), "0 < 0");
}

TEST(Solve, ConstantRowsInInput) {
  InequalitySystem sys;
  sys.add_variable("x");
  sys.add_row(row({}, -1));
  EXPECT_FALSE(is_feasible(solve(sys)));
  InequalitySystem ok;
  ok.add_variable("x");
  ok.add_row(row({}, 0));
  EXPECT_TRUE(is_feasible(solve(ok)));
}

TEST(Solve, IntervalSelectionRule) {
  InequalitySystem both;
  both.add_variable("x");
  both.add_row(row({{"x", 1}}, 3));
  EXPECT_EQ(std::get<Witness>(solve(both)).assignment.at("x"), Rational(3, 2));

  InequalitySystem above;
  above.add_variable("x");
  above.add_row(row({{"x", -1}}, -5));
  EXPECT_EQ(std::get<Witness>(solve(above)).assignment.at("x"), Rational(6));

  InequalitySystem below;
  below.add_variable("x", false);
  below.add_row(row({{"x", 1}}, -5));
  EXPECT_EQ(std::get<Witness>(solve(below)).assignment.at("x"), Rational(-6));

  InequalitySystem free;
  free.add_variable("x", false);
  EXPECT_EQ(std::get<Witness>(solve(free)).assignment.at("x"), Rational(0));

  InequalitySystem point;
  point.add_variable("x");
  point.add_row(row({{"x", 1}}, 2));
  point.add_row(row({{"x", -1}}, -2));
  EXPECT_EQ(std::get<Witness>(solve(point)).assignment.at("x"), Rational(2));
}

TEST(Solve, ElevenSixFullSystem) {
  const std::vector<catalog::NamedClass> cols = {catalog::build_named("B", {11, 6}),
                                                 catalog::build_named("D", {11, 6}),
                                                 catalog::build_named("W", {11, 6})};
  const InequalitySystem sys = certifier::build_system({11, 6}, cols);
  const Assignment reference = {{"x0", Rational(479, 500)}, {"x1", Rational(7, 250)}, {"x2", Rational(81, 1000)}};
  EXPECT_TRUE(sys.satisfied_by(reference));
  const SolveResult res = solve(sys);
  ASSERT_TRUE(is_feasible(res));
  EXPECT_TRUE(sys.satisfied_by(std::get<Witness>(res).assignment));
}

TEST(Solve, TwentyThreeOneClosedForm) {
  const std::vector<catalog::NamedClass> cols = {catalog::build_named("B", {23, 1}),
                                                 catalog::build_named("W", {23, 1})};
  const InequalitySystem sys = certifier::build_system({23, 1}, cols);
  const Assignment a = {{"x0", Rational(1, 2)}, {"x1", Rational(3, 552)}};
  ASSERT_TRUE(sys.satisfied_by(a));
  // lambda row: 13 - 26/2 + 2 * 3/552
  Rational lhs(0);
  for (const auto& [v, c] : sys.rows()[0].coefficients) lhs += c * a.at(v);
  EXPECT_EQ(sys.rows()[0].bound - lhs, Rational(1, 92));
}

TEST(Solve, WitnessesRecheckAndTracesRecombine) {
  std::mt19937 rng(20240611);
  for (int t = 0; t < 300; ++t) {
    InequalitySystem sys;
    std::uniform_int_distribution<int> coef(-9, 9), nvar(1, 4), nrow(1, 7);
    const int nv = nvar(rng);
    for (int v = 0; v < nv; ++v) sys.add_variable("v" + std::to_string(v), coef(rng) > -5);
    const int nr = nrow(rng);
    for (int i = 0; i < nr; ++i) {
      Inequality r;
      for (int v = 0; v < nv; ++v) r.coefficients["v" + std::to_string(v)] = Rational(coef(rng));
      r.bound = Rational(coef(rng));
      r.sense = coef(rng) > 3 ? Sense::lt : Sense::le;
      sys.add_row(r);
    }
    const SolveResult res = solve(sys);
    if (is_feasible(res))
      EXPECT_TRUE(sys.satisfied_by(std::get<Witness>(res).assignment));
    else
      EXPECT_TRUE(recombines(std::get<InfeasibilityTrace>(res)));
  }
}

TEST(Solve, AgreesWithArrangementOracle) {
  std::mt19937 rng(99);
  int feasible = 0;
  for (int t = 0; t < 400; ++t) {
    const InequalitySystem sys = oracle::random_system(rng);
    const SolveResult res = solve(sys);
    EXPECT_EQ(is_feasible(res), oracle::brute_force_feasible(sys)) << t;
    feasible += is_feasible(res);
  }
  // both verdicts occur
  EXPECT_GT(feasible, 40);
  EXPECT_LT(feasible, 360);
}

TEST(Solve, ColumnScalingPreservesVerdict) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> scale(1, 12), gi(7, 23), ni(1, 40);
  for (int t = 0; t < 60; ++t) {
    const int g = gi(rng), n = ni(rng);
    const certifier::Route r = certifier::route(g, n);
    if (!r.certifiable()) continue;
    std::vector<catalog::NamedClass> cols = {catalog::build_named(r.bn_side, {g, n}),
                                             catalog::build_named(r.glue_side, {g, n}),
                                             catalog::build_named("W", {g, n})};
    const bool before = is_feasible(solve(certifier::build_system({g, n}, cols)));
    const Rational c(scale(rng), scale(rng));
    cols[t % 3].cls = cols[t % 3].cls.scaled(c);
    const SolveResult after = solve(certifier::build_system({g, n}, cols));
    EXPECT_EQ(before, is_feasible(after)) << g << "," << n;
  }
}

TEST(CutoffPg, ClosedFormAndBoundary) {
  for (int g = 5; g <= 30; ++g) {
    int largest = 0;
    for (int n = (g + 1) / 2; 2 * n <= 6 * g; ++n) {
      EXPECT_EQ(cutoff_pg(g, n), cutoff_pg_closed(g, n)) << g << "," << n;
      if (!cutoff_pg(g, n).is_negative()) largest = n;
    }
    EXPECT_EQ(largest, 2 * g - 4);
    EXPECT_EQ(cutoff_pg_closed(g, 2 * g - 4), Rational(3 * g - 3));
    EXPECT_EQ(cutoff_pg_closed(g, 2 * g - 3), Rational(-3 * g + 6));
  }
  EXPECT_FALSE(cutoff_pg(23, 42).is_negative());
  EXPECT_TRUE(cutoff_pg(23, 43).is_negative());
  EXPECT_THROW(cutoff_pg(23, 11), std::domain_error);
  EXPECT_THROW(cutoff_pg(4, 3), std::domain_error);
}

TEST(CutoffPg, AlternateConstantDiffersByThreeGSquared) {
  for (int g = 5; g <= 12; ++g)
    for (int n = g; n <= 2 * g; ++n)
      EXPECT_EQ(cutoff_pg(g, n) - cutoff_pg_alternate(g, n), Rational(3 * g * g));
}

TEST(CutoffPg, DiscriminantAndRoots) {
  for (int g = 5; g <= 30; ++g) {
    const long G = g;
    EXPECT_EQ(cutoff_pg_discriminant(g), Rational((2 * G - 5) * (2 * G - 5) + 8 * (4 * G * G - 11 * G + 9)));
    const auto [lo, hi] = cutoff_pg_roots(g);
    const auto q = [&](double n) { return -2 * n * n + (2.0 * g - 5) * n + 4.0 * g * g - 11.0 * g + 9; };
    EXPECT_NEAR(q(lo), 0.0, 1e-6);
    EXPECT_NEAR(q(hi), 0.0, 1e-6);
    EXPECT_GT(hi, 2 * g - 4);
    EXPECT_LT(hi, 2 * g - 3);
  }
}

TEST(CutoffPg, SignMatchesReducedSystem) {
  for (int g = 5; g <= 30; ++g)
    for (int n = (g + 1) / 2; 2 * n <= 5 * g; ++n)
      EXPECT_EQ(is_feasible(solve(reduced_system(g, n))), cutoff_pg(g, n).is_positive()) << g << "," << n;
}

TEST(CutoffPg, EmptyIntervalAfterEliminatingY) {
  // past the boundary, eliminating y leaves a system in z with no solution
  InequalitySystem sys = reduced_system(23, 43);
  const InequalitySystem z_only = eliminate(sys, "y");
  EXPECT_FALSE(is_feasible(solve(z_only)));
  EXPECT_TRUE(is_feasible(solve(eliminate(reduced_system(23, 42), "y"))));
}

TEST(CutoffPgrk, KnownPoints) {
  EXPECT_EQ(cutoff_pgrk(5, 8, 2, 2), Rational(36));
  EXPECT_EQ(cutoff_pgrk_polynomial(5, 8, 2, 2), Rational(36));
  EXPECT_EQ(cutoff_pgrk(5, 10, 2, 0), Rational(16));
  EXPECT_EQ(cutoff_pgrk_polynomial(5, 10, 2, 0), Rational(16));
  EXPECT_THROW(cutoff_pgrk(6, 9, 1, 0), std::domain_error);
  EXPECT_THROW(cutoff_pgrk(5, 8, 2, 1), std::domain_error);
}

TEST(CutoffPgrk, RandomCellsAgree) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> gi(2, 14), ni(1, 170);
  int checked = 0;
  while (checked < 200) {
    const int g = 2 * gi(rng) + 1, n = ni(rng);
    const auto rk = catalog::solve_rk({g, n});
    if (!rk) continue;
    EXPECT_EQ(cutoff_pgrk(g, n, rk->r, rk->k), cutoff_pgrk_polynomial(g, n, rk->r, rk->k)) << g << "," << n;
    ++checked;
  }
}

TEST(NmaxFormula, KnownColumns) {
  EXPECT_EQ(nmax_formula(5), 10);
  EXPECT_EQ(nmax_formula(8), 21);
  EXPECT_EQ(nmax_formula(23), 74);
  const int expected[] = {10, 14, 18, 21, 25, 28, 32, 35, 38, 42, 46, 49, 52, 56, 60, 63, 66, 70, 74};
  for (int g = 5; g <= 23; ++g) EXPECT_EQ(nmax_formula(g), expected[g - 5]) << g;
  EXPECT_THROW(nmax_formula(4), std::domain_error);
}
