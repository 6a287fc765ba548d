#include "nodal/catalog.hpp"

#include <algorithm>

namespace nodal::catalog {

namespace {

std::string cell(const SpaceParams& p) {
  return "(g=" + std::to_string(p.g) + ", n=" + std::to_string(p.n) + ")";
}

Rational r(long v) { return Rational(v); }

std::vector<Generator> scope(const SpaceParams& params, Extent extent) {
  if (extent == Extent::full) return enumerate_generators(params);
  validate(params);
  std::vector<Generator> out;
  for (const Generator& gen : critical_generators())
    if (is_valid(params, gen)) out.push_back(gen);
  return out;
}

}  // namespace

WParams weierstrass_params(const SpaceParams& params) {
  validate(params);
  WParams out;
  out.m = std::min(2 * params.n, params.g);
  if (out.m < 2) throw catalog_error(catalog_error::Code::degenerate, "W needs m >= 2 at " + cell(params));
  out.k = params.g / out.m;
  out.r = params.g % out.m;
  return out;
}

WCoefficients weierstrass_coefficients(const SpaceParams& params) {
  const auto [m, k, rr] = weierstrass_params(params);
  const long N = 2L * params.n;
  const Rational heavy = Rational((k + 1L) * (k + 2L), 2);
  const Rational light = Rational(long(k) * (k + 1L), 2);

  WCoefficients out;
  out.lambda = binom(N, rr) * binom(N - rr, m - rr);
  out.psi = binom(N - 1, rr - 1) * binom(N - rr, m - rr) * heavy +
            binom(N - 1, rr) * binom(N - rr - 1, m - rr - 1) * light;
  out.w2 = r(2) * out.psi +
           binom(N - 2, rr - 2) * binom(N - rr, m - rr) * r((k + 1L) * (k + 1L)) +
           r(2) * binom(N - 2, rr - 1) * binom(N - rr - 1, m - rr - 1) * r(long(k) * (k + 1L)) +
           binom(N - 2, rr) * binom(N - rr - 2, m - rr - 2) * r(long(k) * k);
  return out;
}

std::optional<RKParams> solve_rk(const SpaceParams& params) {
  validate(params);
  const long g = params.g;
  if (g < 3) return std::nullopt;
  const long target = (g % 2 == 1) ? 2L * params.n : 2L * params.n - 1;
  for (long rr = 1; (2 * rr + 1) * (g - 1) <= target + 2 * (g - 2); ++rr) {
    const long gap = (2 * rr + 1) * (g - 1) - target;
    if (gap < 0 || gap % 2 != 0) continue;
    const long k = gap / 2;
    if (k <= g - 2) return RKParams{static_cast<int>(rr), static_cast<int>(k)};
  }
  return std::nullopt;
}

Rational mrc_boundary(int g, const RKParams& rk, int s) {
  return binom(s + 1, 2) * r(g - 1) + r(long(s) * (long(rk.r) * g - rk.r - rk.k));
}

MrcCoefficients mrc_coefficients(int g, const RKParams& rk, MrcLambdaTerm term) {
  if (g < 3) throw catalog_error(catalog_error::Code::degenerate, "minimal-resolution class needs g >= 3");
  const long G = g, R = rk.r, Kk = rk.k;
  const long constant = term == MrcLambdaTerm::corrected ? 1 : R;
  MrcCoefficients out;
  out.lambda = Rational((G - 1) * (G - 2) * (6 * R * R + 6 * R + constant) +
                            Kk * (24 * R + 10 * Kk + 10 - 10 * G - 12 * R * G),
                        G - 2);
  out.psi = r(R * G + G - Kk - R - 1);
  out.irr = (binom(R + 1, 2) * r((G - 1) * (G - 2)) + r(Kk * (Kk + 1 + 2 * R - R * G - G))) / r(G - 2);
  out.d02 = mrc_boundary(g, rk, 2);
  return out;
}

DivisorClass canonical_K(const SpaceParams& params, Extent extent) {
  DivisorClass K(params);
  K.set(Generator::lambda(), r(13));
  K.set(Generator::psi(), r(1));
  K.set(Generator::delta_irr(), r(-2));
  for (const Generator& gen : scope(params, extent)) {
    if (!gen.is_delta()) continue;
    const bool extra = (gen.i == 1 && gen.a == 0 && gen.b == 0) || (gen.i == 0 && gen.a == 1 && gen.b == 0);
    K.set(gen, r(extra ? -3 : -2));
  }
  return K;
}

DivisorClass class_B(const SpaceParams& params, Extent extent) {
  validate(params);
  const long g = params.g;
  if (is_prime(g + 1))
    throw catalog_error(catalog_error::Code::prime_input, "B needs g+1 composite at " + cell(params));
  DivisorClass B(params);
  B.set(Generator::lambda(), r(g + 3));
  B.set(Generator::delta_irr(), -Rational(g + 1, 6));
  for (const Generator& gen : scope(params, extent))
    if (gen.is_delta() && gen.i >= 1) B.set(gen, r(-gen.i * (g - gen.i)));
  return B;
}

DivisorClass class_D(const SpaceParams& params, Extent extent) {
  validate(params);
  const long h = params.g + params.n;
  if (is_prime(h + 1))
    throw catalog_error(catalog_error::Code::prime_input, "D needs g+n+1 composite at " + cell(params));
  const Rational d0(h + 1, 6);
  DivisorClass D(params);
  D.set(Generator::lambda(), r(h + 3));
  D.set(Generator::psi(), d0);
  D.set(Generator::delta_irr(), -d0);
  for (const Generator& gen : scope(params, extent)) {
    if (!gen.is_delta()) continue;
    const long j = gen.i + gen.a;
    D.set(gen, gen.b != 0 ? -d0 : r(-j * (h - j)));
  }
  return D;
}

DivisorClass class_E(const SpaceParams& params, Extent extent) {
  validate(params);
  const long g = params.g;
  if (g % 2 != 0) throw catalog_error(catalog_error::Code::parity, "E needs g even at " + cell(params));
  const long h = g / 2;
  const Rational e1 = r((g - 1) * (3 * h + 1));
  DivisorClass E(params);
  E.set(Generator::lambda(), r(6 * (h + 1) * (h + 1) + h - 5));
  E.set(Generator::delta_irr(), r(-(h + 1) * h));
  for (const Generator& gen : scope(params, extent)) {
    if (!gen.is_delta() || gen.i == 0) continue;
    if (gen.i == 1)
      E.set(gen, -e1);
    else
      E.set_lower_bound(gen, e1);
  }
  return E;
}

DivisorClass class_F(const SpaceParams& params, Extent extent) {
  validate(params);
  const long s = params.g + params.n;
  if (s % 2 != 0) throw catalog_error(catalog_error::Code::parity, "F needs g+n even at " + cell(params));
  const long h = s / 2;
  const Rational f0 = r((h + 1) * h);
  const Rational f1 = r((s - 1) * (3 * h + 1));
  DivisorClass F(params);
  F.set(Generator::lambda(), r(6 * (h + 1) * (h + 1) + h - 5));
  F.set(Generator::psi(), f0);
  F.set(Generator::delta_irr(), -f0);
  for (const Generator& gen : scope(params, extent)) {
    if (!gen.is_delta()) continue;
    if (gen.b != 0)
      F.set(gen, -f0);
    else if (gen.i + gen.a == 1)
      F.set(gen, -f1);
    else
      F.set_lower_bound(gen, f1);
  }
  return F;
}

DivisorClass class_W(const SpaceParams& params, Extent extent) {
  const WCoefficients w = weierstrass_coefficients(params);
  DivisorClass W(params);
  W.set(Generator::lambda(), -w.lambda);
  W.set(Generator::psi(), w.psi);
  std::vector<Rational> by_points;
  for (int s = 0; s <= 2 * params.n; ++s) by_points.push_back(r(s) * w.psi);
  for (const Generator& gen : scope(params, extent)) {
    if (!gen.is_delta()) continue;
    if (gen.i >= 1)
      W.set_lower_bound(gen, r(0));
    else if (gen.points() == 2)
      W.set(gen, -w.w2);
    else
      W.set_lower_bound(gen, by_points[static_cast<std::size_t>(gen.points())]);
  }
  return W;
}

namespace {

void check_rk(const SpaceParams& params, const RKParams& rk) {
  const auto expected = solve_rk(params);
  if (!expected || !(*expected == rk))
    throw catalog_error(catalog_error::Code::rk_mismatch,
                        "(r,k) = (" + std::to_string(rk.r) + "," + std::to_string(rk.k) +
                            ") does not match " + cell(params));
}

}  // namespace

DivisorClass class_U(const SpaceParams& params, const RKParams& rk, MrcLambdaTerm term, Extent extent) {
  validate(params);
  if (params.g % 2 != 1) throw catalog_error(catalog_error::Code::parity, "U needs g odd at " + cell(params));
  check_rk(params, rk);
  const MrcCoefficients a = mrc_coefficients(params.g, rk, term);
  DivisorClass U(params);
  U.set(Generator::lambda(), -a.lambda);
  U.set(Generator::psi(), a.psi);
  U.set(Generator::delta_irr(), a.irr);
  std::vector<Rational> by_points;
  for (int s = 0; s <= 2 * params.n; ++s) by_points.push_back(mrc_boundary(params.g, rk, s));
  for (const Generator& gen : scope(params, extent)) {
    if (!gen.is_delta()) continue;
    const Rational& boundary = by_points[static_cast<std::size_t>(gen.points())];
    if (gen.i == 0)
      U.set(gen, -boundary);
    else
      U.set_lower_bound(gen, boundary);
  }
  return U;
}

MrcCoefficients v_coefficients(const SpaceParams& params, const RKParams& rk, MrcLambdaTerm term) {
  const MrcCoefficients a = mrc_coefficients(params.g, rk, term);
  const long N = 2L * params.n;
  MrcCoefficients v;
  v.lambda = r(N) * a.lambda;
  v.psi = r(N - 1) * a.psi;
  v.irr = r(N) * a.irr;
  v.d02 = r(2) * a.psi + r(N - 2) * a.d02;
  return v;
}

DivisorClass class_V(const SpaceParams& params, const RKParams& rk, MrcLambdaTerm term, Extent extent) {
  validate(params);
  if (params.g % 2 != 0) throw catalog_error(catalog_error::Code::parity, "V needs g even at " + cell(params));
  check_rk(params, rk);
  const MrcCoefficients v = v_coefficients(params, rk, term);
  DivisorClass V(params);
  V.set(Generator::lambda(), -v.lambda);
  V.set(Generator::psi(), v.psi);
  V.set(Generator::delta_irr(), v.irr);
  for (const Generator& gen : scope(params, extent)) {
    if (!gen.is_delta()) continue;
    if (gen.i == 0 && gen.points() == 2)
      V.set(gen, -v.d02);
    else
      V.set_lower_bound(gen, v.d02);
  }
  return V;
}

bool SpecialEntry::applies_to(const SpaceParams& p) const {
  return std::find(applicable.begin(), applicable.end(), p) != applicable.end();
}

CriticalVector forgetful_pullback_sum(const CriticalVector& critical, int source_points) {
  if (source_points < 2)
    throw std::invalid_argument("forgetful_pullback_sum: need at least 2 source points");
  if (critical.d010 != critical.d002)
    throw std::invalid_argument("forgetful_pullback_sum: |S| = 2 entries must agree");
  const Rational P(source_points);
  // psi_j pulls back to psi_j - delta_{0,{i,j}}; delta_{0,S} to
  // delta_{0,S} + delta_{0,S+i}. Each 2-set survives P-1 of the P+1 maps and
  // picks up -psi from both of its labels.
  const Rational pair = (P - 1) * critical.d010 - Rational(2) * critical.psi;
  return {(P + 1) * critical.lam, P * critical.psi, (P + 1) * critical.dirr, pair, pair};
}

namespace {

CriticalVector cv(Rational l, Rational p, Rational d, Rational t1, Rational t2) {
  return {std::move(l), std::move(p), std::move(d), std::move(t1), std::move(t2)};
}

std::vector<SpecialEntry> build_registry() {
  std::vector<SpecialEntry> out;

  SpecialEntry z10;
  z10.name = "Z10";
  z10.applicable = {{10, 6}, {10, 7}};
  z10.critical = cv(7, 0, -1, 0, 0);
  z10.deep = DeepRule::from_unpointed;
  z10.companions = {"glue", "W"};
  z10.source_note = "slope-7 divisor on M_10 pulled back along the forgetful map";
  out.push_back(z10);

  SpecialEntry z21;
  z21.name = "Z21";
  z21.applicable = {{21, 2}};
  z21.critical = cv(2459, 0, -377, 0, 0);
  z21.deep = DeepRule::from_unpointed;
  z21.companions = {"W"};
  z21.source_note = "slope 2459/377 divisor on M_21 pulled back along the forgetful map";
  out.push_back(z21);

  SpecialEntry z16;
  z16.name = "Z16";
  z16.applicable = {{16, 5}};
  z16.critical = cv(407, 0, -61, 0, 0);
  z16.deep = DeepRule::from_unpointed;
  z16.companions = {"W"};
  z16.source_note = "slope 407/61 divisor on M_16 pulled back along the forgetful map";
  out.push_back(z16);

  SpecialEntry d12;
  d12.name = "D12";
  d12.applicable = {{12, 6}};
  d12.critical = cv(13245, 0, -1926, 0, 0);
  d12.deep = DeepRule::from_unpointed;
  d12.genus_bounds = {{1, Rational(9867)}};
  d12.companions = {"glue", "W"};
  d12.source_note = "13245 lambda - 1926 delta_irr - 9867 delta_1 - ... on M_12, pulled back";
  out.push_back(d12);

  SpecialEntry l224;
  l224.name = "L224";
  l224.applicable = {{22, 2}};
  l224.critical = cv(13, 1, -2, Rational(-10, 3), Rational(-10, 3));
  l224.companions = {"bn", "W"};
  l224.source_note = "B_23 pulled back by gluing to M_22,2 and summed over forgetful maps from M_22,4";
  out.push_back(l224);

  SpecialEntry l226;
  l226.name = "L226";
  l226.applicable = {{22, 3}};
  l226.critical = cv(13, Rational(2, 3), -2, Rational(-56, 30), Rational(-56, 30));
  l226.companions = {"W"};
  l226.source_note = "B_23 pulled back by gluing to M_22,2 and summed over forgetful maps from M_22,6";
  out.push_back(l226);

  SpecialEntry nf14;
  nf14.name = "NF14";
  nf14.applicable = {{14, 5}};
  nf14.critical = cv(35, 54, -10, -173, -173);
  nf14.companions = {"bn"};
  nf14.source_note = "Nfold^1_{14,12} coefficients applied on M_14,10 (index label differs from the space)";
  out.push_back(nf14);

  SpecialEntry lin18;
  lin18.name = "LIN18";
  lin18.applicable = {{18, 5}};
  lin18.critical = forgetful_pullback_sum(cv(290, 24, -45, -82, -82), 9);
  lin18.companions = {"W"};
  lin18.params = {{"source_points", 9}};
  lin18.source_note = "Lin^8_24 on M_18,9 summed over the 10 forgetful pullbacks to M_18,10";
  out.push_back(lin18);

  return out;
}

}  // namespace

const std::vector<SpecialEntry>& special_registry() {
  static const std::vector<SpecialEntry> registry = build_registry();
  return registry;
}

const SpecialEntry* find_special(std::string_view name) {
  for (const SpecialEntry& e : special_registry())
    if (e.name == name) return &e;
  return nullptr;
}

DivisorClass special_class(const SpecialEntry& entry, const SpaceParams& params, Extent extent) {
  if (!entry.applies_to(params))
    throw catalog_error(catalog_error::Code::not_applicable, entry.name + " does not apply at " + cell(params));
  DivisorClass cls(params);
  const auto gens = critical_generators();
  const auto values = entry.critical.values();
  for (std::size_t k = 0; k < gens.size(); ++k)
    if (is_valid(params, gens[k])) cls.set(gens[k], values[k]);
  for (const Generator& gen : scope(params, extent)) {
    if (!gen.is_delta() || (gen.i == 0 && gen.points() == 2)) continue;
    if (entry.deep == DeepRule::from_unpointed && gen.i == 0) continue;  // exactly zero
    auto it = entry.genus_bounds.find(gen.i);
    cls.set_lower_bound(gen, it == entry.genus_bounds.end() ? Rational(0) : it->second);
  }
  return cls;
}

NamedClass build_named(std::string_view name, const SpaceParams& params, MrcLambdaTerm term, Extent extent) {
  NamedClass out{std::string(name), {}, DivisorClass(params)};
  if (name == "B") {
    out.cls = class_B(params, extent);
  } else if (name == "D") {
    out.cls = class_D(params, extent);
  } else if (name == "E") {
    out.cls = class_E(params, extent);
  } else if (name == "F") {
    out.cls = class_F(params, extent);
  } else if (name == "W") {
    const WParams w = weierstrass_params(params);
    out.params = {{"k", w.k}, {"m", w.m}, {"r", w.r}};
    out.cls = class_W(params, extent);
  } else if (name == "U" || name == "V") {
    const auto rk = solve_rk(params);
    if (!rk)
      throw catalog_error(catalog_error::Code::not_applicable,
                          std::string(name) + " has no admissible (r,k) at " + cell(params));
    out.params = {{"k", rk->k}, {"r", rk->r}};
    out.cls = name == "U" ? class_U(params, *rk, term, extent) : class_V(params, *rk, term, extent);
  } else if (const SpecialEntry* entry = find_special(name)) {
    out.params = entry->params;
    out.cls = special_class(*entry, params, extent);
  } else {
    throw catalog_error(catalog_error::Code::unknown_class, "unknown class \"" + std::string(name) + "\"");
  }
  return out;
}

}  // namespace nodal::catalog
