#include "nodal/picard.hpp"

#include <charconv>
#include <ostream>
#include <utility>

namespace nodal {

void validate(const SpaceParams& params) {
  if (params.g < 2 || params.n < 1)
    throw std::invalid_argument("space parameters need g >= 2 and n >= 1, got g=" +
                                std::to_string(params.g) + " n=" + std::to_string(params.n));
}

std::string Generator::str() const {
  switch (kind) {
    case Kind::lambda: return "lambda";
    case Kind::psi: return "psi";
    case Kind::delta_irr: return "delta_irr";
    case Kind::delta:
      return "delta[" + std::to_string(i) + ";" + std::to_string(a) + "," + std::to_string(b) + "]";
  }
  return {};
}

Generator Generator::parse(std::string_view text) {
  if (text == "lambda") return lambda();
  if (text == "psi") return psi();
  if (text == "delta_irr") return delta_irr();
  const auto bad = [&] { return std::invalid_argument("bad generator \"" + std::string(text) + "\""); };
  if (!text.starts_with("delta[") || !text.ends_with("]")) throw bad();
  std::string_view body = text.substr(6, text.size() - 7);
  int parts[3];
  const char seps[3] = {';', ',', '\0'};
  for (int k = 0; k < 3; ++k) {
    const auto* first = body.data();
    const auto* last = body.data() + body.size();
    auto [ptr, ec] = std::from_chars(first, last, parts[k]);
    if (ec != std::errc() || ptr == first) throw bad();
    body.remove_prefix(static_cast<std::size_t>(ptr - first));
    if (seps[k] != '\0') {
      if (body.empty() || body.front() != seps[k]) throw bad();
      body.remove_prefix(1);
    }
  }
  if (!body.empty()) throw bad();
  return delta(parts[0], parts[1], parts[2]);
}

std::ostream& operator<<(std::ostream& os, const Generator& gen) { return os << gen.str(); }

bool is_valid(const SpaceParams& params, const Generator& gen) {
  if (!gen.is_delta()) return true;
  if (gen.i < 0 || gen.i > params.g / 2) return false;
  if (gen.a < 0 || gen.b < 0 || gen.a + gen.b > params.n) return false;
  if (gen.i == 0 && gen.points() < 2) return false;
  return true;
}

Generator canonical(const SpaceParams& params, const Generator& gen) {
  if (!gen.is_delta() || params.g % 2 != 0 || gen.i != params.g / 2) return gen;
  const Generator complement = Generator::delta(gen.i, params.n - gen.a - gen.b, gen.b);
  return complement < gen ? complement : gen;
}

std::vector<Generator> enumerate_generators(const SpaceParams& params) {
  validate(params);
  std::vector<Generator> out = {Generator::lambda(), Generator::psi(), Generator::delta_irr()};
  for (int i = 0; i <= params.g / 2; ++i)
    for (int a = 0; a <= params.n; ++a)
      for (int b = 0; a + b <= params.n; ++b) {
        const Generator gen = Generator::delta(i, a, b);
        if (!is_valid(params, gen)) continue;
        if (canonical(params, gen) != gen) continue;
        out.push_back(gen);
      }
  return out;
}

std::array<Generator, 5> critical_generators() {
  return {Generator::lambda(), Generator::psi(), Generator::delta_irr(), Generator::delta(0, 1, 0),
          Generator::delta(0, 0, 2)};
}

CriticalVector CriticalVector::from_values(const std::array<Rational, 5>& v) {
  return {v[0], v[1], v[2], v[3], v[4]};
}

CriticalVector operator-(const CriticalVector& lhs, const CriticalVector& rhs) {
  return {lhs.lam - rhs.lam, lhs.psi - rhs.psi, lhs.dirr - rhs.dirr, lhs.d010 - rhs.d010,
          lhs.d002 - rhs.d002};
}

CriticalVector operator*(const Rational& c, const CriticalVector& v) {
  return {c * v.lam, c * v.psi, c * v.dirr, c * v.d010, c * v.d002};
}

DivisorClass::DivisorClass(SpaceParams params) : params_(params) { validate(params_); }

Generator DivisorClass::checked(const Generator& gen) const {
  if (!is_valid(params_, gen))
    throw std::out_of_range("generator " + gen.str() + " is out of range for g=" +
                            std::to_string(params_.g) + " n=" + std::to_string(params_.n));
  return canonical(params_, gen);
}

void DivisorClass::set(const Generator& gen, Rational value) {
  const Generator key = checked(gen);
  lower_bounds_.erase(key);
  if (value.is_zero())
    exact_.erase(key);
  else
    exact_[key] = std::move(value);
}

void DivisorClass::set_lower_bound(const Generator& gen, Rational bound) {
  const Generator key = checked(gen);
  exact_.erase(key);
  lower_bounds_[key] = std::move(bound);
}

Coefficient DivisorClass::coeff(const Generator& gen) const {
  if (!is_valid(params_, gen)) return {Rational(0), true};
  const Generator key = canonical(params_, gen);
  if (auto it = lower_bounds_.find(key); it != lower_bounds_.end()) return {-it->second, false};
  if (auto it = exact_.find(key); it != exact_.end()) return {it->second, true};
  return {Rational(0), true};
}

std::vector<Coefficient> DivisorClass::coeffs(const std::vector<Generator>& sorted) const {
  std::vector<Coefficient> out;
  out.reserve(sorted.size());
  auto ex = exact_.begin();
  auto lb = lower_bounds_.begin();
  for (const Generator& gen : sorted) {
    while (ex != exact_.end() && ex->first < gen) ++ex;
    while (lb != lower_bounds_.end() && lb->first < gen) ++lb;
    if (lb != lower_bounds_.end() && lb->first == gen)
      out.push_back({-lb->second, false});
    else if (ex != exact_.end() && ex->first == gen)
      out.push_back({ex->second, true});
    else
      out.push_back({Rational(0), true});
  }
  return out;
}

CriticalVector DivisorClass::critical() const {
  std::array<Rational, 5> v;
  const auto gens = critical_generators();
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const Coefficient c = coeff(gens[k]);
    if (!c.exact)
      throw std::logic_error("critical generator " + gens[k].str() + " carries only a bound");
    v[k] = c.value;
  }
  return CriticalVector::from_values(v);
}

DivisorClass DivisorClass::scaled(const Rational& c) const {
  if (!c.is_positive()) throw std::invalid_argument("scale factor must be positive");
  DivisorClass out(params_);
  for (const auto& [gen, value] : exact_) out.exact_[gen] = c * value;
  for (const auto& [gen, bound] : lower_bounds_) out.lower_bounds_[gen] = c * bound;
  return out;
}

DivisorClass operator+(const DivisorClass& lhs, const DivisorClass& rhs) {
  if (!(lhs.params_ == rhs.params_))
    throw error_params_mismatch("cannot add classes on different spaces");
  DivisorClass out = lhs;
  for (const auto& [gen, value] : rhs.exact_) {
    if (auto it = out.lower_bounds_.find(gen); it != out.lower_bounds_.end()) {
      // coefficient <= -L plus exactly v is <= -(L - v)
      it->second -= value;
    } else {
      Rational sum = out.exact_.count(gen) ? out.exact_[gen] + value : value;
      if (sum.is_zero())
        out.exact_.erase(gen);
      else
        out.exact_[gen] = std::move(sum);
    }
  }
  for (const auto& [gen, bound] : rhs.lower_bounds_) {
    if (auto it = out.lower_bounds_.find(gen); it != out.lower_bounds_.end()) {
      it->second += bound;
    } else {
      Rational total = bound;
      if (auto ex = out.exact_.find(gen); ex != out.exact_.end()) {
        total -= ex->second;
        out.exact_.erase(ex);
      }
      out.lower_bounds_[gen] = std::move(total);
    }
  }
  return out;
}

DivisorClass scale(const Rational& c, const DivisorClass& cls) { return cls.scaled(c); }

DivisorClass add(const DivisorClass& lhs, const DivisorClass& rhs) { return lhs + rhs; }

DivisorClass omega_total(const SpaceParams& params) {
  DivisorClass out(params);
  out.set(Generator::psi(), Rational(1));
  for (const Generator& gen : enumerate_generators(params))
    if (gen.is_delta() && gen.i == 0) out.set(gen, Rational(-gen.points()));
  return out;
}

}  // namespace nodal
