#include <nlqk/qsde_algebra.hpp>

#include <nlqk/errors.hpp>

#include <cmath>
#include <sstream>

namespace nlqk {

std::string_view to_string(Differential d) {
  switch (d) {
    case Differential::dt: return "dt";
    case Differential::dA: return "dA";
    case Differential::dAdag: return "dAdag";
    case Differential::dLambda: return "dLambda";
  }
  return "?";
}

std::optional<Differential> ito_multiply(Differential left, Differential right) {
  // Rows dA+ and dt vanish identically.
  switch (left) {
    case Differential::dA:
      if (right == Differential::dAdag) return Differential::dt;
      if (right == Differential::dLambda) return Differential::dA;
      return std::nullopt;
    case Differential::dLambda:
      if (right == Differential::dAdag) return Differential::dAdag;
      if (right == Differential::dLambda) return Differential::dLambda;
      return std::nullopt;
    case Differential::dAdag:
    case Differential::dt:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- CoeffPoly

CoeffPoly::CoeffPoly(const Rational& constant) { add_term({0, 0}, constant); }

CoeffPoly::CoeffPoly(Monomial m, const Rational& coeff) {
  if (m.sigma_pow < 0 || m.eps_pow < 0) throw InvalidArgument("CoeffPoly: negative power");
  add_term(m, coeff);
}

void CoeffPoly::add_term(Monomial m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

CoeffPoly& CoeffPoly::operator+=(const CoeffPoly& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

CoeffPoly operator-(CoeffPoly lhs, const CoeffPoly& rhs) {
  for (const auto& [m, c] : rhs.terms_) lhs.add_term(m, -c);
  return lhs;
}

CoeffPoly& CoeffPoly::operator*=(const CoeffPoly& rhs) {
  CoeffPoly product;
  for (const auto& [ml, cl] : terms_) {
    for (const auto& [mr, cr] : rhs.terms_) {
      product.add_term({ml.sigma_pow + mr.sigma_pow, ml.eps_pow + mr.eps_pow}, cl * cr);
    }
  }
  terms_ = std::move(product.terms_);
  return *this;
}

CoeffPoly& CoeffPoly::operator*=(const Rational& rhs) {
  if (rhs == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= rhs;
  return *this;
}

CoeffPoly CoeffPoly::negate_eps() const {
  CoeffPoly out;
  for (const auto& [m, c] : terms_) out.add_term(m, m.eps_pow % 2 == 0 ? c : Rational(-c));
  return out;
}

double CoeffPoly::evaluate(double sigma, double eps) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    total += to_double(c) * std::pow(sigma, m.sigma_pow) * std::pow(eps, m.eps_pow);
  }
  return total;
}

std::string CoeffPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << nlqk::to_string(c);
    if (m.sigma_pow > 0) out << "*sigma^" << m.sigma_pow;
    if (m.eps_pow > 0) out << "*eps^" << m.eps_pow;
  }
  return out.str();
}

// ----------------------------------------------------- IncrementCombination

IncrementCombination IncrementCombination::term(Differential d, CoeffPoly coeff) {
  IncrementCombination out;
  out.add(d, coeff);
  return out;
}

void IncrementCombination::add(Differential d, const CoeffPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeff_.try_emplace(d, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeff_.erase(it);
  }
}

const CoeffPoly& IncrementCombination::coefficient(Differential d) const {
  static const CoeffPoly zero;
  const auto it = coeff_.find(d);
  return it == coeff_.end() ? zero : it->second;
}

IncrementCombination& IncrementCombination::operator+=(const IncrementCombination& rhs) {
  for (const auto& [d, c] : rhs.coeff_) add(d, c);
  return *this;
}

std::string IncrementCombination::to_string() const {
  if (coeff_.empty()) return "0";
  std::string out;
  for (const auto& [d, c] : coeff_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")*" + std::string(nlqk::to_string(d));
  }
  return out;
}

IncrementCombination combine_multiply(const IncrementCombination& x,
                                      const IncrementCombination& y) {
  IncrementCombination out;
  for (const auto& [dl, cl] : x.coefficients()) {
    for (const auto& [dr, cr] : y.coefficients()) {
      if (const auto d = ito_multiply(dl, dr)) {
        out += IncrementCombination::term(*d, cl * cr);
      }
    }
  }
  return out;
}

IncrementCombination drift_free_increment() {
  return IncrementCombination::term(Differential::dA, CoeffPoly::sigma()) +
         IncrementCombination::term(Differential::dAdag, CoeffPoly::sigma()) +
         IncrementCombination::term(Differential::dLambda, CoeffPoly::eps());
}

IncrementCombination expand_power(int k, const IncrementCombination& base) {
  if (k < 1) throw InvalidArgument("expand_power: k must be >= 1");
  IncrementCombination acc = base;
  for (int i = 1; i < k; ++i) acc = combine_multiply(acc, base);
  return acc;
}

CoeffPoly vacuum_expectation(const IncrementCombination& x) {
  return x.coefficient(Differential::dt);
}

// -------------------------------------------------------------- BackwardPDE

std::string_view to_string(PdeConvention c) {
  return c == PdeConvention::backward ? "backward" : "fokker_planck";
}

const CoeffPoly& BackwardPDE::coefficient(int k) const {
  if (k < 2 || k > order()) throw InvalidArgument("BackwardPDE: order out of range");
  return coeffs[static_cast<std::size_t>(k - 2)];
}

std::vector<double> BackwardPDE::numeric(double sigma, double eps) const {
  std::vector<double> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.push_back(c.evaluate(sigma, eps));
  return out;
}

bool operator==(const BackwardPDE& a, const BackwardPDE& b) {
  return a.convention == b.convention && a.coeffs == b.coeffs;
}

BackwardPDE derive_backward_pde(int max_order) {
  if (max_order < 2) throw InvalidArgument("derive_backward_pde: N must be >= 2");
  BackwardPDE pde;
  pde.convention = PdeConvention::backward;
  const IncrementCombination base = drift_free_increment();
  IncrementCombination power = base;
  for (int k = 2; k <= max_order; ++k) {
    power = combine_multiply(power, base);
    pde.coeffs.push_back(vacuum_expectation(power) * (Rational(1) / factorial(k)));
  }
  return pde;
}

BackwardPDE derive_fokker_planck(int max_order) {
  BackwardPDE pde = derive_backward_pde(max_order);
  pde.convention = PdeConvention::fokker_planck;
  for (auto& c : pde.coeffs) c = c.negate_eps();
  return pde;
}

// --------------------------------------------------------------------- JSON

nlohmann::json to_json(const CoeffPoly& poly) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : poly.terms()) {
    terms.push_back({{"sigma_pow", m.sigma_pow},
                     {"eps_pow", m.eps_pow},
                     {"num", to_int64(boost::multiprecision::numerator(c))},
                     {"den", to_int64(boost::multiprecision::denominator(c))}});
  }
  return terms;
}

nlohmann::json to_json(const BackwardPDE& pde) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int k = 2; k <= pde.order(); ++k) {
    coeffs.push_back({{"k", k}, {"poly", to_json(pde.coefficient(k))}});
  }
  return {{"convention", std::string(to_string(pde.convention))}, {"coeffs", coeffs}};
}

BackwardPDE backward_pde_from_json(const nlohmann::json& j) {
  try {
    BackwardPDE pde;
    const auto convention = j.at("convention").get<std::string>();
    if (convention == "backward") {
      pde.convention = PdeConvention::backward;
    } else if (convention == "fokker_planck") {
      pde.convention = PdeConvention::fokker_planck;
    } else {
      throw InvalidArgument("unknown convention '" + convention + "'");
    }
    int expected_k = 2;
    for (const auto& entry : j.at("coeffs")) {
      if (entry.at("k").get<int>() != expected_k++) {
        throw InvalidArgument("coefficients must be listed for k = 2, 3, ... in order");
      }
      CoeffPoly poly;
      for (const auto& t : entry.at("poly")) {
        const auto den = t.at("den").get<std::int64_t>();
        if (den == 0) throw InvalidArgument("zero denominator");
        poly += CoeffPoly({t.at("sigma_pow").get<int>(), t.at("eps_pow").get<int>()},
                          Rational(BigInt(t.at("num").get<std::int64_t>()), BigInt(den)));
      }
      pde.coeffs.push_back(std::move(poly));
    }
    if (pde.coeffs.empty()) throw InvalidArgument("no coefficients");
    return pde;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("backward_pde_from_json: ") + e.what());
  }
}

}  // namespace nlqk
