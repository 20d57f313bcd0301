#pragma once

// Symbolic quantum Ito calculus for the translation-type process
//   dX_t = sigma dA_t + sigma dA+_t + eps dLambda_t
// with coefficients that are exact polynomials in (sigma, eps).

#include <nlqk/rational.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nlqk {

enum class Differential { dt, dA, dAdag, dLambda };

inline constexpr std::array<Differential, 4> kAllDifferentials = {
    Differential::dt, Differential::dA, Differential::dAdag, Differential::dLambda};

std::string_view to_string(Differential d);

/// Hudson-Parthasarathy multiplication table. The left factor selects the
/// row. std::nullopt is the zero differential.
std::optional<Differential> ito_multiply(Differential left, Differential right);

/// Polynomial in sigma and eps with rational coefficients. Zero coefficients
/// are never stored.
class CoeffPoly {
 public:
  struct Monomial {
    int sigma_pow = 0;
    int eps_pow = 0;
    auto operator<=>(const Monomial&) const = default;
  };
  using Terms = std::map<Monomial, Rational>;

  CoeffPoly() = default;
  explicit CoeffPoly(const Rational& constant);
  CoeffPoly(Monomial m, const Rational& coeff);

  static CoeffPoly sigma(int power = 1) { return {{power, 0}, Rational(1)}; }
  static CoeffPoly eps(int power = 1) { return {{0, power}, Rational(1)}; }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// eps -> -eps
  CoeffPoly negate_eps() const;
  double evaluate(double sigma, double eps) const;
  std::string to_string() const;

  CoeffPoly& operator+=(const CoeffPoly& rhs);
  CoeffPoly& operator*=(const CoeffPoly& rhs);
  CoeffPoly& operator*=(const Rational& rhs);
  friend CoeffPoly operator+(CoeffPoly lhs, const CoeffPoly& rhs) { return lhs += rhs; }
  friend CoeffPoly operator-(CoeffPoly lhs, const CoeffPoly& rhs);
  friend CoeffPoly operator*(CoeffPoly lhs, const CoeffPoly& rhs) { return lhs *= rhs; }
  friend CoeffPoly operator*(CoeffPoly lhs, const Rational& rhs) { return lhs *= rhs; }
  friend bool operator==(const CoeffPoly&, const CoeffPoly&) = default;

 private:
  void add_term(Monomial m, const Rational& c);
  Terms terms_;
};

/// c_t dt + c_A dA + c_A+ dA+ + c_Lambda dLambda. Absent keys are zero.
class IncrementCombination {
 public:
  IncrementCombination() = default;
  static IncrementCombination term(Differential d, CoeffPoly coeff);

  const CoeffPoly& coefficient(Differential d) const;
  const std::map<Differential, CoeffPoly>& coefficients() const { return coeff_; }
  bool is_zero() const { return coeff_.empty(); }

  IncrementCombination& operator+=(const IncrementCombination& rhs);
  friend IncrementCombination operator+(IncrementCombination lhs,
                                        const IncrementCombination& rhs) {
    return lhs += rhs;
  }
  friend bool operator==(const IncrementCombination&, const IncrementCombination&) = default;

  std::string to_string() const;

 private:
  void add(Differential d, const CoeffPoly& c);
  std::map<Differential, CoeffPoly> coeff_;
};

/// Bilinear extension of ito_multiply. Not commutative.
IncrementCombination combine_multiply(const IncrementCombination& x,
                                      const IncrementCombination& y);

/// sigma dA + sigma dA+ + eps dLambda
IncrementCombination drift_free_increment();

/// base * base * ... * base (k factors), folded from the left. k >= 1.
IncrementCombination expand_power(int k, const IncrementCombination& base);

/// Only the dt component survives the vacuum expectation.
CoeffPoly vacuum_expectation(const IncrementCombination& x);

enum class PdeConvention { backward, fokker_planck };

std::string_view to_string(PdeConvention c);

/// Generator coefficients b_2..b_N of d^k u.
struct BackwardPDE {
  PdeConvention convention = PdeConvention::backward;
  std::vector<CoeffPoly> coeffs;  // coeffs[k - 2] multiplies d^k

  int order() const { return static_cast<int>(coeffs.size()) + 1; }
  const CoeffPoly& coefficient(int k) const;
  /// b_2..b_N evaluated at numeric sigma, eps.
  std::vector<double> numeric(double sigma, double eps) const;
};

bool operator==(const BackwardPDE& a, const BackwardPDE& b);

BackwardPDE derive_backward_pde(int max_order);
BackwardPDE derive_fokker_planck(int max_order);

nlohmann::json to_json(const CoeffPoly& poly);
nlohmann::json to_json(const BackwardPDE& pde);
BackwardPDE backward_pde_from_json(const nlohmann::json& j);

}  // namespace nlqk
