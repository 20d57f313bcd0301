#pragma once

// Nonlocality functions H(y): probability distributions with all moments
// finite, evaluable characteristic function and (for most kinds) a density.

#include <nlqk/qsde_algebra.hpp>
#include <nlqk/rational.hpp>

#include <complex>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nlqk {

/// Moments a_0..a_N of a distribution; a_0 == 1.
class MomentSequence {
 public:
  MomentSequence() : values_{1.0} {}
  explicit MomentSequence(std::vector<double> values);

  int max_order() const { return static_cast<int>(values_.size()) - 1; }
  double operator[](int k) const { return values_.at(static_cast<std::size_t>(k)); }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Hankel matrix [a_{i+j}], 0 <= i,j <= floor(N/2), is positive semidefinite
/// up to a relative eigenvalue tolerance.
bool hankel_psd(const MomentSequence& moments, double rel_tol = 1e-12);

class NonlocalityFunction;

namespace kind {
struct Dirac {};
struct Gaussian {
  double eps;  // standard deviation
};
/// 2 (eps - y) / eps^2 on [0, eps]
struct Triangular {
  double eps;
};
struct Tabulated {
  std::vector<double> y;
  std::vector<double> density;
};
struct MomentOnly {
  MomentSequence moments;
};
/// Law of Y1 + Y2 for independent Y1 ~ left, Y2 ~ right.
struct Convolution {
  std::shared_ptr<const NonlocalityFunction> left;
  std::shared_ptr<const NonlocalityFunction> right;
};
}  // namespace kind

class NonlocalityFunction {
 public:
  using Kind = std::variant<kind::Dirac, kind::Gaussian, kind::Triangular, kind::Tabulated,
                            kind::MomentOnly, kind::Convolution>;

  static NonlocalityFunction dirac();
  static NonlocalityFunction gaussian(double eps);
  static NonlocalityFunction triangular(double eps);
  /// Strictly increasing y, nonnegative density integrating to 1 within 1e-10
  /// (trapezoid rule). With normalize = true the density is rescaled first.
  static NonlocalityFunction tabulated(std::vector<double> y, std::vector<double> density,
                                       bool normalize = false);
  static NonlocalityFunction moment_only(MomentSequence moments);
  static NonlocalityFunction convolution(NonlocalityFunction left, NonlocalityFunction right);

  const Kind& kind() const { return kind_; }
  std::string kind_name() const;
  /// Length scale for Gaussian/Triangular, 0 for Dirac, NaN otherwise.
  double length_scale() const;

  bool has_char_fn() const;
  bool has_density() const;
  /// Density value; Dirac, MomentOnly and Convolution have none.
  double density(double y) const;

 private:
  explicit NonlocalityFunction(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

MomentSequence moments(const NonlocalityFunction& h, int max_order);

/// Exact moments for the closed-form kinds; tabulated and moment-only
/// values are the exact rationals of their double moments.
std::vector<Rational> exact_moments(const NonlocalityFunction& h, int max_order);

/// H~(p) = integral e^{ipy} H(y) dy
std::complex<double> char_fn(const NonlocalityFunction& h, double p);

/// Triangular(eps): its moments are 2 eps^k / ((k+1)(k+2)).
NonlocalityFunction qfp_matching_nonlocality(double eps);

/// The k-th moment 2 eps^k / ((k+1)(k+2)) of Triangular(eps) as a polynomial in eps.
CoeffPoly triangular_moment_symbolic(int k);

NonlocalityFunction self_convolve(const NonlocalityFunction& h);

/// Binomial convolution: moments of Y1 + Y2 for independent Y1, Y2.
std::vector<double> convolve_moments(std::span<const double> a, std::span<const double> b);

/// Two-column CSV (y, density); optional header row; strictly increasing y.
NonlocalityFunction load_tabulated_csv(const std::filesystem::path& path, bool normalize = true);

}  // namespace nlqk
