#pragma once

// Grid realization of operators (a(x), H(z; x)) acting by
//   (A psi)(x) = a(x) sum_z psi(x - z) H(z; x) dx
// with periodic wraparound, their composition, unit and involution.

#include <nlqk/fourier.hpp>
#include <nlqk/nonlocality.hpp>

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

namespace nlqk {

using cplx = std::complex<double>;

class StateVector {
 public:
  StateVector(FourierGrid grid, std::vector<cplx> values);
  static StateVector from_function(const FourierGrid& grid, const std::function<cplx(double)>& f);

  const FourierGrid& grid() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  /// sqrt(sum |psi|^2 dx)
  double norm() const;

 private:
  FourierGrid grid_;
  std::vector<cplx> values_;
};

/// Kernel field rows are indexed by x_i, columns by displacement
/// z_c = c dx for c < n/2 and (c - n) dx otherwise.
class NonlocalOperator {
 public:
  NonlocalOperator(FourierGrid grid, std::vector<cplx> symbol, std::vector<cplx> kernel);

  /// (1, delta)
  static NonlocalOperator identity(const FourierGrid& grid);
  /// (a, delta)
  static NonlocalOperator multiplication(const FourierGrid& grid, const std::function<cplx(double)>& a);
  /// Rows sampled from the density of kernel_at(x), entries below 1e-30 of
  /// the row peak set to zero, then normalized to unit mass. A Dirac kernel
  /// gives the Kronecker row 1/dx at z = 0.
  static NonlocalOperator from_nonlocality(
      const FourierGrid& grid, const std::function<cplx(double)>& a,
      const std::function<NonlocalityFunction(double)>& kernel_at);

  const FourierGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  const std::vector<cplx>& symbol() const { return symbol_; }
  const std::vector<cplx>& kernel() const { return kernel_; }
  cplx kernel(int row, int col) const {
    return kernel_[static_cast<std::size_t>(row) * static_cast<std::size_t>(size()) +
                   static_cast<std::size_t>(col)];
  }
  double displacement(int col) const;
  /// sum_z H(z; x_row) dx
  cplx row_mass(int row) const;

  friend bool operator==(const NonlocalOperator&, const NonlocalOperator&) = default;

 private:
  FourierGrid grid_;
  std::vector<cplx> symbol_;
  std::vector<cplx> kernel_;
};

StateVector apply(const NonlocalOperator& a, const StateVector& psi);
/// Adjoint with respect to sum conj(phi) psi dx.
StateVector apply_adjoint(const NonlocalOperator& a, const StateVector& psi);

/// H_ab(z; x) = sum_u H_a(u; x) b(x - u) H_b(z - u; x - u) dx, symbol a(x).
NonlocalOperator compose(const NonlocalOperator& a, const NonlocalOperator& b, int jobs = 1);
NonlocalOperator involution(const NonlocalOperator& a);

/// Largest ||A psi|| / ||psi|| seen over `trials` seeded power iterations on
/// A*A. Trial t uses seed + t, so the estimate never decreases with trials.
double operator_norm_estimate(const NonlocalOperator& a, int trials, std::uint64_t seed = 0,
                              int iterations = 200);

/// sup over (x, z) of |a(x) H_a(z; x) - b(x) H_b(z; x)|
double sup_distance(const NonlocalOperator& a, const NonlocalOperator& b);
/// sup over (x, z) of |a(x) H(z; x)|
double sup_scale(const NonlocalOperator& a);
double sup_distance(const StateVector& a, const StateVector& b);

/// Three x-dependent operators with smooth complex symbols on [-L/2, L/2),
/// L = 8, used by the algebra checks.
struct AlgebraFixtures {
  NonlocalOperator a;
  NonlocalOperator b;
  NonlocalOperator c;
};
inline constexpr double kFixtureLength = 8.0;
AlgebraFixtures standard_fixtures(int n);
/// Smooth, well-resolved test state on the fixture grid.
StateVector fixture_state(const FourierGrid& grid);

/// {"n", "L", "symbol": [[re, im], ...], "kernel_kind": {...}} where
/// kernel_kind is {"kind": "dirac"|"gaussian"|"triangular", "eps": number or
/// per-x array} or {"kind": "dense", "csv": path}. Dense CSV: n rows of
/// 2n numbers, real and imaginary parts interleaved.
NonlocalOperator load_operator_json(const std::filesystem::path& path);
/// Writes `path` plus a dense CSV next to it.
void save_operator_json(const NonlocalOperator& a, const std::filesystem::path& path);

}  // namespace nlqk
