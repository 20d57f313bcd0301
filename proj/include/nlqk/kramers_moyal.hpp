#pragma once

// Explicit finite-difference solver for the truncated Kramers-Moyal form
// d_tau u = sum_{k=2..N} c_k d^k u, used as an independent check of the
// spectral propagator.

#include <nlqk/kernel_engine.hpp>
#include <nlqk/nonlocality.hpp>
#include <nlqk/qsde_algebra.hpp>

#include <optional>
#include <span>
#include <vector>

namespace nlqk {

inline constexpr int kMaxKramersMoyalOrder = 8;
inline constexpr int kStencilHalfWidth = 4;

/// Fornberg weights for derivative orders 0..max_order at x0 on the given
/// nodes. Result[m][j] multiplies f(nodes[j]) for the m-th derivative.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                  int max_order);

/// Largest stable step: 0.4 dx^2 / sigma^2 / (1 + |eps|/dx)^(N-2).
double stable_time_step(double dx, double sigma, double eps, int truncation);

struct KramersMoyalOptions {
  std::optional<int> n_steps;
};

/// coeffs[i] multiplies the (i+2)-th derivative. RK4 in time; 9-point
/// stencils, shifted to one side within four cells of either end.
SolutionSlice solve_kramers_moyal(const SolutionSlice& u0, std::span<const double> coeffs,
                                  double sigma, double eps, double tau,
                                  KramersMoyalOptions options = {});

SolutionSlice solve_kramers_moyal(const SolutionSlice& u0, const BackwardPDE& pde, double sigma,
                                  double eps, double tau, KramersMoyalOptions options = {});

/// Kramers-Moyal generator of the nonlocal evolution with the given symbolic
/// H moments: order k+2 carries (sigma^2/2) (-1)^k mu_k / k!. The result is
/// in the forward (density) convention.
BackwardPDE kramers_moyal_pde(std::span<const CoeffPoly> h_moments, int truncation);

/// Numeric version of the above for an arbitrary H.
std::vector<double> kramers_moyal_coefficients(const NonlocalityFunction& h, double sigma,
                                               int truncation);

}  // namespace nlqk
