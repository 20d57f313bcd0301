#pragma once

// Fundamental solution of d_tau u = (sigma^2/2) d^2 (H * u) by Fourier
// inversion of exp(-sigma^2 p^2 tau H~(p) / 2), and its action on data.

#include <nlqk/fourier.hpp>
#include <nlqk/nonlocality.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <vector>

namespace nlqk {

/// Relative size of the outermost kernel cells above which the domain is
/// considered too small.
inline constexpr double kKernelTailThreshold = 1e-6;
/// Largest accepted imaginary residue after inversion, relative to the peak.
inline constexpr double kKernelImagResidue = 1e-10;

struct KernelSample {
  FourierGrid grid;
  std::vector<double> values;
  double sigma = 0.0;
  double tau = 0.0;
  NonlocalityFunction nonlocality;
  /// max |Im K| / max |Re K| before the imaginary part was discarded
  double imag_residue = 0.0;
};

class SolutionSlice {
 public:
  SolutionSlice(FourierGrid grid, std::vector<double> values, double tau = 0.0);

  const FourierGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double tau() const { return tau_; }

 private:
  FourierGrid grid_;
  std::vector<double> values_;
  double tau_;
};

/// n = 4096, L = 1.5 * 20 * max(sigma sqrt(tau), eps)
FourierGrid default_grid(double sigma, double tau, double eps);

/// exp(-sigma^2 p^2 tau H~(p) / 2)
std::complex<double> kernel_symbol(const NonlocalityFunction& h, double sigma, double tau,
                                   double p);

KernelSample build_kernel(const NonlocalityFunction& h, double sigma, double tau,
                          const FourierGrid& grid);

struct QuadratureMoment {
  double value = 0.0;
  /// |x^k K| at the two outermost cells relative to sum |x^k K| dx
  double boundary_fraction = 0.0;
  bool boundary_warning() const { return boundary_fraction > kKernelTailThreshold; }
};

QuadratureMoment kernel_moment_with_diagnostics(const KernelSample& kernel, int k);
/// sum x^k K(x) dx; prints a warning to stderr when the tails are not resolved.
double kernel_moment(const KernelSample& kernel, int k);

/// sum max(-K, 0) dx
double negative_mass(const KernelSample& kernel);

/// Circular convolution u(x) = sum_y K(x - y) u0(y) dx.
SolutionSlice propagate(const SolutionSlice& u0, const KernelSample& kernel);
SolutionSlice propagate(const SolutionSlice& u0, const NonlocalityFunction& h, double sigma,
                        double tau);

nlohmann::json nonlocality_json(const NonlocalityFunction& h);
nlohmann::json kernel_sidecar_json(const KernelSample& kernel);

/// CSV (x, value) on a grid that must be a FourierGrid.
SolutionSlice load_solution_csv(const std::filesystem::path& path);
std::string to_csv(const SolutionSlice& u);
std::string to_csv(const KernelSample& k);

}  // namespace nlqk
