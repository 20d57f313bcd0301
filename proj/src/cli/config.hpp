#pragma once

#include <nlqk/fourier.hpp>
#include <nlqk/nonlocality.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlqk::cli {

struct RunConfig {
  double sigma = 1.0;
  double tau = 1.0;
  double eps = 0.05;
  std::string h = "gaussian";
  std::optional<int> n;
  std::optional<double> length;
  std::optional<int> order;
  std::string output;
  int jobs = 1;
  std::uint64_t seed = 0;
  int trials = 4;
  std::string payoff;
  std::vector<std::string> methods{"spectral"};
  std::vector<double> eps_list{0.0, 0.05, 0.1, 0.2};
  std::string potential = "sin";
  std::string fixture = "standard";
};

inline constexpr int kDefaultGridPoints = 4096;
inline constexpr int kDefaultAlgebraGridPoints = 512;
inline constexpr int kMaxAlgebraGridPoints = 1024;

/// Throws InvalidArgument for any parameter out of range.
void validate(const RunConfig& cfg);

/// "dirac", "gaussian", "triangular" (all using cfg.eps) or "tabulated:<csv>".
NonlocalityFunction make_nonlocality(const RunConfig& cfg);

/// Explicit n and L when given. Otherwise n = 4096 and L from the default
/// grid rule; for a triangular H the spacing is then shrunk to divide eps,
/// since its kernel lives on the lattice eps Z.
FourierGrid resolve_grid(const RunConfig& cfg, const NonlocalityFunction& h);

struct SolveMethod {
  bool spectral = true;
  int truncation = 0;
  std::string suffix;
};
SolveMethod parse_method(const std::string& text);

}  // namespace nlqk::cli
