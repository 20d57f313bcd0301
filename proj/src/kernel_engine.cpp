#include <nlqk/kernel_engine.hpp>

#include <nlqk/errors.hpp>
#include <nlqk/io.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>

namespace nlqk {

SolutionSlice::SolutionSlice(FourierGrid grid, std::vector<double> values, double tau)
    : grid_(grid), values_(std::move(values)), tau_(tau) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw InvalidArgument("SolutionSlice: value count does not match grid size");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw InvalidArgument("SolutionSlice: non-finite value");
  }
}

FourierGrid default_grid(double sigma, double tau, double eps) {
  const double scale = std::max(sigma * std::sqrt(tau), std::abs(eps));
  return FourierGrid::with_length(4096, 1.5 * 20.0 * scale);
}

std::complex<double> kernel_symbol(const NonlocalityFunction& h, double sigma, double tau,
                                   double p) {
  return std::exp(-0.5 * sigma * sigma * p * p * tau * char_fn(h, p));
}

KernelSample build_kernel(const NonlocalityFunction& h, double sigma, double tau,
                          const FourierGrid& grid) {
  if (!(sigma > 0.0) || !(tau > 0.0)) throw InvalidArgument("build_kernel: sigma, tau must be > 0");
  if (!h.has_char_fn()) {
    throw CharacteristicFunctionUnavailable("build_kernel: characteristic function unavailable for '" +
                                            h.kind_name() + "'");
  }
  const int n = grid.size();
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::complex<double> s = kernel_symbol(h, sigma, tau, grid.frequency(k));
    // The Nyquist bin stands for +p and -p at once; keep its Hermitian part.
    if (k == n / 2) s = s.real();
    c[static_cast<std::size_t>(k)] = (k % 2 == 0 ? s : -s) / grid.length();
  }
  dft(c, -1);

  double peak = 0.0;
  double imag_peak = 0.0;
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto& v = c[static_cast<std::size_t>(j)];
    values[static_cast<std::size_t>(j)] = v.real();
    peak = std::max(peak, std::abs(v.real()));
    imag_peak = std::max(imag_peak, std::abs(v.imag()));
  }
  const double residue = peak > 0.0 ? imag_peak / peak : 0.0;
  if (residue > kKernelImagResidue) {
    throw DomainError("build_kernel: imaginary residue " + io::format_double(residue) +
                      " exceeds tolerance");
  }
  double mass = 0.0;
  for (double v : values) mass += v * grid.dx();
  for (double& v : values) v /= mass;
  peak /= std::abs(mass);

  const double edge = std::max(std::abs(values.front()), std::abs(values.back()));
  if (edge > kKernelTailThreshold * peak) {
    std::string msg = "kernel boundary mass: outermost cells reach " +
                      io::format_double(edge / peak) +
                      " of peak; enlarge the domain L";
    if (std::holds_alternative<kind::Triangular>(h.kind())) {
      msg += " (triangular H gives a lattice kernel with spacing eps; use dx dividing eps)";
    }
    throw BoundaryMassError(msg);
  }
  return KernelSample{grid, std::move(values), sigma, tau, h, residue};
}

QuadratureMoment kernel_moment_with_diagnostics(const KernelSample& kernel, int k) {
  if (k < 0) throw InvalidArgument("kernel_moment: k must be >= 0");
  if (k == 0) return {1.0, 0.0};
  const auto& g = kernel.grid;
  double total = 0.0;
  double total_abs = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double term = std::pow(g.x(j), k) * kernel.values[static_cast<std::size_t>(j)] * g.dx();
    total += term;
    total_abs += std::abs(term);
  }
  const double edge = (std::abs(std::pow(g.x(0), k) * kernel.values.front()) +
                       std::abs(std::pow(g.x(g.size() - 1), k) * kernel.values.back())) *
                      g.dx();
  return {total, total_abs > 0.0 ? edge / total_abs : 0.0};
}

double kernel_moment(const KernelSample& kernel, int k) {
  const auto m = kernel_moment_with_diagnostics(kernel, k);
  if (m.boundary_warning()) {
    std::cerr << "warning: kernel moment " << k << " has boundary contribution "
              << io::format_double(m.boundary_fraction) << " of the total\n";
  }
  return m.value;
}

double negative_mass(const KernelSample& kernel) {
  double neg = 0.0;
  for (double v : kernel.values) neg += std::max(-v, 0.0);
  return neg * kernel.grid.dx();
}

SolutionSlice propagate(const SolutionSlice& u0, const KernelSample& kernel) {
  if (!(u0.grid() == kernel.grid)) throw GridMismatch("propagate: kernel and data grids differ");
  const int n = u0.grid().size();
  const int shift = u0.grid().origin_index();
  std::vector<std::complex<double>> kc(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> uc(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    // kernel re-indexed so that slot 0 holds x = 0
    kc[static_cast<std::size_t>(j)] = kernel.values[static_cast<std::size_t>((j + shift) % n)];
    uc[static_cast<std::size_t>(j)] = u0.values()[static_cast<std::size_t>(j)];
  }
  dft(kc, -1);
  dft(uc, -1);
  const double scale = u0.grid().dx() / n;
  for (int k = 0; k < n; ++k) uc[static_cast<std::size_t>(k)] *= kc[static_cast<std::size_t>(k)] * scale;
  dft(uc, +1);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = uc[static_cast<std::size_t>(j)].real();
  return SolutionSlice(u0.grid(), std::move(out), u0.tau() + kernel.tau);
}

SolutionSlice propagate(const SolutionSlice& u0, const NonlocalityFunction& h, double sigma,
                        double tau) {
  return propagate(u0, build_kernel(h, sigma, tau, u0.grid()));
}

nlohmann::json nonlocality_json(const NonlocalityFunction& h) {
  nlohmann::json j = {{"kind", h.kind_name()}};
  const double eps = h.length_scale();
  j["eps"] = std::isnan(eps) ? nlohmann::json(nullptr) : nlohmann::json(eps);
  return j;
}

nlohmann::json kernel_sidecar_json(const KernelSample& kernel) {
  return {{"sigma", kernel.sigma},
          {"tau", kernel.tau},
          {"H", nonlocality_json(kernel.nonlocality)},
          {"n", kernel.grid.size()},
          {"L", kernel.grid.length()}};
}

SolutionSlice load_solution_csv(const std::filesystem::path& path) {
  const auto rows = io::read_numeric_csv(path, 2);
  const int n = static_cast<int>(rows.size());
  if (!is_power_of_two(n) || n < 2) {
    throw InvalidArgument(path.string() + ": row count must be a power of two, got " +
                          std::to_string(n));
  }
  const double dx = (rows.back()[0] - rows.front()[0]) / (n - 1);
  const FourierGrid grid(n, dx);
  const double tol = 1e-9 * grid.length();
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (std::abs(rows[static_cast<std::size_t>(j)][0] - grid.x(j)) > tol) {
      throw InvalidArgument(path.string() + ": x column must be the uniform grid -L/2 + j dx");
    }
    values[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j)][1];
  }
  return SolutionSlice(grid, std::move(values));
}

std::string to_csv(const SolutionSlice& u) {
  return io::xy_csv(u.grid().points(), u.values());
}

std::string to_csv(const KernelSample& k) { return io::xy_csv(k.grid.points(), k.values); }

}  // namespace nlqk
