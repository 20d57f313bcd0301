#include <nlqk/nc_algebra.hpp>

#include <nlqk/errors.hpp>
#include <nlqk/io.hpp>
#include <nlqk/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace nlqk {

namespace {

std::size_t idx(int row, int col, int n) {
  return static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col);
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

constexpr double kRowTruncation = 1e-30;

void require_same_grid(const FourierGrid& a, const FourierGrid& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": grids differ");
}

bool all_finite(const std::vector<cplx>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

StateVector::StateVector(FourierGrid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw InvalidArgument("StateVector: value count does not match grid size");
  }
  if (!all_finite(values_)) throw InvalidArgument("StateVector: non-finite entry");
}

StateVector StateVector::from_function(const FourierGrid& grid,
                                       const std::function<cplx(double)>& f) {
  std::vector<cplx> v(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) v[static_cast<std::size_t>(i)] = f(grid.x(i));
  return StateVector(grid, std::move(v));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& z : values_) s += std::norm(z);
  return std::sqrt(s * grid_.dx());
}

NonlocalOperator::NonlocalOperator(FourierGrid grid, std::vector<cplx> symbol,
                                   std::vector<cplx> kernel)
    : grid_(grid), symbol_(std::move(symbol)), kernel_(std::move(kernel)) {
  const auto n = static_cast<std::size_t>(grid_.size());
  if (symbol_.size() != n || kernel_.size() != n * n) {
    throw InvalidArgument("NonlocalOperator: symbol must have n entries and kernel n*n");
  }
  if (!all_finite(symbol_) || !all_finite(kernel_)) {
    throw InvalidArgument("NonlocalOperator: non-finite entry");
  }
}

NonlocalOperator NonlocalOperator::identity(const FourierGrid& grid) {
  return multiplication(grid, [](double) { return cplx(1.0); });
}

NonlocalOperator NonlocalOperator::multiplication(const FourierGrid& grid,
                                                  const std::function<cplx(double)>& a) {
  return from_nonlocality(grid, a, [](double) { return NonlocalityFunction::dirac(); });
}

NonlocalOperator NonlocalOperator::from_nonlocality(
    const FourierGrid& grid, const std::function<cplx(double)>& a,
    const std::function<NonlocalityFunction(double)>& kernel_at) {
  const int n = grid.size();
  std::vector<cplx> symbol(static_cast<std::size_t>(n));
  std::vector<cplx> kernel(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    symbol[static_cast<std::size_t>(i)] = a(x);
    const NonlocalityFunction h = kernel_at(x);
    if (std::holds_alternative<kind::Dirac>(h.kind())) {
      kernel[idx(i, 0, n)] = 1.0 / grid.dx();
      continue;
    }
    if (!h.has_density()) {
      throw InvalidArgument("NonlocalOperator: kernel kind '" + h.kind_name() + "' has no density");
    }
    double peak = 0.0;
    for (int c = 0; c < n; ++c) {
      const double z = c < n / 2 ? c * grid.dx() : (c - n) * grid.dx();
      const double d = h.density(z);
      kernel[idx(i, c, n)] = d;
      peak = std::max(peak, d);
    }
    // Far-tail samples only feed denormals into later products.
    double mass = 0.0;
    for (int c = 0; c < n; ++c) {
      auto& entry = kernel[idx(i, c, n)];
      if (entry.real() < kRowTruncation * peak) entry = 0.0;
      mass += entry.real() * grid.dx();
    }
    if (!(mass > 0.0)) {
      throw DomainError("NonlocalOperator: kernel row at x = " + io::format_double(x) +
                        " is not resolved by the grid");
    }
    for (int c = 0; c < n; ++c) kernel[idx(i, c, n)] /= mass;
  }
  return NonlocalOperator(grid, std::move(symbol), std::move(kernel));
}

double NonlocalOperator::displacement(int col) const {
  const int n = size();
  return (col < n / 2 ? col : col - n) * grid_.dx();
}

cplx NonlocalOperator::row_mass(int row) const {
  cplx s = 0.0;
  for (int c = 0; c < size(); ++c) s += kernel(row, c);
  return s * grid_.dx();
}

StateVector apply(const NonlocalOperator& a, const StateVector& psi) {
  require_same_grid(a.grid(), psi.grid(), "apply");
  const int n = a.size();
  const double dx = a.grid().dx();
  const auto& v = psi.values();
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const cplx* h = a.kernel().data() + idx(i, 0, n);
    cplx acc = 0.0;
    for (int c = 0; c <= i; ++c) acc += v[static_cast<std::size_t>(i - c)] * h[c];
    for (int c = i + 1; c < n; ++c) acc += v[static_cast<std::size_t>(i - c + n)] * h[c];
    out[static_cast<std::size_t>(i)] = a.symbol()[static_cast<std::size_t>(i)] * acc * dx;
  }
  return StateVector(psi.grid(), std::move(out));
}

StateVector apply_adjoint(const NonlocalOperator& a, const StateVector& psi) {
  require_same_grid(a.grid(), psi.grid(), "apply_adjoint");
  const int n = a.size();
  const double dx = a.grid().dx();
  const auto& v = psi.values();
  std::vector<cplx> out(static_cast<std::size_t>(n));
  // Matrix entry M[i][j] = a_i H[i][i - j] dx; the adjoint sums conj(M[i][j]) over i.
  for (int i = 0; i < n; ++i) {
    const cplx w = std::conj(a.symbol()[static_cast<std::size_t>(i)]) * v[static_cast<std::size_t>(i)] * dx;
    const cplx* h = a.kernel().data() + idx(i, 0, n);
    for (int c = 0; c <= i; ++c) out[static_cast<std::size_t>(i - c)] += std::conj(h[c]) * w;
    for (int c = i + 1; c < n; ++c) out[static_cast<std::size_t>(i - c + n)] += std::conj(h[c]) * w;
  }
  return StateVector(psi.grid(), std::move(out));
}

NonlocalOperator compose(const NonlocalOperator& a, const NonlocalOperator& b, int jobs) {
  require_same_grid(a.grid(), b.grid(), "compose");
  const int n = a.size();
  const double dx = a.grid().dx();
  std::vector<cplx> kernel(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  parallel_for(n, jobs, [&](int i) {
    cplx* row = kernel.data() + idx(i, 0, n);
    for (int k = 0; k < n; ++k) {
      const cplx ha = a.kernel(i, k);
      if (ha == 0.0) continue;
      const int src = wrap(i - k, n);
      const cplx w = ha * b.symbol()[static_cast<std::size_t>(src)] * dx;
      const cplx* hb = b.kernel().data() + idx(src, 0, n);
      for (int m = k; m < n; ++m) row[m] += w * hb[m - k];
      for (int m = 0; m < k; ++m) row[m] += w * hb[m - k + n];
    }
  });
  return NonlocalOperator(a.grid(), a.symbol(), std::move(kernel));
}

NonlocalOperator involution(const NonlocalOperator& a) {
  std::vector<cplx> symbol = a.symbol();
  for (auto& s : symbol) s = std::conj(s);
  return NonlocalOperator(a.grid(), std::move(symbol), a.kernel());
}

double operator_norm_estimate(const NonlocalOperator& a, int trials, std::uint64_t seed,
                              int iterations) {
  if (trials < 1) throw InvalidArgument("operator_norm_estimate: trials must be >= 1");
  const int n = a.size();
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5; };
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (auto& z : v) z = cplx(uniform(), uniform());
    StateVector psi(a.grid(), std::move(v));
    for (int it = 0; it <= iterations; ++it) {
      const double nrm = psi.norm();
      if (nrm == 0.0) break;
      const StateVector image = apply(a, psi);
      best = std::max(best, image.norm() / nrm);
      if (it == iterations) break;
      StateVector next = apply_adjoint(a, image);
      const double next_norm = next.norm();
      if (next_norm == 0.0) break;
      std::vector<cplx> scaled = next.values();
      for (auto& z : scaled) z /= next_norm;
      psi = StateVector(a.grid(), std::move(scaled));
    }
  }
  return best;
}

double sup_distance(const NonlocalOperator& a, const NonlocalOperator& b) {
  require_same_grid(a.grid(), b.grid(), "sup_distance");
  const int n = a.size();
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx sa = a.symbol()[static_cast<std::size_t>(i)];
    const cplx sb = b.symbol()[static_cast<std::size_t>(i)];
    for (int c = 0; c < n; ++c) d = std::max(d, std::abs(sa * a.kernel(i, c) - sb * b.kernel(i, c)));
  }
  return d;
}

double sup_scale(const NonlocalOperator& a) {
  const int n = a.size();
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < n; ++c) d = std::max(d, std::abs(a.symbol()[static_cast<std::size_t>(i)] * a.kernel(i, c)));
  }
  return d;
}

double sup_distance(const StateVector& a, const StateVector& b) {
  require_same_grid(a.grid(), b.grid(), "sup_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

AlgebraFixtures standard_fixtures(int n) {
  const FourierGrid grid = FourierGrid::with_length(n, kFixtureLength);
  const double k = 2.0 * std::numbers::pi / kFixtureLength;
  const cplx i(0.0, 1.0);
  auto a = NonlocalOperator::from_nonlocality(
      grid, [&](double x) { return 1.0 + 0.3 * i * std::sin(k * x); },
      [&](double x) { return NonlocalityFunction::gaussian(0.15 * (1.0 + 0.5 * std::cos(k * x))); });
  auto b = NonlocalOperator::from_nonlocality(
      grid, [&](double x) { return std::exp(0.5 * i * std::cos(k * x)); },
      [&](double x) { return NonlocalityFunction::triangular(0.3 * (1.0 + 0.3 * std::sin(k * x))); });
  auto c = NonlocalOperator::from_nonlocality(
      grid, [&](double x) { return 0.8 + 0.2 * std::cos(2.0 * k * x) + 0.1 * i; },
      [&](double x) { return NonlocalityFunction::gaussian(0.2 + 0.05 * std::sin(2.0 * k * x)); });
  return {std::move(a), std::move(b), std::move(c)};
}

StateVector fixture_state(const FourierGrid& grid) {
  return StateVector::from_function(grid, [](double x) {
    return std::exp(-x * x) * std::polar(1.0, 1.5 * x);
  });
}

namespace {

std::vector<double> eps_list(const nlohmann::json& j, int n) {
  if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(n), j.get<double>());
  auto v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != n) throw InvalidArgument("kernel_kind.eps: need one value per grid point");
  return v;
}

}  // namespace

NonlocalOperator load_operator_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const FourierGrid grid = FourierGrid::with_length(n, j.at("L").get<double>());
    std::vector<cplx> symbol;
    for (const auto& p : j.at("symbol")) symbol.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    if (static_cast<int>(symbol.size()) != n) throw InvalidArgument("symbol: need n entries");
    const auto& kk = j.at("kernel_kind");
    const std::string kind_name = kk.at("kind").get<std::string>();
    auto symbol_at = [&](double x) {
      const int i = static_cast<int>(std::lround((x + 0.5 * grid.length()) / grid.dx()));
      return symbol[static_cast<std::size_t>(i)];
    };
    auto row_index = [&](double x) {
      return static_cast<std::size_t>(std::lround((x + 0.5 * grid.length()) / grid.dx()));
    };
    if (kind_name == "dirac") {
      return NonlocalOperator::from_nonlocality(grid, symbol_at,
                                                [](double) { return NonlocalityFunction::dirac(); });
    }
    if (kind_name == "gaussian" || kind_name == "triangular") {
      const auto eps = eps_list(kk.at("eps"), n);
      const bool gauss = kind_name == "gaussian";
      return NonlocalOperator::from_nonlocality(grid, symbol_at, [&](double x) {
        const double e = eps[row_index(x)];
        return gauss ? NonlocalityFunction::gaussian(e) : NonlocalityFunction::triangular(e);
      });
    }
    if (kind_name == "dense") {
      std::filesystem::path csv = kk.at("csv").get<std::string>();
      if (csv.is_relative()) csv = path.parent_path() / csv;
      const auto rows = io::read_numeric_csv(csv, 2 * static_cast<std::size_t>(n));
      if (static_cast<int>(rows.size()) != n) throw InvalidArgument(csv.string() + ": need n rows");
      std::vector<cplx> kernel;
      kernel.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
      for (const auto& r : rows) {
        for (int c = 0; c < n; ++c) kernel.emplace_back(r[2 * static_cast<std::size_t>(c)], r[2 * static_cast<std::size_t>(c) + 1]);
      }
      return NonlocalOperator(grid, std::move(symbol), std::move(kernel));
    }
    throw InvalidArgument("kernel_kind: unknown kind '" + kind_name + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void save_operator_json(const NonlocalOperator& a, const std::filesystem::path& path) {
  const int n = a.size();
  std::filesystem::path csv = path;
  csv.replace_extension(".kernel.csv");
  std::ostringstream body;
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < n; ++c) {
      if (c > 0) body << ',';
      body << io::format_double(a.kernel(i, c).real()) << ',' << io::format_double(a.kernel(i, c).imag());
    }
    body << '\n';
  }
  nlohmann::json j;
  j["n"] = n;
  j["L"] = a.grid().length();
  j["symbol"] = nlohmann::json::array();
  for (const auto& s : a.symbol()) j["symbol"].push_back({s.real(), s.imag()});
  j["kernel_kind"] = {{"kind", "dense"}, {"csv", csv.filename().string()}};
  io::write_file_atomic(csv, body.str());
  io::write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace nlqk
