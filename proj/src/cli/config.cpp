#include "config.hpp"

#include <nlqk/errors.hpp>
#include <nlqk/kernel_engine.hpp>
#include <nlqk/kramers_moyal.hpp>

#include <charconv>
#include <cmath>

namespace nlqk::cli {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const RunConfig& cfg) {
  require(positive(cfg.sigma), "sigma must be > 0");
  require(positive(cfg.tau), "tau must be > 0");
  require(std::isfinite(cfg.eps) && cfg.eps >= 0.0, "eps must be >= 0");
  if (cfg.n) require(*cfg.n >= 2 && is_power_of_two(*cfg.n), "n must be a power of two >= 2");
  if (cfg.length) require(positive(*cfg.length), "L must be > 0");
  require(cfg.jobs >= 1, "jobs must be >= 1");
  require(cfg.trials >= 1, "trials must be >= 1");
  for (double e : cfg.eps_list) require(std::isfinite(e) && e >= 0.0, "eps-list entries must be >= 0");
  for (const auto& m : cfg.methods) parse_method(m);
}

NonlocalityFunction make_nonlocality(const RunConfig& cfg) {
  if (cfg.h == "dirac") return NonlocalityFunction::dirac();
  if (cfg.h == "gaussian") return NonlocalityFunction::gaussian(cfg.eps);
  if (cfg.h == "triangular") return NonlocalityFunction::triangular(cfg.eps);
  const std::string prefix = "tabulated:";
  if (cfg.h.rfind(prefix, 0) == 0) return load_tabulated_csv(cfg.h.substr(prefix.size()));
  throw InvalidArgument("unknown H '" + cfg.h + "' (dirac, gaussian, triangular, tabulated:<csv>)");
}

FourierGrid resolve_grid(const RunConfig& cfg, const NonlocalityFunction& h) {
  const int n = cfg.n.value_or(kDefaultGridPoints);
  if (cfg.length) return FourierGrid::with_length(n, *cfg.length);
  double scale = h.length_scale();
  if (!std::isfinite(scale)) scale = 0.0;
  const FourierGrid base = default_grid(cfg.sigma, cfg.tau, scale);
  const auto* tri = std::get_if<kind::Triangular>(&h.kind());
  if (tri == nullptr || tri->eps == 0.0) return FourierGrid(n, base.length() / n);
  const double eps = std::abs(tri->eps);
  const double per_cell = std::ceil(eps / (base.length() / n));
  return FourierGrid(n, eps / per_cell);
}

SolveMethod parse_method(const std::string& text) {
  if (text == "spectral") return {true, 0, "_spectral"};
  const std::string prefix = "kramers_moyal:";
  if (text.rfind(prefix, 0) == 0) {
    int order = 0;
    const char* first = text.data() + prefix.size();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, order);
    if (ec == std::errc() && ptr == last && order >= 2 && order <= kMaxKramersMoyalOrder) {
      return {false, order, "_km" + std::to_string(order)};
    }
  }
  throw InvalidArgument("method must be 'spectral' or 'kramers_moyal:N' with 2 <= N <= 8, got '" +
                        text + "'");
}

}  // namespace nlqk::cli
