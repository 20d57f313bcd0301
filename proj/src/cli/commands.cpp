#include <nlqk/cli.hpp>

#include "config.hpp"

#include <nlqk/errors.hpp>
#include <nlqk/gauge.hpp>
#include <nlqk/io.hpp>
#include <nlqk/kernel_engine.hpp>
#include <nlqk/kramers_moyal.hpp>
#include <nlqk/moment_calculus.hpp>
#include <nlqk/nc_algebra.hpp>
#include <nlqk/parallel.hpp>
#include <nlqk/qsde_algebra.hpp>
#include <nlqk/rational.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace nlqk {

namespace {

using cli::RunConfig;
namespace fs = std::filesystem;

std::string fmt(double v) { return io::format_double(v); }

fs::path output_or(const RunConfig& cfg, const char* fallback) {
  return cfg.output.empty() ? fs::path(fallback) : fs::path(cfg.output);
}

fs::path with_suffix(const fs::path& path, const std::string& suffix, const std::string& ext) {
  fs::path out = path;
  out.replace_filename(path.stem().string() + suffix + ext);
  return out;
}

double sup_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

int cmd_derive(const RunConfig& cfg, std::ostream& out) {
  const int order = cfg.order.value_or(4);
  if (order < 2) throw InvalidArgument("derive: order N must be >= 2, got " + std::to_string(order));
  const BackwardPDE backward = derive_backward_pde(order);
  const BackwardPDE forward = derive_fokker_planck(order);
  const nlohmann::json doc = {{"backward", to_json(backward)}, {"fokker_planck", to_json(forward)}};
  const fs::path path = output_or(cfg, "pde.json");
  io::write_file_atomic(path, doc.dump(2) + "\n");
  for (int k = 2; k <= order; ++k) {
    out << "k=" << k << "  backward: " << backward.coefficient(k).to_string()
        << "  fokker_planck: " << forward.coefficient(k).to_string() << "\n";
  }
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  const NonlocalityFunction h = cli::make_nonlocality(cfg);
  const FourierGrid grid = cli::resolve_grid(cfg, h);
  const KernelSample kernel = build_kernel(h, cfg.sigma, cfg.tau, grid);
  const fs::path path = output_or(cfg, "kernel.csv");
  io::write_file_atomic(path, to_csv(kernel));
  io::write_file_atomic(with_suffix(path, "", ".json"), kernel_sidecar_json(kernel).dump(2) + "\n");
  double mass = 0.0;
  for (double v : kernel.values) mass += v * grid.dx();
  out << "H=" << h.kind_name() << " sigma=" << fmt(cfg.sigma) << " tau=" << fmt(cfg.tau)
      << " n=" << grid.size() << " L=" << fmt(grid.length()) << "\n";
  out << "mass " << fmt(mass) << "\n";
  for (int k = 1; k <= 4; ++k) out << "mu_" << k << " " << fmt(kernel_moment(kernel, k)) << "\n";
  out << "negative_mass " << fmt(negative_mass(kernel)) << "\n";
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out) {
  const int order = cfg.order.value_or(6);
  if (order < 0) throw InvalidArgument("moments: order must be >= 0");
  const NonlocalityFunction h = cli::make_nonlocality(cfg);
  const auto a = exact_moments(h, std::max(order - 2, 0));
  const Rational s = exact_rational(cfg.sigma) * exact_rational(cfg.sigma) * exact_rational(cfg.tau);
  const auto series = kernel_moments(a, s, order);
  const auto partition = kernel_moments_partition(a, s, order);
  const FourierGrid grid = cli::resolve_grid(cfg, h);
  const KernelSample kernel = build_kernel(h, cfg.sigma, cfg.tau, grid);
  const double var = cfg.sigma * cfg.sigma * cfg.tau;

  std::vector<MomentReportRow> rows;
  for (int n = 0; n <= order; ++n) {
    const auto q = kernel_moment_with_diagnostics(kernel, n);
    const double exact = to_double(series[static_cast<std::size_t>(n)]);
    rows.push_back({n, series[static_cast<std::size_t>(n)], partition[static_cast<std::size_t>(n)], q.value,
                    relative_gap(q.value, exact, std::pow(var, 0.5 * n))});
  }
  nlohmann::json doc = {{"sigma", cfg.sigma},
                        {"tau", cfg.tau},
                        {"H", nonlocality_json(h)},
                        {"n", grid.size()},
                        {"L", grid.length()},
                        {"rows", to_json(rows)}};
  const fs::path path = output_or(cfg, "moments.json");
  io::write_file_atomic(path, doc.dump(2) + "\n");
  out << "n,series,partition,quadrature,rel_gap\n";
  for (const auto& r : rows) {
    out << r.n << "," << fmt(to_double(r.series)) << "," << fmt(to_double(r.partition)) << ","
        << fmt(r.quadrature) << "," << fmt(r.rel_gap) << "\n";
  }
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  if (cfg.payoff.empty()) throw InvalidArgument("solve: --payoff <csv> is required");
  if (cfg.methods.empty()) throw InvalidArgument("solve: at least one --method is required");
  std::vector<cli::SolveMethod> methods;
  for (const auto& m : cfg.methods) methods.push_back(cli::parse_method(m));
  const NonlocalityFunction h = cli::make_nonlocality(cfg);
  const SolutionSlice u0 = load_solution_csv(cfg.payoff);
  double eps = h.length_scale();
  if (!std::isfinite(eps)) eps = 0.0;

  std::vector<SolutionSlice> results;
  for (const auto& m : methods) {
    if (m.spectral) {
      results.push_back(propagate(u0, h, cfg.sigma, cfg.tau));
    } else {
      const auto coeffs = kramers_moyal_coefficients(h, cfg.sigma, m.truncation);
      results.push_back(solve_kramers_moyal(u0, coeffs, cfg.sigma, eps, cfg.tau));
    }
  }
  const fs::path path = output_or(cfg, "solution.csv");
  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(path, to_csv(results.front()));
  for (std::size_t i = 1; i < results.size(); ++i) {
    files.emplace_back(with_suffix(path, methods[i].suffix, path.extension().string()), to_csv(results[i]));
  }
  for (const auto& [p, body] : files) io::write_file_atomic(p, body);
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << cfg.methods[i] << " -> " << files[i].first.string() << "\n";
    if (i > 0) {
      out << "sup_disagreement(" << cfg.methods[0] << ", " << cfg.methods[i] << ") "
          << fmt(sup_norm_diff(results[0].values(), results[i].values())) << "\n";
    }
  }
  return kExitOk;
}

struct AlgebraTolerances {
  double associativity = 1e-8;
  double representation = 1e-8;
  double identity_norm = 1e-6;
  // Composition on the grid is associative up to rounding, so once the
  // defect is at that floor a further halving cannot be demanded.
  double roundoff_floor = 1e-12;
};

int cmd_algebra_check(const RunConfig& cfg, std::ostream& out) {
  const AlgebraTolerances tol;
  const int n = cfg.n.value_or(cli::kDefaultAlgebraGridPoints);
  if (n > cli::kMaxAlgebraGridPoints) {
    throw InvalidArgument("algebra-check: n must be <= " + std::to_string(cli::kMaxAlgebraGridPoints) +
                          " (dense kernel fields)");
  }
  const bool standard = cfg.fixture == "standard";
  AlgebraFixtures fx = [&] {
    if (standard) return standard_fixtures(n);
    std::vector<std::string> paths;
    std::stringstream ss(cfg.fixture);
    for (std::string p; std::getline(ss, p, ',');) paths.push_back(p);
    if (paths.size() != 3) throw InvalidArgument("fixture must be 'standard' or three comma-separated JSON paths");
    return AlgebraFixtures{load_operator_json(paths[0]), load_operator_json(paths[1]), load_operator_json(paths[2])};
  }();
  const int jobs = cfg.jobs;
  const auto& [A, B, C] = fx;
  const NonlocalOperator I = NonlocalOperator::identity(A.grid());

  const double scale = std::max({sup_scale(A), sup_scale(B), sup_scale(C)});
  const double unit_left = std::max({sup_distance(compose(I, A, jobs), A), sup_distance(compose(I, B, jobs), B),
                                     sup_distance(compose(I, C, jobs), C)});
  const double unit_right = std::max({sup_distance(compose(A, I, jobs), A), sup_distance(compose(B, I, jobs), B),
                                      sup_distance(compose(C, I, jobs), C)});
  const NonlocalOperator ab = compose(A, B, jobs);
  const NonlocalOperator ba = compose(B, A, jobs);
  const double assoc = sup_distance(compose(A, compose(B, C, jobs), jobs), compose(ab, C, jobs));
  const double commutator = sup_distance(ab, ba);

  nlohmann::json refinement = nullptr;
  bool refinement_ok = true;
  if (standard) {
    const AlgebraFixtures coarse = standard_fixtures(n / 2);
    const double assoc_coarse = sup_distance(compose(coarse.a, compose(coarse.b, coarse.c, jobs), jobs),
                                             compose(compose(coarse.a, coarse.b, jobs), coarse.c, jobs));
    const bool at_floor = assoc <= tol.roundoff_floor * scale;
    refinement_ok = at_floor || assoc * 2.0 <= assoc_coarse;
    refinement = {{"n_coarse", n / 2}, {"defect_coarse", assoc_coarse}, {"defect_fine", assoc},
                  {"at_roundoff_floor", at_floor}, {"ok", refinement_ok}};
  }

  const StateVector psi = fixture_state(A.grid());
  double representation = 0.0;
  for (const auto& [x, y] : {std::pair{&A, &B}, std::pair{&B, &C}, std::pair{&A, &C}}) {
    representation = std::max(representation,
                              sup_distance(apply(compose(*x, *y, jobs), psi), apply(*x, apply(*y, psi))));
  }
  const bool involutive = involution(involution(A)) == A && involution(involution(B)) == B &&
                          involution(involution(C)) == C;
  const double identity_norm = operator_norm_estimate(I, cfg.trials, cfg.seed);
  const double norm_a = operator_norm_estimate(A, cfg.trials, cfg.seed);

  const bool units_ok = unit_left == 0.0 && unit_right == 0.0;
  const bool assoc_ok = assoc <= tol.associativity;
  const bool noncomm_ok = commutator >= 10.0 * tol.associativity;
  const bool repr_ok = representation <= tol.representation;
  const bool norm_ok = std::abs(identity_norm - 1.0) <= tol.identity_norm;
  const bool pass = units_ok && assoc_ok && refinement_ok && noncomm_ok && repr_ok && involutive && norm_ok;

  const nlohmann::json doc = {
      {"n", n},
      {"L", A.grid().length()},
      {"fixture", cfg.fixture},
      {"kernel_scale", scale},
      {"unit_left_defect", unit_left},
      {"unit_right_defect", unit_right},
      {"associativity_defect", assoc},
      {"associativity_tolerance", tol.associativity},
      {"refinement", refinement},
      {"commutator_norm", commutator},
      {"representation_defect", representation},
      {"involution_exact", involutive},
      {"norm_estimate", {{"trials", cfg.trials}, {"seed", cfg.seed}, {"identity", identity_norm}, {"A", norm_a}}},
      {"pass", pass}};
  const fs::path path = output_or(cfg, "algebra.json");
  io::write_file_atomic(path, doc.dump(2) + "\n");
  out << "unit laws " << (units_ok ? "exact" : "VIOLATED") << "\n"
      << "associativity defect " << fmt(assoc) << (assoc_ok ? "" : " (above tolerance)") << "\n"
      << "commutator norm " << fmt(commutator) << "\n"
      << "representation defect " << fmt(representation) << "\n"
      << "identity norm " << fmt(identity_norm) << ", ||A|| >= " << fmt(norm_a) << "\n"
      << (pass ? "all algebra checks passed" : "algebra checks FAILED") << "\n"
      << "wrote " << path.string() << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

GaugePotential potential_from(const std::string& name) {
  for (auto& v : standard_potentials()) {
    if (v.label() == name) return v;
  }
  if (fs::exists(name)) return GaugePotential::from_csv(name);
  throw InvalidArgument("v must be one of sin, half_cos2, affine or an existing CSV path, got '" + name + "'");
}

int cmd_gauge(const RunConfig& cfg, std::ostream& out) {
  if (cfg.eps_list.empty()) throw InvalidArgument("gauge: eps-list is empty");
  const GaugePotential v = potential_from(cfg.potential);
  const PhaseGrid grid;
  std::vector<double> violation(cfg.eps_list.size());
  parallel_for(static_cast<int>(cfg.eps_list.size()), cfg.jobs, [&](int i) {
    const GaugeConfig g(cfg.sigma, cfg.eps_list[static_cast<std::size_t>(i)], v);
    violation[static_cast<std::size_t>(i)] = translation_violation(g, grid);
  });
  std::string csv = "eps,sup_violation\n";
  nlohmann::json reports = nlohmann::json::array();
  for (std::size_t i = 0; i < violation.size(); ++i) {
    csv += fmt(cfg.eps_list[i]) + "," + fmt(violation[i]) + "\n";
    reports.push_back(violation_report(cfg.eps_list[i], violation[i], grid));
  }
  const fs::path path = output_or(cfg, "gauge.csv");
  io::write_file_atomic(path, csv);
  const nlohmann::json doc = {{"sigma", cfg.sigma}, {"v", v.label()}, {"reports", reports}};
  io::write_file_atomic(with_suffix(path, "", ".json"), doc.dump(2) + "\n");
  out << csv << "wrote " << path.string() << "\n";
  return kExitOk;
}

int dispatch(const std::string& name, const RunConfig& cfg, std::ostream& out) {
  if (name == "derive") return cmd_derive(cfg, out);
  if (name == "kernel") return cmd_kernel(cfg, out);
  if (name == "moments") return cmd_moments(cfg, out);
  if (name == "solve") return cmd_solve(cfg, out);
  if (name == "algebra-check") return cmd_algebra_check(cfg, out);
  if (name == "gauge") return cmd_gauge(cfg, out);
  throw InvalidArgument("unknown command " + name);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Nonlocal quantum kernel toolkit", "nlqk"};
  app.set_config("--config", "", "Flat key=value file; flags override its values");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  app.add_option("--sigma", cfg.sigma, "Volatility sigma")->capture_default_str();
  app.add_option("--tau", cfg.tau, "Elapsed time tau")->capture_default_str();
  app.add_option("--eps", cfg.eps, "Nonlocality length scale eps")->capture_default_str();
  app.add_option("--H", cfg.h, "dirac | gaussian | triangular | tabulated:<csv>")->capture_default_str();
  app.add_option("--n", cfg.n, "Grid points (power of two)");
  app.add_option("--L", cfg.length, "Domain length");
  app.add_option("--order", cfg.order, "Truncation / moment order N");
  app.add_option("--output", cfg.output, "Output path");
  app.add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for randomized norm estimates")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Norm-estimate trials")->capture_default_str();
  app.add_option("--payoff", cfg.payoff, "Terminal condition CSV (x,value)");
  app.add_option("--method", cfg.methods, "spectral | kramers_moyal:N (repeatable)")->delimiter(',');
  app.add_option("--eps-list", cfg.eps_list, "Comma-separated eps values")->delimiter(',');
  app.add_option("--v", cfg.potential, "Gauge potential: sin | half_cos2 | affine | <csv>")->capture_default_str();
  app.add_option("--fixture", cfg.fixture, "standard | a.json,b.json,c.json")->capture_default_str();

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"derive", "Derive the backward and Fokker-Planck PDE coefficients"},
      {"kernel", "Build the propagation kernel and write it as CSV + JSON"},
      {"moments", "Reconcile kernel moments: series, partition, quadrature"},
      {"solve", "Propagate a terminal condition (spectral and/or Kramers-Moyal)"},
      {"algebra-check", "Verify unit, associativity and representation laws"},
      {"gauge", "Tabulate the gauge translation violation against eps"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    cli::validate(cfg);
    return dispatch(app.get_subcommands().front()->get_name(), cfg, out);
  } catch (const GridMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const MomentsUnavailable& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const CharacteristicFunctionUnavailable& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const BoundaryMassError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericalInstability& e) {
    err << "error: " << e.what() << "\n";
    return kExitInstability;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace nlqk
