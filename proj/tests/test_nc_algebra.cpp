#include <nlqk/errors.hpp>
#include <nlqk/nc_algebra.hpp>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

using namespace nlqk;

namespace {

FourierGrid small_grid(int n = 64) { return FourierGrid::with_length(n, kFixtureLength); }

// Matrix of psi -> A psi: M[i][j] = a_i H(x_i - x_j; x_i) dx with periodic z.
Eigen::MatrixXcd dense_matrix(const NonlocalOperator& a) {
  const int n = a.size();
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = a.symbol()[i] * a.kernel(i, ((i - j) % n + n) % n) * a.grid().dx();
  }
  return m;
}

Eigen::VectorXcd as_vector(const StateVector& s) {
  return Eigen::Map<const Eigen::VectorXcd>(s.values().data(), static_cast<Eigen::Index>(s.values().size()));
}

}  // namespace

TEST(NcAlgebra, MultiplicationOperatorActsPointwise) {
  const auto g = small_grid();
  const auto x_op = NonlocalOperator::multiplication(g, [](double x) { return cplx(x); });
  const auto psi = fixture_state(g);
  const auto out = apply(x_op, psi);
  for (int i = 0; i < g.size(); ++i) EXPECT_EQ(out.values()[i], g.x(i) * psi.values()[i]);
}

TEST(NcAlgebra, NormalizedRowsPreserveConstants) {
  const auto g = small_grid(128);
  const auto op = NonlocalOperator::from_nonlocality(
      g, [](double) { return cplx(1.0); },
      [](double x) { return NonlocalityFunction::gaussian(0.2 + 0.05 * std::sin(x)); });
  for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(op.row_mass(i) - 1.0), 0.0, 1e-12);
  const auto c = StateVector::from_function(g, [](double) { return cplx(2.5, -1.0); });
  EXPECT_LT(sup_distance(apply(op, c), c), 1e-12);
}

TEST(NcAlgebra, SpikeIsSmearedToKernelWidth) {
  const auto g = small_grid(256);
  const double eps = 0.2;
  const auto op = NonlocalOperator::from_nonlocality(g, [](double) { return cplx(1.0); },
                                                    [&](double) { return NonlocalityFunction::gaussian(eps); });
  std::vector<cplx> spike(256, 0.0);
  spike[static_cast<std::size_t>(g.origin_index())] = 1.0 / g.dx();
  const auto out = apply(op, StateVector(g, spike));
  double mass = 0.0, second = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    mass += out.values()[i].real() * g.dx();
    second += g.x(i) * g.x(i) * out.values()[i].real() * g.dx();
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_NEAR(second, eps * eps, 1e-10);
}

TEST(NcAlgebra, UnitLawsAreExact) {
  const auto fx = standard_fixtures(64);
  const auto id = NonlocalOperator::identity(fx.a.grid());
  for (const auto* op : {&fx.a, &fx.b, &fx.c}) {
    EXPECT_EQ(sup_distance(compose(id, *op), *op), 0.0);
    EXPECT_EQ(sup_distance(compose(*op, id), *op), 0.0);
  }
}

TEST(NcAlgebra, CommutativeSubcaseSquaresSymbol) {
  const auto g = small_grid();
  const auto x_op = NonlocalOperator::multiplication(g, [](double x) { return cplx(x); });
  const auto sq = compose(x_op, x_op);
  const auto psi = fixture_state(g);
  const auto out = apply(sq, psi);
  for (int i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(std::abs(out.values()[i] - g.x(i) * g.x(i) * psi.values()[i]), 0.0, 1e-13);
  }
}

TEST(NcAlgebra, CompositionMatchesDenseMatrixProduct) {
  const auto fx = standard_fixtures(64);
  const Eigen::MatrixXcd product = dense_matrix(fx.a) * dense_matrix(fx.b);
  const auto ab = compose(fx.a, fx.b);
  EXPECT_LT((dense_matrix(ab) - product).cwiseAbs().maxCoeff(), 1e-13);
  const auto psi = fixture_state(fx.a.grid());
  EXPECT_LT((as_vector(apply(ab, psi)) - product * as_vector(psi)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(NcAlgebra, AdjointMatchesConjugateTranspose) {
  const auto fx = standard_fixtures(32);
  const auto psi = fixture_state(fx.b.grid());
  const Eigen::VectorXcd expected = dense_matrix(fx.b).adjoint() * as_vector(psi);
  EXPECT_LT((as_vector(apply_adjoint(fx.b, psi)) - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(NcAlgebra, AssociativityRepresentationAndNoncommutativity) {
  const auto fx = standard_fixtures(128);
  const double assoc = sup_distance(compose(fx.a, compose(fx.b, fx.c)), compose(compose(fx.a, fx.b), fx.c));
  EXPECT_LT(assoc, 1e-8);
  const auto psi = fixture_state(fx.a.grid());
  EXPECT_LT(sup_distance(apply(compose(fx.a, fx.b), psi), apply(fx.a, apply(fx.b, psi))), 1e-8);
  EXPECT_GT(sup_distance(compose(fx.a, fx.b), compose(fx.b, fx.a)), 1e-7);
}

TEST(NcAlgebra, XIndependentKernelsConvolve) {
  const auto g = small_grid(256);
  const double eps = 0.2;
  auto gauss = [&](double e) {
    return NonlocalOperator::from_nonlocality(g, [](double) { return cplx(1.0); },
                                              [e](double) { return NonlocalityFunction::gaussian(e); });
  };
  const auto twice = compose(gauss(eps), gauss(eps));
  const auto reference = gauss(self_convolve(NonlocalityFunction::gaussian(eps)).length_scale());
  EXPECT_LT(sup_distance(twice, reference), 1e-9 * sup_scale(reference));
}

TEST(NcAlgebra, Involution) {
  const auto g = small_grid(32);
  const auto i_op = NonlocalOperator::multiplication(g, [](double) { return cplx(0.0, 1.0); });
  EXPECT_EQ(involution(i_op).symbol()[0], cplx(0.0, -1.0));
  const auto real_op = NonlocalOperator::multiplication(g, [](double x) { return cplx(x); });
  EXPECT_EQ(involution(real_op), real_op);
  const auto fx = standard_fixtures(32);
  EXPECT_EQ(involution(involution(fx.a)), fx.a);
  EXPECT_EQ(involution(fx.b).kernel(), fx.b.kernel());
}

TEST(NcAlgebra, NormEstimates) {
  const auto g = small_grid(64);
  EXPECT_NEAR(operator_norm_estimate(NonlocalOperator::identity(g), 2), 1.0, 1e-6);
  const auto scalar = NonlocalOperator::multiplication(g, [](double) { return cplx(-1.5, 2.0); });
  EXPECT_NEAR(operator_norm_estimate(scalar, 1), 2.5, 1e-12);
  const auto x_op = NonlocalOperator::multiplication(g, [](double x) { return cplx(x); });
  EXPECT_NEAR(operator_norm_estimate(x_op, 3, 11), 0.5 * g.length(), 1e-3 * g.length());
  const auto fx = standard_fixtures(64);
  double last = 0.0;
  for (int trials = 1; trials <= 4; ++trials) {
    const double est = operator_norm_estimate(fx.b, trials, 5, 20);
    EXPECT_GE(est, last);
    last = est;
  }
  EXPECT_EQ(operator_norm_estimate(fx.b, 3, 5, 20), operator_norm_estimate(fx.b, 3, 5, 20));
  EXPECT_THROW(operator_norm_estimate(fx.b, 0), InvalidArgument);
}

TEST(NcAlgebra, ValidationAndMismatch) {
  const auto g = small_grid(32);
  EXPECT_THROW(NonlocalOperator(g, std::vector<cplx>(31), std::vector<cplx>(32 * 32)), InvalidArgument);
  EXPECT_THROW(NonlocalOperator::from_nonlocality(
                   g, [](double) { return cplx(1.0); },
                   [](double) { return NonlocalityFunction::moment_only(MomentSequence()); }),
               InvalidArgument);
  const auto other = NonlocalOperator::identity(small_grid(64));
  EXPECT_THROW(compose(NonlocalOperator::identity(g), other), GridMismatch);
  EXPECT_THROW(apply(other, fixture_state(g)), GridMismatch);
}

TEST(NcAlgebra, JsonRoundTrip) {
  const char* base = std::getenv("NLQK_TEST_TMP");
  std::filesystem::path dir = base ? base : std::filesystem::temp_directory_path() / "nlqk_tests";
  std::filesystem::create_directories(dir);
  const auto fx = standard_fixtures(32);
  save_operator_json(fx.b, dir / "op_b.json");
  EXPECT_EQ(load_operator_json(dir / "op_b.json"), fx.b);

  nlohmann::json spec = {{"n", 32}, {"L", kFixtureLength}, {"kernel_kind", {{"kind", "gaussian"}, {"eps", 0.3}}}};
  spec["symbol"] = nlohmann::json::array();
  for (int i = 0; i < 32; ++i) spec["symbol"].push_back({1.0, 0.0});
  std::ofstream(dir / "op_g.json") << spec.dump();
  const auto loaded = load_operator_json(dir / "op_g.json");
  const auto expected = NonlocalOperator::from_nonlocality(
      small_grid(32), [](double) { return cplx(1.0); }, [](double) { return NonlocalityFunction::gaussian(0.3); });
  EXPECT_EQ(loaded, expected);
  std::ofstream(dir / "op_bad.json") << R"({"n": 32, "L": 8, "symbol": [], "kernel_kind": {"kind": "x"}})";
  EXPECT_THROW(load_operator_json(dir / "op_bad.json"), InvalidArgument);
}
