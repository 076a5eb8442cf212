#include <doctest.h>

#include <cmath>

#include "igeo/eguchi.hpp"
#include "igeo/errors.hpp"
#include "igeo/tensors.hpp"

#include "test_helpers.hpp"

using namespace igeo;
using igeo::testing::bernoulli_c;
using igeo::testing::bernoulli_e_gamma;
using igeo::testing::bernoulli_fisher;
using igeo::testing::v1;
using igeo::testing::v2;

TEST_CASE("induced metric matches conformal Fisher oracles") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector p = v1(0.3);

    // Oracle: rho * Fisher by the exact two-term sum.
    const double g_half = eguchi::induced_metric(DivergenceSpec::renyi(0.5), bern, p).g(0, 0);
    CHECK(g_half == doctest::Approx(0.5 * bernoulli_fisher(0.3)).epsilon(1e-5));
    CHECK(g_half == doctest::Approx(2.380952).epsilon(1e-5));

    const double g_b = eguchi::induced_metric(DivergenceSpec::bhattacharyya(), bern, p).g(0, 0);
    CHECK(g_b == doctest::Approx(0.5 * bernoulli_fisher(0.3)).epsilon(1e-5));

    const ModelFamily gauss = builtin("gaussian-loc");
    for (double mu : {-0.8, 0.0, 1.2}) {
        CHECK(eguchi::induced_metric(DivergenceSpec::kl(), gauss, v1(mu)).g(0, 0) ==
              doctest::Approx(1.0).epsilon(1e-6));
    }

    const double g_four = eguchi::induced_metric(DivergenceSpec::kl(), bern, v1(0.5)).g(0, 0);
    CHECK(g_four == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("induced metric on a 2-D family") {
    const ModelFamily cat = builtin("categorical-3");
    const Vector th = v2(0.25, 0.35);
    const Matrix g = eguchi::induced_metric(DivergenceSpec::kl(), cat, th).g;
    // Oracle: simplex Fisher diag(1/p_i) + 1/p_k.
    const double pk = 1.0 - 0.25 - 0.35;
    Matrix expected(2, 2);
    expected << 1.0 / 0.25 + 1.0 / pk, 1.0 / pk, 1.0 / pk, 1.0 / 0.35 + 1.0 / pk;
    CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-5 * expected.cwiseAbs().maxCoeff());
}

TEST_CASE("induced connections: flat charts and self-duality") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector p = v1(0.3);

    // Oracle: mean chart is m-flat, Gamma^(m) = Gamma^(e) + C = 0.
    CHECK(bernoulli_e_gamma(0.3) + bernoulli_c(0.3) == doctest::Approx(0.0).epsilon(1e-14));
    const double gamma_kl = eguchi::induced_connection(DivergenceSpec::kl(), bern, p).gamma(0, 0, 0);
    CHECK(std::abs(gamma_kl) < 2e-3);

    // Oracle: natural chart is e-flat, the KL dual connection vanishes.
    const ModelFamily bn = builtin("bernoulli-natural");
    const double gamma_dual =
        eguchi::induced_dual_connection(DivergenceSpec::kl(), bn, v1(0.4)).gamma(0, 0, 0);
    CHECK(std::abs(gamma_dual) < 2e-3);

    // KL dual equals the analytic e-connection in the mean chart.
    const double kl_dual = eguchi::induced_dual_connection(DivergenceSpec::kl(), bern, p).gamma(0, 0, 0);
    CHECK(kl_dual == doctest::Approx(bernoulli_e_gamma(0.3)).epsilon(0).scale(1.0));
    CHECK(std::abs(kl_dual - bernoulli_e_gamma(0.3)) < 2e-3);

    const Tensor3 gb = eguchi::induced_connection(DivergenceSpec::bhattacharyya(), bern, p).gamma;
    const Tensor3 gbd = eguchi::induced_dual_connection(DivergenceSpec::bhattacharyya(), bern, p).gamma;
    CHECK((gb - gbd).max_abs() < 2e-3);

    const Tensor3 ga = eguchi::induced_connection(DivergenceSpec::alpha(0.0), bern, p).gamma;
    const Tensor3 gad = eguchi::induced_dual_connection(DivergenceSpec::alpha(0.0), bern, p).gamma;
    CHECK((ga - gad).max_abs() < 2e-3);
}

TEST_CASE("Renyi dual gap is rho (1 - 2 rho) C") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector p = v1(0.3);
    const double rho = 0.4;
    const double g = eguchi::induced_connection(DivergenceSpec::renyi(rho), bern, p).gamma(0, 0, 0);
    const double gd =
        eguchi::induced_dual_connection(DivergenceSpec::renyi(rho), bern, p).gamma(0, 0, 0);
    CHECK(std::abs((gd - g) - rho * (1.0 - 2.0 * rho) * bernoulli_c(0.3)) < 5e-3);
}

TEST_CASE("snapshot: dual compatibility and determinism") {
    const ModelFamily gauss = builtin("gaussian-loc");
    const GeometrySnapshot a = eguchi::snapshot(DivergenceSpec::renyi(0.7), gauss, v1(0.6));
    CHECK(a.dual_compat_residual <= 5e-3);
    const GeometrySnapshot b = eguchi::snapshot(DivergenceSpec::renyi(0.7), gauss, v1(0.6));
    CHECK(a.metric.g(0, 0) == b.metric.g(0, 0));
    CHECK((a.gamma.gamma - b.gamma.gamma).max_abs() == 0.0);
    CHECK(a.source == "eguchi(renyi(0.7))");
}

TEST_CASE("near-boundary points are rejected") {
    const ModelFamily bern = builtin("bernoulli-mean");
    CHECK_THROWS_AS(eguchi::induced_connection(DivergenceSpec::kl(), bern, v1(1e-4)), StepTooLarge);
    CHECK_THROWS_AS(eguchi::induced_metric(DivergenceSpec::kl(), bern, v1(1.0 - 2e-4)), StepTooLarge);
}

TEST_CASE("eguchi matches analytic assemblies on the loc-scale family") {
    const ModelFamily ls = builtin("gaussian-loc-scale");
    const Vector th = v2(0.3, 1.4);
    const Matrix fisher = tensors::fisher(ls, th).g;
    const Tensor3 ge = tensors::e_connection(ls, th).gamma;
    const Tensor3 cc = tensors::amari_chentsov(ls, th).c;

    const double rho = 0.7;
    const MetricTensor g = eguchi::induced_metric(DivergenceSpec::renyi(rho), ls, th);
    CHECK((g.g - rho * fisher).cwiseAbs().maxCoeff() < 1e-5 * fisher.cwiseAbs().maxCoeff());
    CHECK(g.asymmetry < 1e-6);

    const Tensor3 got = eguchi::induced_connection(DivergenceSpec::renyi(rho), ls, th).gamma;
    const Tensor3 expected = rho * ge + (rho * rho) * cc;
    CHECK((got - expected).max_abs() < 5e-3);

    const Tensor3 got_dual = eguchi::induced_dual_connection(DivergenceSpec::renyi(rho), ls, th).gamma;
    const Tensor3 expected_dual = rho * ge + rho * (1.0 - rho) * cc;
    CHECK((got_dual - expected_dual).max_abs() < 5e-3);
}
