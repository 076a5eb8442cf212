#include <doctest.h>

#include <cmath>

#include "igeo/errors.hpp"
#include "igeo/fd.hpp"
#include "igeo/tensors.hpp"

#include "test_helpers.hpp"

using namespace igeo;
using igeo::testing::bernoulli_c;
using igeo::testing::bernoulli_e_gamma;
using igeo::testing::bernoulli_fisher;
using igeo::testing::v1;
using igeo::testing::v2;

TEST_CASE("Fisher metric oracles") {
    const ModelFamily bern = builtin("bernoulli-mean");
    CHECK(tensors::fisher(bern, v1(0.3)).g(0, 0) ==
          doctest::Approx(bernoulli_fisher(0.3)).epsilon(1e-12));
    CHECK(tensors::fisher(bern, v1(0.3)).g(0, 0) == doctest::Approx(4.761904761904762).epsilon(1e-12));

    const ModelFamily g2 = gaussian_loc(2.0);
    CHECK(tensors::fisher(g2, v1(1.0)).g(0, 0) == doctest::Approx(0.25).epsilon(1e-10));

    const ModelFamily cat = builtin("categorical-3");
    const Matrix f = tensors::fisher(cat, v2(1.0 / 3, 1.0 / 3)).g;
    Matrix expected(2, 2);
    expected << 6.0, 3.0, 3.0, 6.0;
    CHECK((f - expected).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(f.determinant() > 0.0);
}

TEST_CASE("e-connection and Amari-Chentsov oracles") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector p = v1(0.3);
    CHECK(tensors::e_connection(bern, p).gamma(0, 0, 0) ==
          doctest::Approx(bernoulli_e_gamma(0.3)).epsilon(1e-12));
    CHECK(tensors::e_connection(bern, p).gamma(0, 0, 0) == doctest::Approx(-9.070294784580498).epsilon(1e-10));
    CHECK(tensors::amari_chentsov(bern, p).c(0, 0, 0) ==
          doctest::Approx(bernoulli_c(0.3)).epsilon(1e-12));
    CHECK(tensors::amari_chentsov(bern, v1(0.5)).c(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-12));

    const ModelFamily gauss = builtin("gaussian-loc");
    CHECK(std::abs(tensors::e_connection(gauss, v1(0.4)).gamma(0, 0, 0)) < 1e-10);
    CHECK(std::abs(tensors::amari_chentsov(gauss, v1(0.4)).c(0, 0, 0)) < 1e-10);

    const ModelFamily bn = builtin("bernoulli-natural");
    CHECK(tensors::e_connection(bn, v1(0.9)).gamma.max_abs() < 1e-8);
    const ModelFamily pois = builtin("poisson-natural");
    CHECK(tensors::e_connection(pois, v1(0.5)).gamma.max_abs() < 1e-8);
}

TEST_CASE("connection assemblies") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector p = v1(0.35);

    CHECK(tensors::connection(GeometryLabel::rho(1.0), bern, p).gamma.max_abs() < 1e-8);
    CHECK((tensors::connection(GeometryLabel::rho(0.5), bern, p).gamma -
           tensors::connection(GeometryLabel::rho_dual(0.5), bern, p).gamma)
              .max_abs() < 1e-13);
    CHECK((tensors::connection(GeometryLabel::alpha(0.0), bern, p).gamma -
           tensors::connection(GeometryLabel::lc(), bern, p).gamma)
              .max_abs() < 1e-13);

    // Rho labels accept the closure point rho = 1; the divergence does not.
    CHECK_NOTHROW(GeometryLabel::rho(1.0));
    CHECK_THROWS_AS(GeometryLabel::rho(0.0), InvalidOrder);
    CHECK_THROWS_AS(GeometryLabel::alpha(1.0), InvalidOrder);
}

TEST_CASE("second kind carries the rho^{-1} raising") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector p = v1(0.3);
    const double rho = 0.4;
    // Oracle: hand contraction F^{-1} (Gamma^e + rho C) from exact sums.
    const double expected =
        (bernoulli_e_gamma(0.3) + rho * bernoulli_c(0.3)) / bernoulli_fisher(0.3);
    CHECK(tensors::second_kind(GeometryLabel::rho(rho), bern, p).gamma(0, 0, 0) ==
          doctest::Approx(expected).epsilon(1e-10));

    const double lc2 = tensors::second_kind(GeometryLabel::lc(), bern, p).gamma(0, 0, 0);
    const double rho2 = tensors::second_kind(GeometryLabel::rho(rho), bern, p).gamma(0, 0, 0);
    const double rhod2 = tensors::second_kind(GeometryLabel::rho_dual(rho), bern, p).gamma(0, 0, 0);
    CHECK(0.5 * (rho2 + rhod2) == doctest::Approx(lc2).epsilon(1e-12));

    // Oracle: metric-derivative Christoffel formula via FD of the Fisher field.
    auto fisher_field = [&](const Vector& t) { return tensors::fisher(bern, t).g; };
    const double lc_first = tensors::lc_from_metric_fd(fisher_field, p, 1e-4).gamma(0, 0, 0);
    CHECK(lc2 == doctest::Approx(lc_first / bernoulli_fisher(0.3)).epsilon(1e-5));
}

TEST_CASE("dual metric compatibility with each label's own metric") {
    const ModelFamily ls = builtin("gaussian-loc-scale");
    const Vector th = v2(0.2, 1.3);
    for (const auto& label : {GeometryLabel::m(), GeometryLabel::alpha(0.5),
                              GeometryLabel::rho(0.7), GeometryLabel::bhattacharyya()}) {
        CHECK(tensors::snapshot(label, ls, th).dual_compat_residual < 1e-5);
    }
}

TEST_CASE("structural invariants of assembled tensors") {
    const ModelFamily ls = builtin("gaussian-loc-scale");
    const Vector th = v2(-0.4, 1.1);
    CHECK(tensors::amari_chentsov(ls, th).c.total_symmetry_residual() < 1e-8);
    CHECK(tensors::connection(GeometryLabel::rho(0.3), ls, th).gamma.torsion_residual() < 1e-13);
    CHECK(tensors::fisher(ls, th).g(0, 1) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("rho-dual is not rho-negated") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector p = v1(0.3);
    const double rho = 0.3;
    const Tensor3 ge = tensors::e_connection(bern, p).gamma;
    const Tensor3 cc = tensors::amari_chentsov(bern, p).c;
    const Tensor3 dual = rho * ge + rho * (1.0 - rho) * cc;
    const Tensor3 negated = (-rho) * ge + rho * rho * cc;
    CHECK((dual - negated).max_abs() > 1e-2);
}

TEST_CASE("sqrt-rho chart transform") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector p = v1(0.3);

    const auto half = tensors::sqrt_rho_chart_check(bern, p, 0.5);
    CHECK(half.metric_undo_residual < 1e-6 * half.fisher_old_chart);
    CHECK(half.gamma_scaling_residual < 1e-6);
    CHECK(half.lc_second_kind_residual < 1e-6);
    // The displayed closed form matches the dual connection's transform.
    CHECK(half.dual_vs_display_form < 1e-10);
    CHECK(half.primal_vs_direct_form < 1e-10);

    const auto quarter = tensors::sqrt_rho_chart_check(bern, p, 0.25);
    CHECK(quarter.alpha_solvable);
    CHECK(quarter.alpha_mismatch > 1e-3);
    CHECK(quarter.primal_vs_display_form > 1e-3);
    CHECK(quarter.lc_second_kind_residual > 1e-3);

    const auto one = tensors::sqrt_rho_chart_check(bern, p, 1.0);
    CHECK(one.metric_undo_residual < 1e-10);
    CHECK(one.gamma_scaling_residual < 1e-10);

    const ModelFamily gauss = builtin("gaussian-loc");
    const auto g = tensors::sqrt_rho_chart_check(gauss, v1(0.5), 0.25);
    CHECK(g.metric_undo_residual < 1e-8);
    CHECK_FALSE(g.alpha_solvable);  // C = 0: no alpha condition to solve

    const ModelFamily ls = builtin("gaussian-loc-scale");
    CHECK_THROWS_AS(tensors::sqrt_rho_chart_check(ls, v2(0.0, 1.0), 0.5), Error);
}
