#include <doctest.h>

#include <cmath>

#include "igeo/errors.hpp"
#include "igeo/laplace.hpp"
#include "igeo/tensors.hpp"

#include "test_helpers.hpp"

using namespace igeo;
using igeo::testing::v1;

namespace {

laplace::ScalarField square_field() {
    return {[](const Vector& t) { return t[0] * t[0]; },
            [](const Vector& t) { return Vector::Constant(1, 2.0 * t[0]); },
            [](const Vector&) { return Matrix::Constant(1, 1, 2.0); }};
}

// Hand oracles on the Bernoulli mean chart for h = p^2:
//   V = F^{-1} h' = 2 p^2 (1 - p),   dV = 4p - 6p^2,
//   e-connection (2nd kind) = (2p - 1) / (p (1 - p)),
//   Delta_m = dV,   Delta_e = dV + Gamma_e2 V.
double oracle_delta_m(double p) { return 4.0 * p - 6.0 * p * p; }
double oracle_delta_e(double p) {
    const double v = 2.0 * p * p * (1.0 - p);
    const double gamma_e2 = (2.0 * p - 1.0) / (p * (1.0 - p));
    return oracle_delta_m(p) + gamma_e2 * v;
}

}  // namespace

TEST_CASE("divergence of vector fields") {
    const ModelFamily gauss = builtin("gaussian-loc");
    laplace::VectorField x_mu{[](const Vector& t) { return t; }, nullptr};
    // Oracle: constant metric, flat chart, div X = dX/dmu = 1.
    CHECK(laplace::div_connection(GeometryLabel::lc(), gauss, x_mu, v1(0.4)) ==
          doctest::Approx(1.0).epsilon(1e-6));

    const ModelFamily bern = builtin("bernoulli-mean");
    laplace::VectorField x_zero{[](const Vector& t) { return (0.0 * t).eval(); }, nullptr};
    CHECK(std::abs(laplace::div_connection(GeometryLabel::rho(0.4), bern, x_zero, v1(0.3))) < 1e-12);

    laplace::VectorField x{[](const Vector& t) { return Vector::Constant(1, t[0] * (1.0 - t[0])); },
                           nullptr};
    const double rho = 0.6;
    const double d_rho = laplace::div_connection(GeometryLabel::rho(rho), bern, x, v1(0.3));
    const double d_m = laplace::div_connection(GeometryLabel::m(), bern, x, v1(0.3));
    const double d_e = laplace::div_connection(GeometryLabel::e(), bern, x, v1(0.3));
    CHECK(d_rho == doctest::Approx(rho * d_m + (1.0 - rho) * d_e).epsilon(1e-8));
}

TEST_CASE("determinant-form LC divergence") {
    const ModelFamily bern = builtin("bernoulli-mean");
    laplace::VectorField ones{[](const Vector& t) { return Vector::Ones(t.size()); }, nullptr};
    auto fisher_field = [&](const Vector& t) { return tensors::fisher(bern, t).g; };

    // Oracle: d/dp log sqrt(F) = (2p - 1) / (2 p (1 - p)) = -0.952381 at 0.3.
    const double got = laplace::div_lc_metric_form(fisher_field, ones, v1(0.3));
    CHECK(got == doctest::Approx((2.0 * 0.3 - 1.0) / (2.0 * 0.3 * 0.7)).epsilon(1e-6));
    CHECK(got == doctest::Approx(-0.952381).epsilon(1e-5));

    // Conformal scaling leaves the determinant form unchanged.
    for (double rho : {0.3, 1.0}) {
        auto scaled = [&, rho](const Vector& t) -> Matrix {
            return (rho * tensors::fisher(bern, t).g).eval();
        };
        CHECK(laplace::div_lc_metric_form(scaled, ones, v1(0.3)) ==
              doctest::Approx(got).epsilon(1e-10));
    }

    CHECK(laplace::div_connection(GeometryLabel::lc(), bern, ones, v1(0.3)) ==
          doctest::Approx(got).epsilon(1e-5));

    laplace::VectorField zero{[](const Vector& t) { return (0.0 * t).eval(); }, nullptr};
    CHECK(std::abs(laplace::div_lc_metric_form(fisher_field, zero, v1(0.3))) < 1e-12);
}

TEST_CASE("metric gradients") {
    const ModelFamily g2 = gaussian_loc(2.0);
    const auto h = square_field();
    // Oracle: g^{-1} dh = sigma^2 * 2 mu = 8 at mu = 1.
    CHECK(laplace::grad(GeometryLabel::fisher(), g2, h, v1(1.0))[0] ==
          doctest::Approx(8.0).epsilon(1e-10));

    const ModelFamily bern = builtin("bernoulli-mean");
    const Vector gf = laplace::grad(GeometryLabel::fisher(), bern, h, v1(0.3));
    const Vector gr = laplace::grad(GeometryLabel::rho(0.5), bern, h, v1(0.3));
    CHECK(gr[0] == doctest::Approx(2.0 * gf[0]).epsilon(1e-12));

    laplace::ScalarField h_const{[](const Vector&) { return 7.0; }, nullptr, nullptr};
    CHECK(std::abs(laplace::grad(GeometryLabel::lc(), bern, h_const, v1(0.3))[0]) < 1e-9);
}

TEST_CASE("Laplacians: flat family and hand oracles") {
    const ModelFamily gauss = builtin("gaussian-loc");
    const auto h = square_field();
    // Oracle: flat 1-D Laplacian g^{-1} h'' with constant metric 1.
    for (const auto& label : {GeometryLabel::e(), GeometryLabel::m(), GeometryLabel::lc()})
        CHECK(laplace::laplacian(label, gauss, h, v1(0.5)) == doctest::Approx(2.0).epsilon(1e-6));

    const ModelFamily bern = builtin("bernoulli-mean");
    const double p = 0.3;
    CHECK(laplace::laplacian(GeometryLabel::m(), bern, h, v1(p)) ==
          doctest::Approx(oracle_delta_m(p)).epsilon(1e-6));
    CHECK(laplace::laplacian(GeometryLabel::e(), bern, h, v1(p)) ==
          doctest::Approx(oracle_delta_e(p)).epsilon(1e-6));

    // Assembled rho Laplacian against the same hand oracles.
    for (double rho : {0.5, 2.0}) {
        CHECK(laplace::laplacian(GeometryLabel::rho(rho), bern, h, v1(p)) ==
              doctest::Approx(oracle_delta_m(p) + (1.0 / rho - 1.0) * oracle_delta_e(p))
                  .epsilon(1e-6));
    }
    CHECK(laplace::laplacian(GeometryLabel::rho(1.0), bern, h, v1(p)) ==
          doctest::Approx(laplace::laplacian(GeometryLabel::m(), bern, h, v1(p))).epsilon(1e-12));

    // Alpha mixture.
    const double a = 0.4;
    CHECK(laplace::laplacian(GeometryLabel::alpha(a), bern, h, v1(p)) ==
          doctest::Approx(0.5 * (1.0 + a) * oracle_delta_e(p) + 0.5 * (1.0 - a) * oracle_delta_m(p))
              .epsilon(1e-6));
}

TEST_CASE("LC Laplacian scales with the inverse conformal factor") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const auto h = square_field();
    const double base = laplace::lc_laplacian_conformal(bern, h, v1(0.3), 1.0);
    for (double rho : {0.3, 0.5, 2.0}) {
        CHECK(laplace::lc_laplacian_conformal(bern, h, v1(0.3), rho) ==
              doctest::Approx(base / rho).epsilon(1e-8));
    }
}

TEST_CASE("rho Laplacian is not a conformal rescaling") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const auto h = square_field();
    const double d_half = laplace::laplacian(GeometryLabel::rho(0.5), bern, h, v1(0.3));
    const double d_one = laplace::laplacian(GeometryLabel::rho(1.0), bern, h, v1(0.3));
    CHECK(std::abs(d_half - 2.0 * d_one) > 1e-2);
    // Oracle: Delta_e(0.3) = 0.42, so the gap is exactly Delta_e - Delta_m = -0.24... in magnitude.
    CHECK(std::abs(d_half - 2.0 * d_one) ==
          doctest::Approx(std::abs(oracle_delta_e(0.3) - oracle_delta_m(0.3))).epsilon(1e-5));
}

TEST_CASE("non-reparameterizability certificates") {
    for (double rho : {0.3, 0.5, 2.0}) {
        const auto cert = laplace::non_reparameterizability_certificate(rho);
        CHECK(cert.pass);
        CHECK_FALSE(cert.consistent);
        CHECK(cert.alpha_from_m_coeff == doctest::Approx(-1.0));
        CHECK(cert.alpha_from_e_coeff == doctest::Approx(2.0 / rho - 3.0));
    }
    CHECK_THROWS_AS(laplace::non_reparameterizability_certificate(1.0), InvalidOrder);
    CHECK_THROWS_AS(laplace::non_reparameterizability_certificate(-0.5), InvalidOrder);
}

TEST_CASE("field derivative fallbacks agree with analytic forms") {
    const auto h = square_field();
    laplace::ScalarField h_fd{h.value, nullptr, nullptr};
    CHECK(h_fd.grad(v1(0.7))[0] == doctest::Approx(1.4).epsilon(1e-9));
    CHECK(h_fd.hess(v1(0.7))(0, 0) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK_FALSE(h_fd.analytic_grad());

    laplace::VectorField v{[](const Vector& t) { return Vector::Constant(1, std::sin(t[0])); },
                           nullptr};
    CHECK(v.jacobian(v1(0.4))(0, 0) == doctest::Approx(std::cos(0.4)).epsilon(1e-9));
}
