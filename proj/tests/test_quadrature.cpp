#include <doctest.h>

#include <cmath>
#include <random>

#include "igeo/errors.hpp"
#include "igeo/family.hpp"
#include "igeo/quadrature.hpp"

#include "test_helpers.hpp"

using namespace igeo;
using igeo::testing::v1;

TEST_CASE("gauss-hermite nodes and total weights") {
    std::vector<double> x, w;
    quad::gauss_hermite(1, x, w);
    CHECK(x[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w[0] == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));

    // Total weights W_i = w_i e^{x_i^2} integrate a unit Gaussian to 1.
    quad::gauss_hermite(40, x, w);
    double sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double y = std::sqrt(2.0) * x[i];
        sum += w[i] * std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI);
    }
    sum *= std::sqrt(2.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("expect: normalization and moments") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const ModelFamily gauss = builtin("gaussian-loc");

    CHECK(quad::expect(bern, v1(0.3), [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));

    // Oracle: second moment of the standard normal is 1.
    CHECK(quad::expect(gauss, v1(0.0), [](double y) { return y * y; }) ==
          doctest::Approx(1.0).epsilon(1e-10));

    // Oracle: exact two-term sum E[(d_p log p)^2] = 1/(p(1-p)) at p = 0.3.
    const double oracle = 0.3 * (1.0 / 0.3) * (1.0 / 0.3) + 0.7 * (1.0 / 0.7) * (1.0 / 0.7);
    CHECK(oracle == doctest::Approx(4.761904761904762).epsilon(1e-14));
    const double got = quad::expect(bern, v1(0.3), [&](double y) {
        const double s = bern.score(y, v1(0.3))[0];
        return s * s;
    });
    CHECK(got == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("refine doubles the order and keeps results stable") {
    const ModelFamily gauss = builtin("gaussian-loc");
    auto rule = quad::make_rule(gauss.space, 20, 1e-10, {v1(0.0)});
    auto fine = quad::refine(rule);
    CHECK(fine.order == 40);
    CHECK(fine.target_rel_tol == rule.target_rel_tol);

    quad::ExpectOptions o20, o40;
    o20.start_order = 20;
    o40.start_order = 40;
    auto y4 = [](double y) { return y * y * y * y; };
    const double i20 = quad::expect(gauss, v1(0.0), y4, o20);
    const double i40 = quad::expect(gauss, v1(0.0), y4, o40);
    CHECK(i40 == doctest::Approx(3.0).epsilon(1e-12));  // oracle: 3 sigma^4
    CHECK(std::abs(i40 - i20) <= 1e-10);
    CHECK(quad::expect(gauss, v1(0.0), [](double) { return 1.0; }, o40) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finite spaces sum exactly, in order") {
    const ModelFamily bern = builtin("bernoulli-mean");
    auto f = [](double y) { return 1.25 - 0.75 * y; };
    const double via = quad::expect(bern, v1(0.3), f);
    double plain = 0.0;
    for (double y : bern.space.atoms) plain += std::exp(bern.log_density(y, v1(0.3))) * f(y);
    CHECK(via == plain);  // bit-for-bit
}

TEST_CASE("linearity of expect on random integrands") {
    const ModelFamily gauss = builtin("gaussian-loc");
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        const double a = u(rng), b = u(rng), c2 = u(rng), c3 = u(rng);
        auto f = [&](double y) { return 1.0 + c2 * y * y; };
        auto g = [&](double y) { return y + c3 * y * y * y; };
        const Vector th = v1(u(rng) / 2.0);
        const double lhs = quad::expect(gauss, th, [&](double y) { return a * f(y) + b * g(y); });
        const double rhs = a * quad::expect(gauss, th, f) + b * quad::expect(gauss, th, g);
        CHECK(lhs == doctest::Approx(rhs).epsilon(2e-10));
    }
}

TEST_CASE("poisson truncation covers the support") {
    const ModelFamily pois = builtin("poisson-natural");
    for (double t : {-1.0, 0.0, 2.0}) {
        CHECK(quad::expect(pois, v1(t), [](double) { return 1.0; }) ==
              doctest::Approx(1.0).epsilon(1e-12));
        // Oracle: Poisson mean is exp(theta).
        CHECK(quad::expect(pois, v1(t), [](double y) { return y; }) ==
              doctest::Approx(std::exp(t)).epsilon(1e-12));
    }
}

TEST_CASE("expect error paths") {
    const ModelFamily bern = builtin("bernoulli-mean");
    CHECK_THROWS_AS(quad::expect(bern, v1(1.5), [](double) { return 1.0; }), DomainError);
    const ModelFamily gauss = builtin("gaussian-loc");
    CHECK_THROWS_AS(quad::expect(gauss, v1(0.0),
                                 [](double) { return std::numeric_limits<double>::quiet_NaN(); }),
                    NonConvergent);
}

TEST_CASE("sample space validation") {
    CHECK_THROWS_AS(SampleSpace::finite({}), ConfigError);
    CHECK_THROWS_AS(SampleSpace::finite({1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(SampleSpace::real_interval(2.0, 1.0), ConfigError);
}
