#include <doctest.h>

#include <cmath>
#include <random>

#include "igeo/divergence.hpp"
#include "igeo/errors.hpp"

#include "test_helpers.hpp"

using namespace igeo;
using igeo::testing::v1;

TEST_CASE("identity of indiscernibles") {
    const ModelFamily bern = builtin("bernoulli-mean");
    for (const auto& spec : {DivergenceSpec::kl(), DivergenceSpec::alpha(0.5),
                             DivergenceSpec::renyi(0.7), DivergenceSpec::bhattacharyya()}) {
        CHECK(std::abs(divergence(spec, bern, v1(0.5), v1(0.5))) < 1e-10);
    }
}

TEST_CASE("KL between unit Gaussians") {
    const ModelFamily gauss = builtin("gaussian-loc");
    // Oracle: (mu - mu')^2 / (2 sigma^2) = 0.5.
    CHECK(divergence(DivergenceSpec::kl(), gauss, v1(0.0), v1(1.0)) ==
          doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("Renyi at rho = 1/2 is Bhattacharyya") {
    const ModelFamily bern = builtin("bernoulli-mean");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.08, 0.92);
    for (int rep = 0; rep < 12; ++rep) {
        const Vector a = v1(u(rng)), b = v1(u(rng));
        const double r = divergence(DivergenceSpec::renyi(0.5), bern, a, b);
        const double bh = divergence(DivergenceSpec::bhattacharyya(), bern, a, b);
        CHECK(std::abs(r - bh) < 1e-10);
        // Bhattacharyya is symmetric.
        CHECK(std::abs(bh - divergence(DivergenceSpec::bhattacharyya(), bern, b, a)) < 1e-10);
    }
}

TEST_CASE("Renyi asymmetry witness at rho = 0.3") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const double fwd = divergence(DivergenceSpec::renyi(0.3), bern, v1(0.3), v1(0.6));
    const double bwd = divergence(DivergenceSpec::renyi(0.3), bern, v1(0.6), v1(0.3));
    CHECK(std::abs(fwd - bwd) > 1e-3);
}

TEST_CASE("non-negativity on sampled pairs") {
    std::mt19937_64 rng(17);
    for (const auto& name : {"bernoulli-mean", "gaussian-loc", "poisson-natural"}) {
        const ModelFamily f = builtin(name);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int rep = 0; rep < 40; ++rep) {
            Vector a(f.dim), b(f.dim);
            for (int i = 0; i < f.dim; ++i) {
                a[i] = f.test_lower[i] + u(rng) * (f.test_upper[i] - f.test_lower[i]);
                b[i] = f.test_lower[i] + u(rng) * (f.test_upper[i] - f.test_lower[i]);
            }
            for (const auto& spec : {DivergenceSpec::kl(), DivergenceSpec::renyi(0.3),
                                     DivergenceSpec::alpha(0.5), DivergenceSpec::bhattacharyya()}) {
                CHECK(divergence(spec, f, a, b) >= -1e-10);
            }
        }
    }
}

TEST_CASE("Renyi-to-KL limit") {
    const ModelFamily bern = builtin("bernoulli-mean");
    const auto rows = renyi_kl_limit_check(bern, v1(0.3), v1(0.6), {0.1, 0.01, 0.001});
    CHECK(rows.size() == 6);
    CHECK(limit_discrepancies_monotone(rows));

    const auto self_rows = renyi_kl_limit_check(bern, v1(0.4), v1(0.4), {0.1, 0.01});
    for (const auto& r : self_rows) CHECK(r.discrepancy < 1e-10);

    // Oracle: between unit-variance Gaussians D_rho = rho/2, so the
    // discrepancy is |rho - 1| / 2 exactly.
    const ModelFamily gauss = builtin("gaussian-loc");
    for (const auto& r : renyi_kl_limit_check(gauss, v1(0.0), v1(1.0), {0.2, 0.05})) {
        CHECK(r.d_rho == doctest::Approx(0.5 * r.rho).epsilon(1e-9));
        CHECK(r.discrepancy == doctest::Approx(0.5 * std::abs(r.rho - 1.0)).epsilon(1e-7));
    }
}

TEST_CASE("order validation") {
    CHECK_THROWS_AS(DivergenceSpec::renyi(1.0), InvalidOrder);
    CHECK_THROWS_AS(DivergenceSpec::renyi(0.0), InvalidOrder);
    CHECK_THROWS_AS(DivergenceSpec::renyi(-0.5), InvalidOrder);
    CHECK_THROWS_AS(DivergenceSpec::alpha(1.0), InvalidOrder);
    CHECK_THROWS_AS(DivergenceSpec::alpha(-1.0), InvalidOrder);
    const ModelFamily bern = builtin("bernoulli-mean");
    CHECK_THROWS_AS(renyi_kl_limit_check(bern, v1(0.3), v1(0.6), {1.5}), InvalidOrder);
}
