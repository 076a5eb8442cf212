#include <doctest.h>

#include <cmath>

#include "igeo/errors.hpp"
#include "igeo/family.hpp"
#include "igeo/fd.hpp"
#include "igeo/quadrature.hpp"

#include "test_helpers.hpp"

using namespace igeo;
using igeo::testing::v1;
using igeo::testing::v2;

TEST_CASE("builtin evaluators match hand derivatives") {
    const ModelFamily bern = builtin("bernoulli-mean");
    CHECK(bern.score(1.0, v1(0.3))[0] == doctest::Approx(1.0 / 0.3).epsilon(1e-14));
    CHECK(bern.score(0.0, v1(0.3))[0] == doctest::Approx(-1.0 / 0.7).epsilon(1e-14));

    const ModelFamily gauss = builtin("gaussian-loc");
    CHECK(gauss.log_hessian(0.8, v1(-0.2))(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));

    const ModelFamily ls = builtin("gaussian-loc-scale");
    const Vector th = v2(0.5, 1.5);
    const double h = 1e-5 * fd::step_scale(th);
    const Vector fd_score =
        fd::gradient([&](const Vector& t) { return ls.log_density(1.1, t); }, th, h);
    CHECK((fd_score - ls.score(1.1, th)).cwiseAbs().maxCoeff() < 1e-8);
    const Matrix fd_hess =
        fd::hessian([&](const Vector& t) { return ls.log_density(1.1, t); }, th, h);
    CHECK((fd_hess - ls.log_hessian(1.1, th)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("zero-mean score and information identity") {
    for (const auto& name : builtin_names()) {
        const ModelFamily f = builtin(name);
        const Vector th = interior_grid(f, 3)[1];
        for (int i = 0; i < f.dim; ++i) {
            const double m = quad::expect(f, th, [&](double y) { return f.score(y, th)[i]; });
            CHECK(std::abs(m) < 1e-8);
            const double outer = quad::expect(f, th, [&](double y) {
                const Vector s = f.score(y, th);
                return s[i] * s[i];
            });
            const double hess =
                quad::expect(f, th, [&](double y) { return f.log_hessian(y, th)(i, i); });
            CHECK(outer + hess == doctest::Approx(0.0).epsilon(0).scale(std::abs(outer)));
            CHECK(std::abs(outer + hess) < 1e-8 * std::max(1.0, std::abs(outer)));
        }
    }
}

TEST_CASE("unknown family") {
    CHECK_THROWS_AS(builtin("weibull"), UnknownFamily);
    CHECK_THROWS_AS(builtin("categorical-1"), UnknownFamily);
}

TEST_CASE("exponential spec: Bernoulli natural parameter") {
    ExponentialFamilySpec spec;
    spec.space = SampleSpace::finite({0.0, 1.0});
    spec.sufficient_stats = {[](double y) { return y; }};
    const ModelFamily f =
        from_exponential_spec(spec, Domain::box(v1(-8.0), v1(8.0)));
    CHECK(f.flat_structure == FlatStructure::ExponentialFlat);
    for (double t : {-2.0, 0.0, 1.3}) {
        // Oracle: psi by the direct two-term normalization log(1 + e^t).
        const double psi_oracle = std::log(std::exp(t * 0.0) + std::exp(t * 1.0));
        const double psi = t * 1.0 - f.log_density(1.0, v1(t));
        CHECK(psi == doctest::Approx(psi_oracle).epsilon(1e-13));
    }
}

TEST_CASE("exponential spec: Gaussian location from a normal carrier") {
    ExponentialFamilySpec spec;
    spec.space = SampleSpace::real_line();
    spec.sufficient_stats = {[](double y) { return y; }};
    spec.carrier = [](double y) { return -0.5 * y * y - 0.5 * std::log(2.0 * M_PI); };
    const ModelFamily f = from_exponential_spec(spec, Domain::box(v1(-4.0), v1(4.0)));
    for (double t : {-1.0, 0.4, 2.0}) {
        // Oracle: Gaussian integral gives psi = t^2 / 2.
        const double psi = t * 0.9 + spec.carrier(0.9) - f.log_density(0.9, v1(t));
        CHECK(psi == doctest::Approx(0.5 * t * t).epsilon(1e-9));
    }
    // Score is y - theta for this family.
    CHECK(f.score(1.2, v1(0.5))[0] == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("exponential spec rejects degenerate statistics") {
    ExponentialFamilySpec empty;
    empty.space = SampleSpace::finite({0.0, 1.0});
    CHECK_THROWS_AS(from_exponential_spec(empty, Domain::box(v1(-1.0), v1(1.0))),
                    DegenerateStatistics);

    ExponentialFamilySpec dependent;
    dependent.space = SampleSpace::finite({0.0, 1.0});
    dependent.sufficient_stats = {[](double y) { return y; }, [](double y) { return 2.0 * y; }};
    CHECK_THROWS_AS(from_exponential_spec(dependent, Domain::box(v2(-1.0, -1.0), v2(1.0, 1.0))),
                    DegenerateStatistics);
}

TEST_CASE("mixture spec: Bernoulli around the fair coin") {
    MixtureFamilySpec spec;
    spec.space = SampleSpace::finite({0.0, 1.0});
    spec.components = {[](double y) { return y > 0.5 ? 1.0 : -1.0; }};
    spec.carrier = [](double) { return 0.5; };
    const ModelFamily f = from_mixture_spec(spec, Domain::box(v1(-0.45), v1(0.45)));
    CHECK(f.flat_structure == FlatStructure::MixtureFlat);
    CHECK(std::exp(f.log_density(1.0, v1(0.2))) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(std::exp(f.log_density(0.0, v1(0.2))) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(std::exp(f.log_density(1.0, v1(0.0))) == doctest::Approx(0.5).epsilon(1e-14));

    CHECK_THROWS_AS(from_mixture_spec(spec, Domain::box(v1(-0.7), v1(0.7))), NegativeDensity);
}

TEST_CASE("family config JSON") {
    const char* cfg = R"({
      "schema_version": "1",
      "name": "bern-nat",
      "kind": "exponential",
      "space": {"kind": "finite", "atoms": [0, 1]},
      "exponential": {"sufficient_stats": [{"fn": "identity"}]},
      "domain": {"lower": [-6], "upper": [6]},
      "reference": [0]
    })";
    const ModelFamily f = family_from_json_text(cfg);
    CHECK(f.name == "bern-nat");
    const double psi = 0.7 - f.log_density(1.0, v1(0.7));
    CHECK(psi == doctest::Approx(std::log(1.0 + std::exp(0.7))).epsilon(1e-13));

    const char* b = R"({"kind": "builtin", "builtin": {"name": "gaussian-loc", "sigma": 2.0}})";
    const ModelFamily g = family_from_json_text(b);
    CHECK(g.log_hessian(0.3, v1(0.0))(0, 0) == doctest::Approx(-0.25).epsilon(1e-14));

    const char* mix = R"({
      "kind": "mixture",
      "space": {"kind": "finite", "atoms": [0, 1]},
      "mixture": {
        "components": [{"fn": "sum", "terms": [{"fn": "indicator", "atom": 1},
                                               {"fn": "scaled", "factor": -1, "of": {"fn": "indicator", "atom": 0}}]}],
        "carrier": {"fn": "const", "value": 0.5}
      },
      "domain": {"lower": [-0.4], "upper": [0.4]}
    })";
    const ModelFamily m = family_from_json_text(mix);
    CHECK(std::exp(m.log_density(1.0, v1(0.1))) == doctest::Approx(0.6).epsilon(1e-14));

    CHECK_THROWS_AS(family_from_json_text("{"), ConfigError);
    CHECK_THROWS_AS(family_from_json_text(R"({"kind": "nope"})"), ConfigError);
}

TEST_CASE("interior grid stays inside the domain") {
    for (const auto& name : builtin_names()) {
        const ModelFamily f = builtin(name);
        for (const Vector& th : interior_grid(f, 5)) CHECK(f.domain.contains(th));
    }
}

TEST_CASE("domain margin probing") {
    const ModelFamily cat = builtin("categorical-3");
    CHECK(cat.domain.contains_with_margin(v2(0.3, 0.3), 0.01));
    CHECK_FALSE(cat.domain.contains_with_margin(v2(0.49, 0.49), 0.02));  // sum constraint
    CHECK_FALSE(cat.domain.contains_with_margin(v2(0.005, 0.3), 0.01));
}
