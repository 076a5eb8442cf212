#include "igeo/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "igeo/errors.hpp"

namespace igeo {

namespace {

// Node window covering the mass of p^a p'^(1-a): between both distributions.
quad::Window combined_window(const ModelFamily& family, const Vector& theta,
                             const Vector& theta_p) {
    if (family.space.discrete() || !family.window_hint) return quad::Window{};
    const quad::Window a = family.window_hint(theta);
    const quad::Window b = family.window_hint(theta_p);
    quad::Window w;
    w.loc = 0.5 * (a.loc + b.loc);
    w.scale = std::max(a.scale, b.scale) + 0.5 * std::abs(a.loc - b.loc);
    return w;
}

quad::ExpectOptions pair_options(const ModelFamily& family, const Vector& theta,
                                 const Vector& theta_p, const quad::ExpectOptions& base) {
    quad::ExpectOptions opts = base;
    if (!opts.window && !family.space.discrete() && family.window_hint)
        opts.window = combined_window(family, theta, theta_p);
    opts.extra_thetas.push_back(theta_p);
    return opts;
}

}  // namespace

double divergence(const DivergenceSpec& spec, const ModelFamily& family,
                  const Vector& theta, const Vector& theta_p,
                  const quad::ExpectOptions& base_opts) {
    family.check_in_domain(theta);
    family.check_in_domain(theta_p);
    const quad::ExpectOptions opts = pair_options(family, theta, theta_p, base_opts);

    auto log_p = [&](double y) { return family.log_density(y, theta); };
    auto log_q = [&](double y) { return family.log_density(y, theta_p); };

    switch (spec.kind) {
        case DivergenceSpec::Kind::KL:
            return quad::expect(family, theta, [&](double y) { return log_p(y) - log_q(y); }, opts);
        case DivergenceSpec::Kind::Alpha: {
            const double a = spec.order;
            if (a == -1.0 || a == 1.0) throw InvalidOrder("alpha order outside {-1, +1} required");
            // integral p^{(1-a)/2} q^{(1+a)/2} = E_p exp(((1+a)/2)(log q - log p))
            const double c = 0.5 * (1.0 + a);
            const double integral = quad::expect(
                family, theta, [&](double y) { return std::exp(c * (log_q(y) - log_p(y))); }, opts);
            return 4.0 / (1.0 - a * a) * (1.0 - integral);
        }
        case DivergenceSpec::Kind::Renyi: {
            const double rho = spec.order;
            if (!(rho > 0.0) || rho == 1.0) throw InvalidOrder("Renyi order rho > 0, rho != 1 required");
            // integral p^rho q^{1-rho} in log-space relative to p.
            const double integral = quad::expect(
                family, theta,
                [&](double y) { return std::exp((1.0 - rho) * (log_q(y) - log_p(y))); }, opts);
            if (!(integral > 0.0))
                throw IntegralNonPositive("Renyi inner integral non-positive: quadrature failure");
            return std::log(integral) / (rho - 1.0);
        }
        case DivergenceSpec::Kind::Bhattacharyya: {
            const double integral = quad::expect(
                family, theta, [&](double y) { return std::exp(0.5 * (log_q(y) - log_p(y))); }, opts);
            if (!(integral > 0.0))
                throw IntegralNonPositive("Bhattacharyya inner integral non-positive");
            return -2.0 * std::log(integral);
        }
    }
    throw Error("unreachable divergence kind");
}

std::vector<RenyiKlLimitRow> renyi_kl_limit_check(const ModelFamily& family,
                                                  const Vector& theta, const Vector& theta_p,
                                                  const std::vector<double>& eps_list) {
    for (double eps : eps_list)
        if (!(eps > 0.0) || eps >= 1.0)
            throw InvalidOrder("eps values must lie in (0, 1)");
    std::vector<double> eps_sorted = eps_list;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());

    const double d_kl = divergence(DivergenceSpec::kl(), family, theta, theta_p);
    std::vector<RenyiKlLimitRow> rows;
    for (double branch : {+1.0, -1.0}) {
        for (double eps : eps_sorted) {
            const double rho = 1.0 + branch * eps;
            const double d = divergence(DivergenceSpec::renyi(rho), family, theta, theta_p);
            rows.push_back({rho, d, d_kl, std::abs(d - d_kl)});
        }
    }
    return rows;
}

bool limit_discrepancies_monotone(const std::vector<RenyiKlLimitRow>& rows, double slack) {
    // Rows come in two branches, each ordered toward rho -> 1.
    double prev = -1.0;
    for (const auto& r : rows) {
        const bool new_branch = prev < 0.0 || r.rho < 1.0;
        static_cast<void>(new_branch);
        if (prev >= 0.0 && r.rho > 1.0 && r.discrepancy > prev + slack) return false;
        if (r.rho > 1.0) prev = r.discrepancy;
    }
    prev = -1.0;
    for (const auto& r : rows) {
        if (r.rho >= 1.0) continue;
        if (prev >= 0.0 && r.discrepancy > prev + slack) return false;
        prev = r.discrepancy;
    }
    return true;
}

}  // namespace igeo
