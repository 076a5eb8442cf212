#include "igeo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "igeo/errors.hpp"
#include "igeo/family.hpp"

namespace igeo::quad {

namespace {

constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}

// Orthonormal Hermite functions phi_k(x) = p_k(x) exp(-x^2/2) for the weight
// exp(-x^2); all O(1), so Christoffel weights stay finite at large order.
// Returns sum_{k<n} phi_k^2 and phi_{n-1}, phi_n.
struct HermiteEval {
    double christoffel_sum;
    double phi_nm1;
    double phi_n;
};

HermiteEval hermite_functions(int n, double x) {
    double prev = 0.0;                              // phi_{-1}
    double cur = kPiQuarterInv * std::exp(-0.5 * x * x);  // phi_0
    double sum = cur * cur;
    for (int k = 1; k <= n; ++k) {
        const double next = x * std::sqrt(2.0 / k) * cur - std::sqrt((k - 1.0) / k) * prev;
        prev = cur;
        cur = next;
        if (k < n) sum += cur * cur;
    }
    return {sum, prev, cur};
}

void compute_gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    // Golub-Welsch: eigenvalues of the Jacobi matrix, off-diagonal sqrt(k/2).
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(0.5 * k);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);
    nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(nodes.begin(), nodes.end());

    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton polish on p_n(x) = 0 using p_n' = sqrt(2n) p_{n-1}.
        double x = nodes[i];
        for (int it = 0; it < 3; ++it) {
            const HermiteEval e = hermite_functions(n, x);
            const double dphi = std::sqrt(2.0 * n) * e.phi_nm1 - x * e.phi_n;
            if (dphi == 0.0) break;
            const double dx = e.phi_n / dphi;
            x -= dx;
            if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
        }
        nodes[i] = x;
        // Total weight w_i e^{x^2} = 1 / sum_{k<n} phi_k(x_i)^2.
        const HermiteEval e = hermite_functions(n, x);
        weights[i] = 1.0 / e.christoffel_sum;
    }
}

void compute_gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        return es.eigenvalues()[a] < es.eigenvalues()[b];
    });
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()[perm[i]];
        const double v0 = es.eigenvectors()(0, perm[i]);
        weights[i] = 2.0 * v0 * v0;
    }
}

template <void (*Compute)(int, std::vector<double>&, std::vector<double>&)>
void cached_rule(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) {
        std::pair<std::vector<double>, std::vector<double>> entry;
        Compute(order, entry.first, entry.second);
        it = cache.emplace(order, std::move(entry)).first;
    }
    nodes = it->second.first;
    weights = it->second.second;
}

}  // namespace

void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& total_weights) {
    if (order < 1) throw Error("quadrature order must be positive");
    cached_rule<compute_gauss_hermite>(order, nodes, total_weights);
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 1) throw Error("quadrature order must be positive");
    cached_rule<compute_gauss_legendre>(order, nodes, weights);
}

int default_order() {
    static const int order = [] {
        if (const char* env = std::getenv("IGEO_QUAD_ORDER")) {
            const int v = std::atoi(env);
            if (v >= 4 && v <= 640) return v;
        }
        return 40;
    }();
    return order;
}

QuadratureRule make_rule(const SampleSpace& space, int order, double target_rel_tol,
                         const std::vector<Vector>& thetas) {
    QuadratureRule rule;
    rule.space = space;
    rule.order = order;
    rule.target_rel_tol = target_rel_tol;
    switch (space.kind) {
        case SampleSpace::Kind::Finite:
            rule.nodes = space.atoms;
            rule.weights.assign(space.atoms.size(), 1.0);
            break;
        case SampleSpace::Kind::CountablyInfinite: {
            if (!space.truncation) throw ConfigError("countable space lacks a truncation policy");
            std::int64_t n_max = 0;
            for (const Vector& th : thetas) n_max = std::max(n_max, space.truncation(th));
            if (thetas.empty()) throw ConfigError("countable rule needs a parameter point");
            rule.nodes.resize(static_cast<size_t>(n_max) + 1);
            for (std::int64_t y = 0; y <= n_max; ++y) rule.nodes[static_cast<size_t>(y)] = double(y);
            rule.weights.assign(rule.nodes.size(), 1.0);
            break;
        }
        case SampleSpace::Kind::RealLine:
            gauss_hermite(order, rule.nodes, rule.weights);
            break;
        case SampleSpace::Kind::RealInterval:
            gauss_legendre(order, rule.nodes, rule.weights);
            break;
    }
    return rule;
}

QuadratureRule refine(const QuadratureRule& rule) {
    QuadratureRule out = rule;
    out.order = rule.order * 2;
    if (rule.space.kind == SampleSpace::Kind::RealLine) {
        gauss_hermite(out.order, out.nodes, out.weights);
    } else if (rule.space.kind == SampleSpace::Kind::RealInterval) {
        gauss_legendre(out.order, out.nodes, out.weights);
    }
    // Discrete rules already sum the full (truncated) support.
    return out;
}

double apply(const QuadratureRule& rule, const Window& window,
             const std::function<double(double)>& g) {
    CompensatedSum sum;
    switch (rule.space.kind) {
        case SampleSpace::Kind::Finite:
        case SampleSpace::Kind::CountablyInfinite:
            for (size_t i = 0; i < rule.nodes.size(); ++i) sum.add(rule.weights[i] * g(rule.nodes[i]));
            return sum.value();
        case SampleSpace::Kind::RealLine: {
            const double s = std::sqrt(2.0) * window.scale;
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                sum.add(rule.weights[i] * g(window.loc + s * rule.nodes[i]));
            return s * sum.value();
        }
        case SampleSpace::Kind::RealInterval: {
            const double mid = 0.5 * (rule.space.lo + rule.space.hi);
            const double half = 0.5 * (rule.space.hi - rule.space.lo);
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                sum.add(rule.weights[i] * g(mid + half * rule.nodes[i]));
            return half * sum.value();
        }
    }
    return 0.0;
}

namespace {

// Absolute mass of the integrand under the rule, for the mixed abs/rel
// convergence scale.
double apply_abs(const QuadratureRule& rule, const Window& window,
                 const std::function<double(double)>& g) {
    return apply(rule, window, [&](double y) { return std::abs(g(y)); });
}

void check_finite(const QuadratureRule& rule, const Window& window,
                  const std::function<double(double)>& g) {
    const bool continuous = !rule.space.discrete();
    const double s = std::sqrt(2.0) * window.scale;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double y = rule.nodes[i];
        if (continuous && rule.space.kind == SampleSpace::Kind::RealLine) y = window.loc + s * y;
        if (continuous && rule.space.kind == SampleSpace::Kind::RealInterval) {
            const double mid = 0.5 * (rule.space.lo + rule.space.hi);
            const double half = 0.5 * (rule.space.hi - rule.space.lo);
            y = mid + half * rule.nodes[i];
        }
        if (!std::isfinite(g(y)))
            throw NonConvergent("integrand not finite at quadrature node y=" + std::to_string(y));
    }
}

}  // namespace

double integrate(const SampleSpace& space, const std::function<double(double)>& g,
                 const Window& window, const ExpectOptions& opts,
                 const std::vector<Vector>& thetas) {
    const int start = opts.start_order > 0 ? opts.start_order : default_order();
    QuadratureRule rule = make_rule(space, start, opts.rel_tol, thetas);
    check_finite(rule, window, g);

    if (space.discrete()) {
        // Exact truncated sum; the truncation policy keeps tail mass < 1e-14.
        return apply(rule, window, g);
    }

    double coarse = apply(rule, window, g);
    QuadratureRule fine_rule = refine(rule);
    double fine = apply(fine_rule, window, g);
    double diff = std::abs(fine - coarse);
    double scale = std::max(std::abs(fine), apply_abs(fine_rule, window, g));
    scale = std::max(scale, 1e-300);

    while (diff > opts.rel_tol * scale && fine_rule.order * 2 <= opts.max_order) {
        rule = fine_rule;
        coarse = fine;
        fine_rule = refine(fine_rule);
        fine = apply(fine_rule, window, g);
        diff = std::abs(fine - coarse);
        scale = std::max({std::abs(fine), apply_abs(fine_rule, window, g), 1e-300});
    }
    if (diff > 10.0 * opts.rel_tol * scale)
        throw NonConvergent("quadrature failed to converge: order " + std::to_string(fine_rule.order) +
                            " discrepancy " + std::to_string(diff));
    return fine;
}

Window window_from_log_integrand(const std::function<double(double)>& log_g, double y0) {
    // Safeguarded Newton search for the mode of exp(log_g).
    double y = y0;
    const double h = 1e-4;
    for (int it = 0; it < 40; ++it) {
        const double lp = log_g(y + h), lm = log_g(y - h), l0 = log_g(y);
        const double d1 = (lp - lm) / (2.0 * h);
        const double d2 = (lp - 2.0 * l0 + lm) / (h * h);
        if (!std::isfinite(d1) || !std::isfinite(d2)) break;
        double step = (d2 < -1e-12) ? -d1 / d2 : (d1 > 0 ? 1.0 : -1.0);
        step = std::clamp(step, -10.0, 10.0);
        y += step;
        if (std::abs(step) < 1e-10) break;
    }
    const double lp = log_g(y + h), lm = log_g(y - h), l0 = log_g(y);
    const double d2 = (lp - 2.0 * l0 + lm) / (h * h);
    Window w;
    w.loc = y;
    w.scale = (d2 < -1e-12) ? 1.0 / std::sqrt(-d2) : 4.0;  // wide fallback window
    return w;
}

double expect(const ModelFamily& family, const Vector& theta,
              const std::function<double(double)>& f, const ExpectOptions& opts) {
    family.check_in_domain(theta);

    Window window;
    if (opts.window) {
        window = *opts.window;
    } else if (family.window_hint) {
        window = family.window_hint(theta);
    } else if (!family.space.discrete()) {
        window = window_from_log_integrand(
            [&](double y) { return family.log_density(y, theta); }, 0.0);
    }

    std::vector<Vector> thetas = opts.extra_thetas;
    thetas.push_back(theta);

    auto integrand = [&](double y) { return std::exp(family.log_density(y, theta)) * f(y); };
    return integrate(family.space, integrand, window, opts, thetas);
}

}  // namespace igeo::quad
