#include "igeo/eguchi.hpp"

#include <cmath>

#include "igeo/errors.hpp"
#include "igeo/fd.hpp"

namespace igeo::eguchi {

namespace {

// D as a function of offsets in the theta slot and the theta' slot; the
// diagonal restriction is applied last by evaluating all stencil points
// around (theta, theta).
struct TwoSlot {
    const DivergenceSpec& spec;
    const ModelFamily& family;
    const Vector& theta;

    double operator()(const Vector& du, const Vector& dv) const {
        return divergence(spec, family, theta + du, theta + dv);
    }
};

void require_margin(const ModelFamily& family, const Vector& theta, double h) {
    if (!family.domain.contains_with_margin(theta, 8.0 * h))
        throw StepTooLarge(family.name + ": point within 8h of the domain boundary (h=" +
                           std::to_string(h) + ")");
}

// -d_i d_j' D at the diagonal, one Richardson level.
double metric_entry(const TwoSlot& D, int i, int j, double h, int n) {
    auto scheme = [&](double step) {
        Vector ei = Vector::Zero(n), ej = Vector::Zero(n);
        ei[i] = step;
        ej[j] = step;
        return (D(ei, ej) - D(ei, -ej) - D(-ei, ej) + D(-ei, -ej)) / (4.0 * step * step);
    };
    return -fd::richardson(scheme, h);
}

// -d_i d_j (unprimed) d_k (primed) D at the diagonal.
double third_entry(const TwoSlot& D, int i, int j, int k, double h, int n, bool primed_pair) {
    // primed_pair = false: two derivatives in the theta slot (i, j), one in
    // theta' (k). primed_pair = true: the mirror (dual coefficients).
    auto eval = [&](double a, double b, double c) {
        Vector du = Vector::Zero(n), dv = Vector::Zero(n);
        if (!primed_pair) {
            du[i] += a;
            du[j] += b;
            dv[k] += c;
        } else {
            dv[i] += a;
            dv[j] += b;
            du[k] += c;
        }
        return D(du, dv);
    };
    auto scheme = [&](double step) {
        if (i == j) {
            // pure second difference in the pair slot, central in the other
            return (eval(step, 0.0, step) - eval(step, 0.0, -step) -
                    2.0 * (eval(0.0, 0.0, step) - eval(0.0, 0.0, -step)) +
                    eval(-step, 0.0, step) - eval(-step, 0.0, -step)) /
                   (2.0 * step * step * step);
        }
        double acc = 0.0;
        for (double sa : {+1.0, -1.0})
            for (double sb : {+1.0, -1.0})
                for (double sc : {+1.0, -1.0})
                    acc += sa * sb * sc * eval(sa * step, sb * step, sc * step);
        return acc / (8.0 * step * step * step);
    };
    return -fd::richardson(scheme, h);
}

}  // namespace

MetricTensor induced_metric(const DivergenceSpec& spec, const ModelFamily& family,
                            const Vector& theta, const Options& opts) {
    family.check_in_domain(theta);
    const double h = opts.h2 * fd::step_scale(theta);
    require_margin(family, theta, h);
    const int n = family.dim;
    const TwoSlot D{spec, family, theta};

    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = metric_entry(D, i, j, h, n);

    MetricTensor m;
    m.point = theta;
    m.asymmetry = (g - g.transpose()).cwiseAbs().maxCoeff();
    m.g = 0.5 * (g + g.transpose());
    Eigen::LLT<Matrix> llt(m.g);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("induced metric not positive definite at the requested point");
    return m;
}

ConnectionCoefficients induced_connection(const DivergenceSpec& spec, const ModelFamily& family,
                                          const Vector& theta, const Options& opts) {
    family.check_in_domain(theta);
    const double h = opts.h3 * fd::step_scale(theta);
    require_margin(family, theta, h);
    const int n = family.dim;
    const TwoSlot D{spec, family, theta};

    Tensor3 gamma(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double v = third_entry(D, i, j, k, h, n, false);
                gamma(i, j, k) = v;
                gamma(j, i, k) = v;  // symmetrized over (i, j)
            }
    return {gamma, ConnectionCoefficients::Kind::FirstKind, theta};
}

ConnectionCoefficients induced_dual_connection(const DivergenceSpec& spec,
                                               const ModelFamily& family, const Vector& theta,
                                               const Options& opts) {
    family.check_in_domain(theta);
    const double h = opts.h3 * fd::step_scale(theta);
    require_margin(family, theta, h);
    const int n = family.dim;
    const TwoSlot D{spec, family, theta};

    Tensor3 gamma(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double v = third_entry(D, i, j, k, h, n, true);
                gamma(i, j, k) = v;
                gamma(j, i, k) = v;
            }
    return {gamma, ConnectionCoefficients::Kind::FirstKind, theta};
}

GeometrySnapshot snapshot(const DivergenceSpec& spec, const ModelFamily& family,
                          const Vector& theta, const Options& opts) {
    GeometrySnapshot snap;
    snap.metric = induced_metric(spec, family, theta, opts);
    snap.gamma = induced_connection(spec, family, theta, opts);
    snap.gamma_dual = induced_dual_connection(spec, family, theta, opts);
    snap.source = "eguchi(" + spec.describe() + ")";

    // Compatibility residual: d_i g_jk by central differences of the
    // induced-metric field against Gamma_ijk + Gamma*_ikj.
    const int n = family.dim;
    const double h = opts.h2 * fd::step_scale(theta);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        Vector p = theta, m = theta;
        p[i] += h;
        m[i] -= h;
        const Matrix gp = induced_metric(spec, family, p, opts).g;
        const Matrix gm = induced_metric(spec, family, m, opts).g;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double dg = (gp(j, k) - gm(j, k)) / (2.0 * h);
                res = std::max(res, std::abs(dg - snap.gamma.gamma(i, j, k) -
                                             snap.gamma_dual.gamma(i, k, j)));
            }
    }
    snap.dual_compat_residual = res;
    return snap;
}

}  // namespace igeo::eguchi
