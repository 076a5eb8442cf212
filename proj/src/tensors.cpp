#include "igeo/tensors.hpp"

#include <cmath>

#include "igeo/errors.hpp"
#include "igeo/fd.hpp"

namespace igeo::tensors {

namespace {

// (e-coefficient, C-coefficient) of the label's first-kind assembly over
// (Gamma^e, C).
std::pair<double, double> assembly_coefficients(const GeometryLabel& label) {
    using Tag = GeometryLabel::Tag;
    switch (label.tag) {
        case Tag::E: return {1.0, 0.0};
        case Tag::M: return {1.0, 1.0};
        case Tag::Fisher:  // Fisher names the metric; its connection is Levi-Civita.
        case Tag::LC: return {1.0, 0.5};
        case Tag::Alpha: return {1.0, 0.5 * (1.0 - label.order)};
        case Tag::AlphaDual: return {1.0, 0.5 * (1.0 + label.order)};
        case Tag::Rho: return {label.order, label.order * label.order};
        case Tag::RhoDual: return {label.order, label.order * (1.0 - label.order)};
        case Tag::Bhattacharyya: return {0.5, 0.25};
    }
    throw Error("unreachable label");
}

}  // namespace

MetricTensor fisher(const ModelFamily& family, const Vector& theta) {
    family.check_in_domain(theta);
    const int n = family.dim;
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = quad::expect(family, theta, [&](double y) {
                const Vector s = family.score(y, theta);
                return s[i] * s[j];
            });
            g(i, j) = g(j, i) = v;
        }
    MetricTensor m{g, theta, 0.0};
    m.validate();
    return m;
}

ConnectionCoefficients e_connection(const ModelFamily& family, const Vector& theta) {
    family.check_in_domain(theta);
    const int n = family.dim;
    Tensor3 gamma(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double v = quad::expect(family, theta, [&](double y) {
                    const Matrix h = family.log_hessian(y, theta);
                    const Vector s = family.score(y, theta);
                    return h(i, j) * s[k];
                });
                gamma(i, j, k) = v;
                gamma(j, i, k) = v;
            }
    return {gamma, ConnectionCoefficients::Kind::FirstKind, theta};
}

CTensor amari_chentsov(const ModelFamily& family, const Vector& theta) {
    family.check_in_domain(theta);
    const int n = family.dim;
    Tensor3 c(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const double v = quad::expect(family, theta, [&](double y) {
                    const Vector s = family.score(y, theta);
                    return s[i] * s[j] * s[k];
                });
                // totally symmetric by construction
                c(i, j, k) = c(i, k, j) = c(j, i, k) = v;
                c(j, k, i) = c(k, i, j) = c(k, j, i) = v;
            }
    return {c, theta};
}

MetricTensor label_metric(const GeometryLabel& label, const ModelFamily& family,
                          const Vector& theta) {
    MetricTensor m = fisher(family, theta);
    m.g *= label.metric_scale();
    return m;
}

ConnectionCoefficients connection(const GeometryLabel& label, const ModelFamily& family,
                                  const Vector& theta) {
    const auto [ce, cc] = assembly_coefficients(label);
    const ConnectionCoefficients ge = e_connection(family, theta);
    const CTensor c = amari_chentsov(family, theta);
    Tensor3 gamma = ce * ge.gamma + cc * c.c;
    return {gamma, ConnectionCoefficients::Kind::FirstKind, theta};
}

ConnectionCoefficients raise_with_metric(const ConnectionCoefficients& first_kind,
                                         const Matrix& metric) {
    if (first_kind.kind != ConnectionCoefficients::Kind::FirstKind)
        throw Error("raise_with_metric expects first-kind coefficients");
    const int n = first_kind.gamma.dim();
    Eigen::LLT<Matrix> llt(metric);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("cannot raise indices: metric not positive definite");
    const Matrix ginv = llt.solve(Matrix::Identity(n, n));
    Tensor3 second(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l) acc += ginv(k, l) * first_kind.gamma(i, j, l);
                second(i, j, k) = acc;  // Gamma^k_ij
            }
    return {second, ConnectionCoefficients::Kind::SecondKind, first_kind.point};
}

ConnectionCoefficients second_kind(const GeometryLabel& label, const ModelFamily& family,
                                   const Vector& theta) {
    return raise_with_metric(connection(label, family, theta),
                             label_metric(label, family, theta).g);
}

GeometrySnapshot snapshot(const GeometryLabel& label, const ModelFamily& family,
                          const Vector& theta) {
    GeometrySnapshot snap;
    snap.metric = label_metric(label, family, theta);
    snap.gamma = connection(label, family, theta);
    snap.gamma_dual = connection(label.dual(), family, theta);
    snap.c_tensor = amari_chentsov(family, theta).c;
    snap.source = "analytic(" + label.describe() + ")";

    // Dual metric compatibility residual with the label's own metric field.
    const double h = 1e-4 * fd::step_scale(theta);
    const int n = family.dim;
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        auto entry = [&](double step, int j, int k) {
            Vector p = theta, m = theta;
            p[i] += step;
            m[i] -= step;
            return (label_metric(label, family, p).g(j, k) -
                    label_metric(label, family, m).g(j, k)) /
                   (2.0 * step);
        };
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double dg = fd::richardson([&](double s) { return entry(s, j, k); }, h);
                res = std::max(res, std::abs(dg - snap.gamma.gamma(i, j, k) -
                                             snap.gamma_dual.gamma(i, k, j)));
            }
    }
    snap.dual_compat_residual = res;
    return snap;
}

ConnectionCoefficients lc_from_metric_fd(const std::function<Matrix(const Vector&)>& metric_field,
                                         const Vector& theta, double h) {
    const Matrix g0 = metric_field(theta);
    const int n = static_cast<int>(g0.rows());
    // d_i g_jk by Richardson-extrapolated central differences.
    std::vector<Matrix> dg(n);
    for (int i = 0; i < n; ++i) {
        auto central = [&](double step) -> Matrix {
            Vector p = theta, m = theta;
            p[i] += step;
            m[i] -= step;
            return ((metric_field(p) - metric_field(m)) / (2.0 * step)).eval();
        };
        dg[i] = ((4.0 * central(h / 2.0) - central(h)) / 3.0).eval();
    }
    Tensor3 gamma(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                gamma(i, j, l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
    return {gamma, ConnectionCoefficients::Kind::FirstKind, theta};
}

SqrtRhoChartReport sqrt_rho_chart_check(const ModelFamily& family, const Vector& theta,
                                        double rho) {
    if (family.dim != 1) throw Error("sqrt-rho chart check is defined for 1-D families");
    if (!(rho > 0.0)) throw InvalidOrder("rho must be positive");
    family.check_in_domain(theta);

    SqrtRhoChartReport rep;
    rep.rho = rho;
    const double s = std::sqrt(rho);

    // Old-chart ingredients.
    const double fisher_old = fisher(family, theta).g(0, 0);
    const double ge_old = e_connection(family, theta).gamma(0, 0, 0);
    const double c_old = amari_chentsov(family, theta).c(0, 0, 0);
    const double gamma_rho_old = rho * ge_old + rho * rho * c_old;
    const double gamma_rho_dual_old = rho * ge_old + rho * (1.0 - rho) * c_old;

    // Reparameterized family in the chart theta' = sqrt(rho) * theta.
    ModelFamily reparam = family;
    reparam.name = family.name + "@sqrt-rho-chart";
    reparam.domain.lower = s * family.domain.lower;
    reparam.domain.upper = s * family.domain.upper;
    reparam.test_lower = s * family.test_lower;
    reparam.test_upper = s * family.test_upper;
    reparam.reference = s * family.reference;
    auto base_logp = family.log_density;
    reparam.log_density = [base_logp, s](double y, const Vector& tp) {
        return base_logp(y, tp / s);
    };
    auto base_score = family.score_fn;
    reparam.score_fn = base_score
                           ? std::function<Vector(double, const Vector&)>(
                                 [base_score, s](double y, const Vector& tp) -> Vector {
                                     return base_score(y, tp / s) / s;
                                 })
                           : nullptr;
    auto base_hess = family.log_hessian_fn;
    reparam.log_hessian_fn = base_hess
                                 ? std::function<Matrix(double, const Vector&)>(
                                       [base_hess, s](double y, const Vector& tp) -> Matrix {
                                           return base_hess(y, tp / s) / (s * s);
                                       })
                                 : nullptr;
    auto base_hint = family.window_hint;
    reparam.window_hint = base_hint ? std::function<quad::Window(const Vector&)>(
                                          [base_hint, s](const Vector& tp) {
                                              return base_hint(tp / s);
                                          })
                                    : nullptr;

    const Vector theta_new = s * theta;
    // Intrinsic tensors of the family viewed in the new chart.
    const double ge_new = e_connection(reparam, theta_new).gamma(0, 0, 0);
    const double c_new = amari_chentsov(reparam, theta_new).c(0, 0, 0);
    const double metric_new = rho * fisher(reparam, theta_new).g(0, 0);
    const double gamma_new = rho * ge_new + rho * rho * c_new;
    const double gamma_dual_new = rho * ge_new + rho * (1.0 - rho) * c_new;

    rep.metric_new_chart = metric_new;
    rep.fisher_old_chart = fisher_old;
    rep.metric_undo_residual = std::abs(metric_new - fisher_old);

    rep.gamma_new_chart = gamma_new;
    rep.gamma_scaling_residual = std::abs(gamma_new - gamma_rho_old / (s * s * s));

    // Closed forms in old-chart tensor values, transform applied afterwards.
    const double direct_form = (ge_old / s + s * c_old);                  // rho^{-3/2}(rho Ge + rho^2 C)
    const double display_form = (ge_old / s + (1.0 - rho) / s * c_old);   // the dual's transform
    rep.primal_vs_direct_form = std::abs(gamma_rho_old / (s * s * s) - direct_form);
    rep.primal_vs_display_form = std::abs(gamma_rho_old / (s * s * s) - display_form);
    rep.dual_vs_display_form = std::abs(gamma_rho_dual_old / (s * s * s) - display_form);

    // Match against the alpha form Gamma = Ge' + (1-a)/2 C' from the primal
    // and from the dual transformed coefficients.
    if (std::abs(c_new) > 1e-10) {
        rep.alpha_solvable = true;
        rep.alpha_from_primal = 1.0 - 2.0 * (gamma_new - ge_new) / c_new;
        rep.alpha_from_dual = 2.0 * (gamma_dual_new - ge_new) / c_new - 1.0;
        rep.alpha_mismatch = std::abs(rep.alpha_from_primal - rep.alpha_from_dual);
    }

    // Second kind with the transformed metric vs Levi-Civita of that metric.
    auto transformed_metric_field = [&](const Vector& tp) -> Matrix {
        Matrix g(1, 1);
        g(0, 0) = rho * fisher(reparam, tp).g(0, 0);
        return g;
    };
    const double h = 1e-4 * fd::step_scale(theta_new);
    const double lc_first = lc_from_metric_fd(transformed_metric_field, theta_new, h).gamma(0, 0, 0);
    rep.lc_second_kind_residual = std::abs(gamma_new / metric_new - lc_first / metric_new);
    return rep;
}

}  // namespace igeo::tensors
