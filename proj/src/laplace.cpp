#include "igeo/laplace.hpp"

#include <cmath>

#include "igeo/errors.hpp"
#include "igeo/fd.hpp"
#include "igeo/tensors.hpp"

namespace igeo::laplace {

namespace {

constexpr double kOuterStep = 1e-5;  // FD step scale for product/outer fields
constexpr double kRhoIdentityTol = 1e-6;

double trace_div(const ConnectionCoefficients& second, const Matrix& jac, const Vector& x) {
    const int n = second.gamma.dim();
    double acc = jac.trace();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += second.gamma(i, j, i) * x[j];
    return acc;
}

double div_with_label(const GeometryLabel& label, const ModelFamily& family,
                      const VectorField& X, const Vector& theta) {
    const ConnectionCoefficients second = tensors::second_kind(label, family, theta);
    return trace_div(second, X.jacobian(theta), X.components(theta));
}

}  // namespace

Vector ScalarField::grad(const Vector& theta) const {
    if (grad_fn) return grad_fn(theta);
    const double h = kOuterStep * fd::step_scale(theta);
    return fd::gradient(value, theta, h);
}

Matrix ScalarField::hess(const Vector& theta) const {
    if (hess_fn) return hess_fn(theta);
    const double h = 1e-4 * fd::step_scale(theta);
    return fd::hessian(value, theta, h);
}

Matrix VectorField::jacobian(const Vector& theta) const {
    if (jacobian_fn) return jacobian_fn(theta);
    const double h = kOuterStep * fd::step_scale(theta);
    return fd::jacobian(components, theta, h);
}

double div_connection(const GeometryLabel& label, const ModelFamily& family,
                      const VectorField& X, const Vector& theta) {
    family.check_in_domain(theta);
    using Tag = GeometryLabel::Tag;
    const double value = div_with_label(label, family, X, theta);

    if (label.tag == Tag::Rho || label.tag == Tag::RhoDual) {
        // div_rho X = rho div_m X + (1-rho) div_e X (dual: coefficients swap).
        const double rho = label.order;
        const double dm = div_with_label(GeometryLabel::m(), family, X, theta);
        const double de = div_with_label(GeometryLabel::e(), family, X, theta);
        const double mixture = label.tag == Tag::Rho ? rho * dm + (1.0 - rho) * de
                                                     : rho * de + (1.0 - rho) * dm;
        const double scale = std::max({1.0, std::abs(value), std::abs(mixture)});
        if (std::abs(value - mixture) > kRhoIdentityTol * scale)
            throw Error("rho divergence mixture identity violated: " + std::to_string(value) +
                        " vs " + std::to_string(mixture));
    }
    return value;
}

double div_lc_metric_form(const std::function<Matrix(const Vector&)>& metric_field,
                          const VectorField& X, const Vector& theta) {
    const double h = kOuterStep * fd::step_scale(theta);
    auto sqrt_det = [&](const Vector& t) {
        Eigen::LLT<Matrix> llt(metric_field(t));
        if (llt.info() != Eigen::Success)
            throw NotPositiveDefinite("metric not positive definite on the divergence stencil");
        double ld = 0.0;
        for (int i = 0; i < llt.matrixL().rows(); ++i) ld += std::log(llt.matrixL()(i, i));
        return std::exp(ld);
    };
    auto weighted = [&](const Vector& t) -> Vector {
        return (sqrt_det(t) * X.components(t)).eval();
    };
    const Matrix jac = fd::jacobian(weighted, theta, h);
    return jac.trace() / sqrt_det(theta);
}

Vector grad(const GeometryLabel& label, const ModelFamily& family,
            const ScalarField& h, const Vector& theta) {
    family.check_in_domain(theta);
    const MetricTensor g = tensors::label_metric(label, family, theta);
    return g.inverse() * h.grad(theta);
}

namespace {

VectorField gradient_field(const GeometryLabel& label, const ModelFamily& family,
                           const ScalarField& h) {
    VectorField v;
    v.components = [label, &family, &h](const Vector& t) { return grad(label, family, h, t); };
    return v;  // jacobian by FD of the product field
}

double laplacian_em(const GeometryLabel& conn_label, const ModelFamily& family,
                    const ScalarField& h, const Vector& theta) {
    // Delta_e / Delta_m / Delta_lc: divergence of the Fisher gradient.
    const VectorField v = gradient_field(GeometryLabel::fisher(), family, h);
    return div_with_label(conn_label, family, v, theta);
}

}  // namespace

double laplacian(const GeometryLabel& label, const ModelFamily& family,
                 const ScalarField& h, const Vector& theta) {
    family.check_in_domain(theta);
    using Tag = GeometryLabel::Tag;
    switch (label.tag) {
        case Tag::E:
        case Tag::M:
        case Tag::LC:
        case Tag::Fisher:
            return laplacian_em(label, family, h, theta);
        case Tag::Alpha:
        case Tag::AlphaDual: {
            const double a = label.tag == Tag::Alpha ? label.order : -label.order;
            const double de = laplacian_em(GeometryLabel::e(), family, h, theta);
            const double dm = laplacian_em(GeometryLabel::m(), family, h, theta);
            return 0.5 * (1.0 + a) * de + 0.5 * (1.0 - a) * dm;
        }
        case Tag::Bhattacharyya: {
            const VectorField v = gradient_field(label, family, h);
            return div_with_label(label, family, v, theta);
        }
        case Tag::Rho:
        case Tag::RhoDual: {
            const double rho = label.order;
            const double de = laplacian_em(GeometryLabel::e(), family, h, theta);
            const double dm = laplacian_em(GeometryLabel::m(), family, h, theta);
            const double assembled = label.tag == Tag::Rho
                                         ? dm + (1.0 / rho - 1.0) * de
                                         : de + (1.0 / rho - 1.0) * dm;
            // Cross-check the direct div(grad) route against the assembly.
            const VectorField v = gradient_field(label, family, h);
            const double direct = div_with_label(label, family, v, theta);
            const double scale = std::max({1.0, std::abs(assembled), std::abs(direct)});
            if (std::abs(assembled - direct) > kRhoIdentityTol * scale)
                throw Error("rho Laplacian assembly/direct mismatch: " +
                            std::to_string(assembled) + " vs " + std::to_string(direct));
            return assembled;
        }
    }
    throw Error("unreachable label");
}

double lc_laplacian_conformal(const ModelFamily& family, const ScalarField& h,
                              const Vector& theta, double rho) {
    if (!(rho > 0.0)) throw InvalidOrder("conformal factor must be positive");
    family.check_in_domain(theta);
    auto metric_field = [&family, rho](const Vector& t) -> Matrix {
        return (rho * tensors::fisher(family, t).g).eval();
    };
    VectorField v;
    v.components = [&family, &h, rho](const Vector& t) -> Vector {
        return (grad(GeometryLabel::fisher(), family, h, t) / rho).eval();
    };
    return div_lc_metric_form(metric_field, v, theta);
}

ReparamCertificate non_reparameterizability_certificate(double rho) {
    if (!(rho > 0.0) || rho == 1.0 || !std::isfinite(rho))
        throw InvalidOrder("certificate requires rho > 0, rho != 1");
    ReparamCertificate cert;
    cert.rho = rho;
    // Delta_rho = Delta_m + (1/rho - 1) Delta_e  vs
    // Delta_alpha = (1-a)/2 Delta_m + (1+a)/2 Delta_e.
    cert.alpha_from_m_coeff = -1.0;                       // (1-a)/2 = 1
    cert.alpha_from_e_coeff = 2.0 * (1.0 / rho - 1.0) - 1.0;  // (1+a)/2 = 1/rho - 1
    cert.rho_forced = 1.0;
    cert.consistent = std::abs(cert.alpha_from_m_coeff - cert.alpha_from_e_coeff) < 1e-15;
    cert.pass = !cert.consistent;
    return cert;
}

}  // namespace igeo::laplace
