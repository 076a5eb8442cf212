#include "igeo/priors.hpp"

#include <cmath>

#include "igeo/errors.hpp"
#include "igeo/fd.hpp"
#include "igeo/tensors.hpp"

namespace igeo::priors {

namespace {

constexpr double kClosednessTol = 1e-4;
constexpr double kPathStability = 1e-8;

double exponent_on_exponential_chart(const GeometryLabel& label) {
    using Tag = GeometryLabel::Tag;
    switch (label.tag) {
        case Tag::E: return 0.0;
        case Tag::M: return 1.0;
        case Tag::Fisher:
        case Tag::LC:
        case Tag::Bhattacharyya: return 0.5;
        case Tag::Alpha: return 0.5 * (1.0 - label.order);
        case Tag::AlphaDual: return 0.5 * (1.0 + label.order);
        case Tag::Rho: return label.order;
        case Tag::RhoDual: return 1.0 - label.order;
    }
    throw Error("unreachable label");
}

}  // namespace

double covolume_exponent(const GeometryLabel& label, FlatStructure structure) {
    switch (structure) {
        case FlatStructure::ExponentialFlat:
            return exponent_on_exponential_chart(label);
        case FlatStructure::MixtureFlat:
            // Primal and dual swap between the e- and m-structures.
            return exponent_on_exponential_chart(label.dual());
        case FlatStructure::None:
            throw StructureMismatch("closed-form covolumes exist only on flat charts");
    }
    throw Error("unreachable structure");
}

double closed_form_covolume(const GeometryLabel& label, FlatStructure structure,
                            const ModelFamily& family, const Vector& theta) {
    if (structure == FlatStructure::None || family.flat_structure != structure)
        throw StructureMismatch("family '" + family.name + "' does not carry the requested " +
                                to_string(structure) + " chart");
    family.check_in_domain(theta);
    const double q = covolume_exponent(label, structure);
    const double ld = tensors::fisher(family, theta).log_det();
    const double ld0 = tensors::fisher(family, family.reference).log_det();
    return q * (ld - ld0);
}

Vector log_derivative_from_connection(const GeometryLabel& label, const ModelFamily& family,
                                      const Vector& theta) {
    family.check_in_domain(theta);
    const ConnectionCoefficients second = tensors::second_kind(label, family, theta);
    const int n = family.dim;
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += second.gamma(j, i, j);  // Gamma^j_ji
        v[i] = acc;
    }
    return v;
}

Vector hartigan_log_derivative(const ModelFamily& family, double alpha_h, const Vector& theta) {
    family.check_in_domain(theta);
    const int n = family.dim;
    const Matrix finv = tensors::fisher(family, theta).inverse();
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double e = quad::expect(family, theta, [&](double y) {
                    const Vector s = family.score(y, theta);
                    const Matrix h = family.log_hessian(y, theta);
                    return alpha_h * s[i] * s[j] * s[k] + h(i, j) * s[k];
                });
                acc += finv(j, k) * e;
            }
        v[i] = acc;
    }
    return v;
}

bool hartigan_within_renyi_range(double alpha_h) {
    return alpha_h > 0.0 && alpha_h != 1.0;
}

double reconstruct_log_prior(const std::function<Vector(const Vector&)>& field,
                             const ModelFamily& family, const Vector& theta,
                             const Vector& theta0, int path_steps) {
    family.check_in_domain(theta);
    family.check_in_domain(theta0);
    if (path_steps < 1) throw Error("path_steps must be positive");

    const Vector dir = theta - theta0;
    auto point = [&](double t) -> Vector { return theta0 + t * dir; };

    // The straight path must stay inside the domain.
    const int probes = std::max(16, path_steps);
    for (int i = 0; i <= probes; ++i) {
        if (!family.domain.contains(point(double(i) / probes)))
            throw PathExitsDomain("straight path from the reference exits the domain");
    }

    // Closedness: d_i v_j must be symmetric for the line integral to define
    // a function; checked midway and at the endpoint.
    const double h = 1e-4 * fd::step_scale(theta);
    for (double t : {0.5, 1.0}) {
        const Vector p = point(t);
        if (!family.domain.contains_with_margin(p, h)) continue;
        const Matrix jac = fd::jacobian(field, p, h);
        const double asym = (jac - jac.transpose()).cwiseAbs().maxCoeff();
        if (asym > kClosednessTol)
            throw NonClosedField("log-derivative field closedness residual " +
                                 std::to_string(asym));
    }

    auto trapezoid = [&](int steps) {
        CompensatedSum sum;
        Vector prev = field(theta0);
        for (int i = 1; i <= steps; ++i) {
            const Vector cur = field(point(double(i) / steps));
            sum.add(0.5 * (prev + cur).dot(dir) / steps);
            prev = cur;
        }
        return sum.value();
    };

    int steps = path_steps;
    double value = trapezoid(steps);
    for (int round = 0; round < 12; ++round) {
        steps *= 2;
        const double refined = trapezoid(steps);
        const double change = std::abs(refined - value);
        value = refined;
        if (change < kPathStability) break;
    }
    return value;
}

double parallelity_residual(const GeometryLabel& label, const ModelFamily& family,
                            const Vector& theta) {
    if (family.flat_structure == FlatStructure::None)
        throw StructureMismatch("parallelity residual needs a flat-chart family");
    family.check_in_domain(theta);
    const FlatStructure structure = family.flat_structure;
    auto log_cov = [&](const Vector& t) {
        return closed_form_covolume(label, structure, family, t);
    };
    const double h = 1e-4 * fd::step_scale(theta);
    const Vector fd_grad = fd::gradient(log_cov, theta, h);
    const Vector analytic = log_derivative_from_connection(label, family, theta);
    return (fd_grad - analytic).cwiseAbs().maxCoeff();
}

CovolumeField covolume_field(const GeometryLabel& label, const ModelFamily& family) {
    CovolumeField f;
    f.label = label.describe();
    f.family_structure = family.flat_structure;
    f.reference = family.reference;
    f.log_conformal_prefactor = 0.5 * family.dim * std::log(label.metric_scale());
    f.log_derivative = [label, family](const Vector& t) {
        return log_derivative_from_connection(label, family, t);
    };
    if (family.flat_structure != FlatStructure::None) {
        const FlatStructure structure = family.flat_structure;
        f.log_value = [label, structure, family](const Vector& t) {
            return closed_form_covolume(label, structure, family, t);
        };
    } else {
        auto deriv = f.log_derivative;
        const Vector ref = family.reference;
        f.log_value = [deriv, family, ref](const Vector& t) {
            return reconstruct_log_prior(deriv, family, t, ref, 64);
        };
    }
    return f;
}

CovolumeField hartigan_covolume_field(const ModelFamily& family, double alpha_h) {
    CovolumeField f;
    f.label = "hartigan(" + std::to_string(alpha_h) + ")";
    f.family_structure = family.flat_structure;
    f.reference = family.reference;
    f.log_derivative = [family, alpha_h](const Vector& t) {
        return hartigan_log_derivative(family, alpha_h, t);
    };
    auto deriv = f.log_derivative;
    const Vector ref = family.reference;
    f.log_value = [deriv, family, ref](const Vector& t) {
        return reconstruct_log_prior(deriv, family, t, ref, 64);
    };
    return f;
}

DualityReparamReport duality_and_reparam_report(const ModelFamily& e_chart,
                                                const ModelFamily& m_chart, double rho) {
    if (e_chart.flat_structure != FlatStructure::ExponentialFlat)
        throw StructureMismatch("first chart must be exponential-flat");
    if (m_chart.flat_structure != FlatStructure::MixtureFlat)
        throw StructureMismatch("second chart must be mixture-flat");
    if (!(rho > 0.0)) throw InvalidOrder("rho must be positive");

    DualityReparamReport rep;
    rep.rho = rho;
    rep.alpha = 1.0 - 2.0 * rho;

    const GeometryLabel r = GeometryLabel::rho(rho);
    const GeometryLabel rd = GeometryLabel::rho_dual(rho);
    rep.exp_e_primal = covolume_exponent(r, FlatStructure::ExponentialFlat);
    rep.exp_e_dual = covolume_exponent(rd, FlatStructure::ExponentialFlat);
    rep.exp_m_primal = covolume_exponent(r, FlatStructure::MixtureFlat);
    rep.exp_m_dual = covolume_exponent(rd, FlatStructure::MixtureFlat);

    rep.swap_identity_exact =
        rep.exp_e_dual == rep.exp_m_primal && rep.exp_e_primal == rep.exp_m_dual;

    // alpha = 1 - 2 rho lands exactly on the alpha-prior exponents; the
    // conformal prefactor rho^{n/2} stays outside the exponent comparison.
    if (rep.alpha != -1.0 && rep.alpha != 1.0) {
        const GeometryLabel a = GeometryLabel::alpha(rep.alpha);
        const GeometryLabel ad = GeometryLabel::alpha_dual(rep.alpha);
        rep.alpha_exp_e_primal = covolume_exponent(a, FlatStructure::ExponentialFlat);
        rep.alpha_exp_e_dual = covolume_exponent(ad, FlatStructure::ExponentialFlat);
    } else {
        // rho = 1 maps to alpha = -1, whose covolume exponents are the KL
        // ones (1 and 0 on the exponential chart).
        rep.alpha_exp_e_primal = 1.0;
        rep.alpha_exp_e_dual = 0.0;
    }
    rep.reparam_identity_exact = rep.alpha_exp_e_primal == rep.exp_e_primal &&
                                 rep.alpha_exp_e_dual == rep.exp_e_dual;
    rep.log_conformal_prefactor = 0.5 * e_chart.dim * std::log(rho);

    // The alternative translation rho = (1+alpha)/2 would require
    // (1+alpha)/2 == (1-alpha)/2, true only at alpha = 0 (rho = 1/2).
    rep.alternate_map_consistent = rho == 0.5;
    return rep;
}

}  // namespace igeo::priors
