#pragma once

#include <functional>

#include "igeo/family.hpp"
#include "igeo/geometry_types.hpp"

namespace igeo::laplace {

/// Scalar function on parameter space with derivative access. Missing
/// derivatives fall back to central differences of value (flagged).
struct ScalarField {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> grad_fn;  // optional
    std::function<Matrix(const Vector&)> hess_fn;  // optional

    Vector grad(const Vector& theta) const;
    Matrix hess(const Vector& theta) const;
    bool analytic_grad() const { return static_cast<bool>(grad_fn); }
};

struct VectorField {
    std::function<Vector(const Vector&)> components;
    std::function<Matrix(const Vector&)> jacobian_fn;  // optional; row i = grad of X^i

    Matrix jacobian(const Vector& theta) const;
    bool analytic_jacobian() const { return static_cast<bool>(jacobian_fn); }
};

/// div X = d_i X^i + Gamma^i_ij X^j with the label's second-kind
/// coefficients. Rho labels are cross-checked against the m/e mixture
/// identity rho * div_m + (1-rho) * div_e.
double div_connection(const GeometryLabel& label, const ModelFamily& family,
                      const VectorField& X, const Vector& theta);

/// Determinant form of the Levi-Civita divergence,
/// (1 / sqrt(det g)) d_j ( sqrt(det g) X^j ), differenced centrally.
double div_lc_metric_form(const std::function<Matrix(const Vector&)>& metric_field,
                          const VectorField& X, const Vector& theta);

/// grad h = g^{ij} d_j h with the label's metric (rho^{-1} * Fisher gradient
/// for the Rho labels).
Vector grad(const GeometryLabel& label, const ModelFamily& family,
            const ScalarField& h, const Vector& theta);

/// Laplace-Beltrami operator of the label applied to h.
///   E / M / LC / Fisher / Bhattacharyya: div_label(grad_label h) directly.
///   Alpha(a):  (1+a)/2 Delta_e + (1-a)/2 Delta_m.
///   Rho(r):    Delta_m + (1/r - 1) Delta_e  (canonical assembled form;
///              div_rho(grad_rho h) is computed as a cross-check).
///   RhoDual(r): Delta_e + (1/r - 1) Delta_m, mirroring the dual assembly.
double laplacian(const GeometryLabel& label, const ModelFamily& family,
                 const ScalarField& h, const Vector& theta);

/// Levi-Civita Laplacian with the conformally scaled metric rho * Fisher:
/// equals rho^{-1} times the rho = 1 value.
double lc_laplacian_conformal(const ModelFamily& family, const ScalarField& h,
                              const Vector& theta, double rho);

/// Certificate that no alpha reproduces the rho-Laplacian: the m-coefficient
/// forces alpha = -1, which forces 1/rho - 1 = 0, excluded for valid rho.
struct ReparamCertificate {
    double rho = 0.0;
    double alpha_from_m_coeff = 0.0;   // (1-a)/2 = 1  ->  a = -1
    double alpha_from_e_coeff = 0.0;   // (1+a)/2 = 1/rho - 1
    double rho_forced = 1.0;           // the only rho where both agree
    bool consistent = false;
    bool pass = false;                 // PASS when inconsistent
};

ReparamCertificate non_reparameterizability_certificate(double rho);

}  // namespace igeo::laplace
