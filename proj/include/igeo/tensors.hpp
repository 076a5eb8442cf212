#pragma once

#include "igeo/family.hpp"
#include "igeo/geometry_types.hpp"

namespace igeo::tensors {

/// Fisher metric g_ij = E[d_i log p * d_j log p].
MetricTensor fisher(const ModelFamily& family, const Vector& theta);

/// Gamma^e_ijk = E[d_i d_j log p * d_k log p].
ConnectionCoefficients e_connection(const ModelFamily& family, const Vector& theta);

/// C_ijk = E[d_i log p * d_j log p * d_k log p], totally symmetric.
CTensor amari_chentsov(const ModelFamily& family, const Vector& theta);

/// The label's metric: metric_scale(label) * Fisher.
MetricTensor label_metric(const GeometryLabel& label, const ModelFamily& family,
                          const Vector& theta);

/// First-kind coefficients assembled from Gamma^e and C:
///   E: G^e            M: G^e + C          LC: G^e + C/2
///   Alpha(a): G^e + (1-a)/2 C             AlphaDual(a): G^e + (1+a)/2 C
///   Rho(r): r G^e + r^2 C                 RhoDual(r): r G^e + r(1-r) C
///   Bhattacharyya: G^e/2 + C/4            Fisher: alias of LC
ConnectionCoefficients connection(const GeometryLabel& label, const ModelFamily& family,
                                  const Vector& theta);

/// Second-kind coefficients Gamma^k_ij = g^{kl} Gamma_ijl, raised with the
/// label's own metric. This is the single code path carrying the rho^{-1}
/// raising factor of the conformal geometries.
ConnectionCoefficients second_kind(const GeometryLabel& label, const ModelFamily& family,
                                   const Vector& theta);

/// Raises given first-kind coefficients with an explicit metric.
ConnectionCoefficients raise_with_metric(const ConnectionCoefficients& first_kind,
                                         const Matrix& metric);

/// Analytic snapshot (metric, Gamma, Gamma*, C) for the label's geometry.
GeometrySnapshot snapshot(const GeometryLabel& label, const ModelFamily& family,
                          const Vector& theta);

/// Levi-Civita first kind from the metric-derivative Christoffel formula
/// (1/2)(d_i g_jl + d_j g_il - d_l g_ij), metric field differenced centrally.
/// Cross-check against the e/m average.
ConnectionCoefficients lc_from_metric_fd(const std::function<Matrix(const Vector&)>& metric_field,
                                         const Vector& theta, double h);

/// Report for the sqrt(rho) chart transform theta' = sqrt(rho) * theta on a
/// 1-D family: does the conformal rescaling make the rho-geometry an
/// alpha-geometry?
struct SqrtRhoChartReport {
    double rho = 0.0;

    double metric_new_chart = 0.0;      // transformed rho-metric component
    double fisher_old_chart = 0.0;
    double metric_undo_residual = 0.0;  // |transformed - old-chart Fisher|

    double gamma_new_chart = 0.0;       // transformed Gamma^(rho), first kind
    double gamma_scaling_residual = 0.0;  // vs rho^{-3/2} * original

    // Residuals of the transformed primal/dual coefficients against the two
    // closed forms rho^{-1/2} G^e + sqrt(rho) C  and
    // rho^{-1/2} G^e + (1-rho) rho^{-1/2} C. The latter display matches the
    // transform of the dual connection.
    double primal_vs_direct_form = 0.0;
    double primal_vs_display_form = 0.0;
    double dual_vs_display_form = 0.0;

    // Solving Gamma' = G^e' + (1-a)/2 C' for a from the primal and from the
    // dual transformed coefficients. A single consistent a exists only in
    // degenerate cases; the gap is the mismatch certificate.
    double alpha_from_primal = 0.0;
    double alpha_from_dual = 0.0;
    double alpha_mismatch = 0.0;
    bool alpha_solvable = false;

    /// |second kind of Gamma' - second kind of LC(g')|; ~0 at rho = 1/2
    /// where the transformed geometry is self-dual.
    double lc_second_kind_residual = 0.0;
};

SqrtRhoChartReport sqrt_rho_chart_check(const ModelFamily& family, const Vector& theta,
                                        double rho);

}  // namespace igeo::tensors
