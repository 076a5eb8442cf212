#pragma once

#include "igeo/divergence.hpp"
#include "igeo/family.hpp"
#include "igeo/geometry_types.hpp"

namespace igeo::eguchi {

/// Finite-difference steps for the mixed partials of a divergence at the
/// diagonal. Steps are multiplied by max(1, |theta|_inf); one Richardson
/// level is applied on each. Full central stencils only: points closer than
/// 8*h to the domain boundary are rejected (StepTooLarge).
struct Options {
    double h2 = 1e-4;  // second-derivative base step
    double h3 = 5e-3;  // third-derivative base step
};

/// g_ij = -d_i d_j' D at theta = theta', symmetrized; asymmetry recorded.
MetricTensor induced_metric(const DivergenceSpec& spec, const ModelFamily& family,
                            const Vector& theta, const Options& opts = {});

/// Gamma_ijk = -d_i d_j d_k' D at the diagonal, symmetrized over (i, j).
ConnectionCoefficients induced_connection(const DivergenceSpec& spec, const ModelFamily& family,
                                          const Vector& theta, const Options& opts = {});

/// Gamma*_ijk = -d_k d_i' d_j' D at the diagonal.
ConnectionCoefficients induced_dual_connection(const DivergenceSpec& spec, const ModelFamily& family,
                                               const Vector& theta, const Options& opts = {});

/// All three inductions plus the dual-compatibility residual
/// max |d_i g_jk - Gamma_ijk - Gamma*_ikj| with d_i g_jk by central
/// differences of the induced-metric field.
GeometrySnapshot snapshot(const DivergenceSpec& spec, const ModelFamily& family,
                          const Vector& theta, const Options& opts = {});

}  // namespace igeo::eguchi
