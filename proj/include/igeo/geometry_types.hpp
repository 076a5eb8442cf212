#pragma once

#include <optional>
#include <string>

#include "igeo/errors.hpp"
#include "igeo/linalg.hpp"

namespace igeo {

/// Tagged divergence choice. Alpha admits any order outside {-1, +1};
/// Renyi requires order > 0 and != 1.
struct DivergenceSpec {
    enum class Kind { KL, Alpha, Renyi, Bhattacharyya };
    Kind kind = Kind::KL;
    double order = 0.0;  // alpha or rho

    static DivergenceSpec kl() { return {Kind::KL, 0.0}; }
    static DivergenceSpec alpha(double a);
    static DivergenceSpec renyi(double rho);
    static DivergenceSpec bhattacharyya() { return {Kind::Bhattacharyya, 0.5}; }

    std::string describe() const;
};

/// Names a geometry: its metric (a multiple of the Fisher metric) and its
/// connection (an assembly over the e-connection and the C tensor).
/// Rho labels admit rho > 0 including the closure point rho = 1, where the
/// assembled geometry is the KL one; the Renyi divergence itself excludes 1.
struct GeometryLabel {
    enum class Tag { Fisher, E, M, LC, Alpha, AlphaDual, Rho, RhoDual, Bhattacharyya };
    Tag tag = Tag::LC;
    double order = 0.0;

    static GeometryLabel fisher() { return {Tag::Fisher, 0.0}; }
    static GeometryLabel e() { return {Tag::E, 0.0}; }
    static GeometryLabel m() { return {Tag::M, 0.0}; }
    static GeometryLabel lc() { return {Tag::LC, 0.0}; }
    static GeometryLabel alpha(double a);
    static GeometryLabel alpha_dual(double a);
    static GeometryLabel rho(double r);
    static GeometryLabel rho_dual(double r);
    static GeometryLabel bhattacharyya() { return {Tag::Bhattacharyya, 0.5}; }

    /// Multiple of the Fisher metric this geometry carries.
    double metric_scale() const;
    GeometryLabel dual() const;
    std::string describe() const;
};

struct MetricTensor {
    Matrix g;
    Vector point;
    /// Max |g_ij - g_ji| observed before symmetrization (diagnostic).
    double asymmetry = 0.0;

    /// Throws NotPositiveDefinite / on asymmetry beyond tol.
    void validate(double sym_tol = 1e-8) const;
    Matrix inverse() const;
    double log_det() const;
};

struct ConnectionCoefficients {
    enum class Kind { FirstKind, SecondKind };
    Tensor3 gamma;  // FirstKind: Gamma_ijk; SecondKind: gamma(i,j,k) = Gamma^k_ij
    Kind kind = Kind::FirstKind;
    Vector point;
};

struct CTensor {
    Tensor3 c;
    Vector point;
};

/// Metric + dual pair of first-kind coefficients at one point, with the
/// dual-compatibility diagnostic d_i g_jk - Gamma_ijk - Gamma*_ikj.
struct GeometrySnapshot {
    MetricTensor metric;
    ConnectionCoefficients gamma;
    ConnectionCoefficients gamma_dual;
    std::optional<Tensor3> c_tensor;
    std::string source;  // "eguchi(<divergence>)" or "analytic(<label>)"
    double dual_compat_residual = 0.0;
};

}  // namespace igeo
