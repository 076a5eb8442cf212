#pragma once

#include <functional>
#include <optional>
#include <string>

#include "igeo/family.hpp"
#include "igeo/geometry_types.hpp"

namespace igeo::priors {

/// Prior density known up to a positive constant: a log-derivative field plus
/// a reconstructed log-value anchored as log cov(reference) = 0.
struct CovolumeField {
    std::string label;  // geometry label or "hartigan(a)"
    FlatStructure family_structure = FlatStructure::None;
    std::function<Vector(const Vector&)> log_derivative;
    std::function<double(const Vector&)> log_value;  // anchored at reference
    Vector reference;
    /// (n/2) log(metric scale): the conformal prefactor of the volume form,
    /// carried separately from the anchored log values.
    double log_conformal_prefactor = 0.0;
};

/// Exponent q in cov ~ (det F)^q for the label on the given flat structure.
/// Exponential chart:  Rho -> rho, RhoDual -> 1-rho, Alpha -> (1-a)/2,
/// AlphaDual -> (1+a)/2, M -> 1, E -> 0, LC/Fisher/Bhattacharyya -> 1/2.
/// Mixture chart: primal/dual exponents swapped.
double covolume_exponent(const GeometryLabel& label, FlatStructure structure);

/// Anchored log covolume q * (log det F(theta) - log det F(reference)).
/// The structure must match the family's declared flat chart.
double closed_form_covolume(const GeometryLabel& label, FlatStructure structure,
                            const ModelFamily& family, const Vector& theta);

/// d_i log cov = Gamma^j_ji contraction of the label's second-kind
/// coefficients; valid for any family, flat chart or not.
Vector log_derivative_from_connection(const GeometryLabel& label, const ModelFamily& family,
                                      const Vector& theta);

/// Hartigan's prior family:
/// d_i log pi = (F^{-1})^{jk} E[a_H d_i l d_j l d_k l + d_i d_j l d_k l].
Vector hartigan_log_derivative(const ModelFamily& family, double alpha_h, const Vector& theta);

/// True when alpha_h lies in the order range of the Renyi divergence
/// ((0,1) or (1,inf)); values outside still define a prior field.
bool hartigan_within_renyi_range(double alpha_h);

/// Trapezoid line integral of a log-derivative field along the straight path
/// reference -> theta, with step-doubling until stable below 1e-8.
/// Throws PathExitsDomain / NonClosedField.
double reconstruct_log_prior(const std::function<Vector(const Vector&)>& field,
                             const ModelFamily& family, const Vector& theta,
                             const Vector& theta0, int path_steps);

/// max_i |d_i log cov_closed_form (FD) - Gamma^j_ji (analytic)|: the numeric
/// check that the label's volume form is annihilated by its connection.
double parallelity_residual(const GeometryLabel& label, const ModelFamily& family,
                            const Vector& theta);

/// Field bundle for a label: closed form on flat charts, path-reconstructed
/// log values otherwise.
CovolumeField covolume_field(const GeometryLabel& label, const ModelFamily& family);
CovolumeField hartigan_covolume_field(const ModelFamily& family, double alpha_h);

struct DualityReparamReport {
    double rho = 0.0;
    double alpha = 0.0;  // 1 - 2 rho
    double exp_e_primal = 0.0, exp_e_dual = 0.0;
    double exp_m_primal = 0.0, exp_m_dual = 0.0;
    double alpha_exp_e_primal = 0.0, alpha_exp_e_dual = 0.0;
    bool swap_identity_exact = false;     // exp_e_dual == exp_m_primal etc.
    bool reparam_identity_exact = false;  // rho exponents == alpha exponents
    double log_conformal_prefactor = 0.0; // (n/2) log rho, reported separately
    /// The alternative map rho = (1+alpha)/2 matches the exponents only at
    /// the fixed point rho = 1/2; reported for transparency.
    bool alternate_map_consistent = false;
};

/// Exponent-level duality between an e-flat and an m-flat chart of the same
/// family, and the rho <-> alpha covolume translation under alpha = 1 - 2 rho.
DualityReparamReport duality_and_reparam_report(const ModelFamily& e_chart,
                                                const ModelFamily& m_chart, double rho);

}  // namespace igeo::priors
