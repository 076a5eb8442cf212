#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "igeo/quadrature.hpp"
#include "igeo/sample_space.hpp"

namespace igeo {

/// Marker for whether the chosen coordinates are e-affine or m-affine.
/// Declared by the family, verified by the flatness certificates.
enum class FlatStructure { ExponentialFlat, MixtureFlat, None };

std::string to_string(FlatStructure s);

/// Valid-parameter region: a coordinate box plus an optional predicate for
/// constraints a box cannot express (e.g. the probability simplex).
struct Domain {
    Vector lower;  // -inf allowed
    Vector upper;  // +inf allowed
    std::function<bool(const Vector&)> extra;

    bool contains(const Vector& theta) const;

    /// True when theta stays valid under coordinate perturbations up to r
    /// in one or two coordinates at once (the patterns finite-difference
    /// stencils produce).
    bool contains_with_margin(const Vector& theta, double r) const;

    static Domain box(Vector lo, Vector hi) { return Domain{std::move(lo), std::move(hi), nullptr}; }
};

/// Parametric statistical family over a 1-D sample space: log-density plus
/// first/second parameter derivatives (analytic where available, central
/// finite differences otherwise).
class ModelFamily {
public:
    std::string name;
    int dim = 1;
    SampleSpace space;
    FlatStructure flat_structure = FlatStructure::None;
    Domain domain;
    /// Anchor point for log-prior values and default reports.
    Vector reference;
    /// Interior box used for grids and randomized checks.
    Vector test_lower, test_upper;

    std::function<double(double, const Vector&)> log_density;
    std::function<Vector(double, const Vector&)> score_fn;       // optional
    std::function<Matrix(double, const Vector&)> log_hessian_fn; // optional
    /// Location/scale of p_theta for node placement on continuous spaces.
    std::function<quad::Window(const Vector&)> window_hint;      // optional

    bool has_analytic_score() const { return static_cast<bool>(score_fn); }
    bool has_analytic_hessian() const { return static_cast<bool>(log_hessian_fn); }

    /// d/dtheta_i log p; FD fallback with h = 1e-5 * max(1, |theta|),
    /// Richardson-extrapolated once.
    Vector score(double y, const Vector& theta) const;
    /// d^2/dtheta_i dtheta_j log p; same fallback policy.
    Matrix log_hessian(double y, const Vector& theta) const;

    void check_in_domain(const Vector& theta) const;  // throws DomainError
};

/// Exponential family build recipe: log p = theta.T(y) + k(y) - psi(theta)
/// with psi fixed by normalization.
struct ExponentialFamilySpec {
    std::vector<std::function<double(double)>> sufficient_stats;
    std::function<double(double)> carrier;  // k(y); null means 0
    SampleSpace space;
};

/// Mixture family build recipe: p = eta.F(y) + C(y) with integral F_i = 0 and
/// integral C = 1 over the space.
struct MixtureFamilySpec {
    std::vector<std::function<double(double)>> components;
    std::function<double(double)> carrier;
    SampleSpace space;
};

/// Built-in families:
///   bernoulli-mean, bernoulli-natural, categorical-K (K >= 2),
///   gaussian-loc (sigma fixed, 1 by default), gaussian-loc-scale,
///   poisson-natural.
ModelFamily builtin(const std::string& name);

/// gaussian-loc with a caller-chosen fixed sigma.
ModelFamily gaussian_loc(double sigma);

ModelFamily from_exponential_spec(const ExponentialFamilySpec& spec, Domain domain);
ModelFamily from_mixture_spec(const MixtureFamilySpec& spec, Domain domain);

/// Loads a family from the declarative JSON config format
/// (schemas/family-config-v1.json).
ModelFamily family_from_json_text(const std::string& json_text);
ModelFamily family_from_json_file(const std::string& path);

/// Names of all built-ins (categorical represented by categorical-3),
/// in the order used by verification sweeps.
const std::vector<std::string>& builtin_names();

/// m points spread along the diagonal of the family's interior test box.
std::vector<Vector> interior_grid(const ModelFamily& family, int m);

}  // namespace igeo
