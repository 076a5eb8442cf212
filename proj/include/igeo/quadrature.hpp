#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "igeo/sample_space.hpp"

namespace igeo {

class ModelFamily;

namespace quad {

/// Location/scale window used to place continuous nodes.
struct Window {
    double loc = 0.0;
    double scale = 1.0;
};

struct QuadratureRule {
    SampleSpace space;
    /// Standardized nodes: Gauss-Hermite abscissas for RealLine, [-1,1]
    /// Gauss-Legendre abscissas for RealInterval, support points for discrete
    /// spaces. Continuous nodes are re-centered per evaluation via a Window.
    std::vector<double> nodes;
    /// Matching weights. For RealLine these are the total weights
    /// w_i * exp(x_i^2), so that integral ~= sqrt(2)*scale * sum W_i g(y_i).
    std::vector<double> weights;
    int order = 0;
    double target_rel_tol = 1e-10;
};

struct ExpectOptions {
    int start_order = 0;       // 0: use default_order()
    double rel_tol = 1e-10;
    int max_order = 640;
    /// Override the family's node window (used by divergence evaluation,
    /// where the integrand mass sits between two parameter points).
    std::optional<Window> window;
    /// Additional parameter points whose support must be covered when the
    /// space truncates (countable spaces).
    std::vector<Vector> extra_thetas;
};

/// Default starting order; honors the IGEO_QUAD_ORDER environment variable.
int default_order();

/// Raw Gauss-Hermite data for weight exp(-x^2): ascending nodes and total
/// weights w_i * exp(x_i^2). Cached per order; thread-safe.
void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& total_weights);

/// Gauss-Legendre nodes/weights on [-1, 1]. Cached per order; thread-safe.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Builds a rule over the space. `thetas` feed the truncation policy of
/// countable spaces (the union of their supports is covered).
QuadratureRule make_rule(const SampleSpace& space, int order, double target_rel_tol,
                         const std::vector<Vector>& thetas);

/// Same rule with doubled order over the same space.
QuadratureRule refine(const QuadratureRule& rule);

/// Applies a rule to integrand g against the base measure:
/// sum of g over atoms (discrete) or the windowed Gauss rule (continuous).
/// Deterministic left-to-right compensated summation.
double apply(const QuadratureRule& rule, const Window& window,
             const std::function<double(double)>& g);

/// integral of g d(mu) over the space, with order refinement until the
/// k-vs-2k discrepancy is below tol relative to max(|I|, L1 mass).
double integrate(const SampleSpace& space, const std::function<double(double)>& g,
                 const Window& window, const ExpectOptions& opts,
                 const std::vector<Vector>& thetas);

/// E_theta[f] = integral p_theta(y) f(y) d(mu), the expectation backend used by
/// every expectation-based formula in the library.
double expect(const ModelFamily& family, const Vector& theta,
              const std::function<double(double)>& f, const ExpectOptions& opts = {});

/// Laplace-style window for integrands given by their log: Newton search for
/// the mode, scale from the curvature there. Fallback for families on the
/// real line that do not expose a location/scale hint.
Window window_from_log_integrand(const std::function<double(double)>& log_g, double y0);

}  // namespace quad
}  // namespace igeo
