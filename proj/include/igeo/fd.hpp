#pragma once

#include <functional>

#include "igeo/linalg.hpp"

namespace igeo::fd {

/// Step scale max(1, |theta|_inf) shared by every finite-difference routine.
inline double step_scale(const Vector& theta) {
    double m = 1.0;
    for (int i = 0; i < theta.size(); ++i) m = std::max(m, std::abs(theta[i]));
    return m;
}

/// One Richardson level for an O(h^2) central scheme: (4 D(h/2) - D(h)) / 3.
inline double richardson(const std::function<double(double)>& scheme, double h) {
    return (4.0 * scheme(h / 2.0) - scheme(h)) / 3.0;
}

/// Central gradient of a scalar function of theta, Richardson-extrapolated once.
Vector gradient(const std::function<double(const Vector&)>& f, const Vector& theta, double h);

/// Central Hessian (pure and mixed second differences), Richardson once.
Matrix hessian(const std::function<double(const Vector&)>& f, const Vector& theta, double h);

/// Central Jacobian of a vector-valued function, Richardson once.
/// Row i holds the gradient of component i.
Matrix jacobian(const std::function<Vector(const Vector&)>& f, const Vector& theta, double h);

}  // namespace igeo::fd
