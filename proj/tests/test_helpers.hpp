#pragma once

#include <cmath>

#include "igeo/linalg.hpp"

namespace igeo::testing {

inline Vector v1(double a) {
    Vector v(1);
    v[0] = a;
    return v;
}

inline Vector v2(double a, double b) {
    Vector v(2);
    v[0] = a;
    v[1] = b;
    return v;
}

// Exact two-term oracles for the Bernoulli family in the mean chart,
// independent of the library's expectation path.
inline double bernoulli_fisher(double p) { return 1.0 / (p * (1.0 - p)); }
inline double bernoulli_e_gamma(double p) {
    const double q = 1.0 - p;
    return p * (-1.0 / (p * p)) * (1.0 / p) + q * (-1.0 / (q * q)) * (-1.0 / q);
}
inline double bernoulli_c(double p) {
    const double q = 1.0 - p;
    return p / (p * p * p) - q / (q * q * q);
}

}  // namespace igeo::testing
