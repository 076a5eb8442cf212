#include "igeo/fd.hpp"

namespace igeo::fd {

Vector gradient(const std::function<double(const Vector&)>& f, const Vector& theta, double h) {
    const int n = static_cast<int>(theta.size());
    Vector g(n);
    for (int i = 0; i < n; ++i) {
        auto central = [&](double step) {
            Vector p = theta, m = theta;
            p[i] += step;
            m[i] -= step;
            return (f(p) - f(m)) / (2.0 * step);
        };
        g[i] = richardson(central, h);
    }
    return g;
}

Matrix hessian(const std::function<double(const Vector&)>& f, const Vector& theta, double h) {
    const int n = static_cast<int>(theta.size());
    Matrix out(n, n);
    const double f0 = f(theta);
    for (int i = 0; i < n; ++i) {
        auto pure = [&](double step) {
            Vector p = theta, m = theta;
            p[i] += step;
            m[i] -= step;
            return (f(p) - 2.0 * f0 + f(m)) / (step * step);
        };
        out(i, i) = richardson(pure, h);
        for (int j = i + 1; j < n; ++j) {
            auto mixed = [&](double step) {
                Vector pp = theta, pm = theta, mp = theta, mm = theta;
                pp[i] += step; pp[j] += step;
                pm[i] += step; pm[j] -= step;
                mp[i] -= step; mp[j] += step;
                mm[i] -= step; mm[j] -= step;
                return (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step * step);
            };
            out(i, j) = out(j, i) = richardson(mixed, h);
        }
    }
    return out;
}

Matrix jacobian(const std::function<Vector(const Vector&)>& f, const Vector& theta, double h) {
    const int n = static_cast<int>(theta.size());
    const int m = static_cast<int>(f(theta).size());
    Matrix out(m, n);
    for (int j = 0; j < n; ++j) {
        auto central = [&](double step) -> Vector {
            Vector p = theta, q = theta;
            p[j] += step;
            q[j] -= step;
            return (f(p) - f(q)) / (2.0 * step);
        };
        const Vector coarse = central(h);
        const Vector fine = central(h / 2.0);
        out.col(j) = (4.0 * fine - coarse) / 3.0;
    }
    return out;
}

}  // namespace igeo::fd
