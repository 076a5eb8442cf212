#pragma once

#include <Eigen/Dense>
#include <vector>

namespace igeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense rank-3 array with n^3 entries, indexed (i, j, k).
/// Used for connection coefficients and the third-order cumulant tensor.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int n) : n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}

    int dim() const { return n_; }

    double& operator()(int i, int j, int k) { return data_[idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }

    Tensor3& operator+=(const Tensor3& o) {
        for (size_t m = 0; m < data_.size(); ++m) data_[m] += o.data_[m];
        return *this;
    }
    Tensor3& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator*(double s, Tensor3 t) { return t *= s; }
    friend Tensor3 operator-(const Tensor3& a, const Tensor3& b) {
        Tensor3 r = a;
        for (size_t m = 0; m < r.data_.size(); ++m) r.data_[m] -= b.data_[m];
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Largest |T_ijk - T_jik|; zero for torsion-free coefficient arrays.
    double torsion_residual() const {
        double r = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k)
                    r = std::max(r, std::abs((*this)(i, j, k) - (*this)(j, i, k)));
        return r;
    }

    /// Largest deviation from total symmetry over all index permutations.
    double total_symmetry_residual() const {
        double r = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k) {
                    const double v = (*this)(i, j, k);
                    r = std::max(r, std::abs(v - (*this)(i, k, j)));
                    r = std::max(r, std::abs(v - (*this)(j, i, k)));
                    r = std::max(r, std::abs(v - (*this)(j, k, i)));
                    r = std::max(r, std::abs(v - (*this)(k, i, j)));
                    r = std::max(r, std::abs(v - (*this)(k, j, i)));
                }
        return r;
    }

private:
    size_t idx(int i, int j, int k) const {
        return (static_cast<size_t>(i) * n_ + j) * n_ + k;
    }
    int n_ = 0;
    std::vector<double> data_;
};

/// Compensated (Neumaier) accumulator; summation order is the call order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace igeo
