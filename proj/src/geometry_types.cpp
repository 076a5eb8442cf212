#include "igeo/geometry_types.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

namespace igeo {

DivergenceSpec DivergenceSpec::alpha(double a) {
    if (a == -1.0 || a == 1.0 || !std::isfinite(a))
        throw InvalidOrder("alpha divergence order must lie outside {-1, +1}");
    return {Kind::Alpha, a};
}

DivergenceSpec DivergenceSpec::renyi(double rho) {
    if (!(rho > 0.0) || rho == 1.0 || !std::isfinite(rho))
        throw InvalidOrder("Renyi order must satisfy rho > 0, rho != 1");
    return {Kind::Renyi, rho};
}

std::string DivergenceSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::KL: os << "kl"; break;
        case Kind::Alpha: os << "alpha(" << order << ")"; break;
        case Kind::Renyi: os << "renyi(" << order << ")"; break;
        case Kind::Bhattacharyya: os << "bhattacharyya"; break;
    }
    return os.str();
}

GeometryLabel GeometryLabel::alpha(double a) {
    if (a == -1.0 || a == 1.0 || !std::isfinite(a))
        throw InvalidOrder("alpha geometry order must lie outside {-1, +1}");
    return {Tag::Alpha, a};
}

GeometryLabel GeometryLabel::alpha_dual(double a) {
    if (a == -1.0 || a == 1.0 || !std::isfinite(a))
        throw InvalidOrder("alpha geometry order must lie outside {-1, +1}");
    return {Tag::AlphaDual, a};
}

GeometryLabel GeometryLabel::rho(double r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw InvalidOrder("rho geometry order must be positive");
    return {Tag::Rho, r};
}

GeometryLabel GeometryLabel::rho_dual(double r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw InvalidOrder("rho geometry order must be positive");
    return {Tag::RhoDual, r};
}

double GeometryLabel::metric_scale() const {
    switch (tag) {
        case Tag::Rho:
        case Tag::RhoDual: return order;
        case Tag::Bhattacharyya: return 0.5;
        default: return 1.0;
    }
}

GeometryLabel GeometryLabel::dual() const {
    switch (tag) {
        case Tag::E: return m();
        case Tag::M: return e();
        case Tag::Alpha: return {Tag::AlphaDual, order};
        case Tag::AlphaDual: return {Tag::Alpha, order};
        case Tag::Rho: return {Tag::RhoDual, order};
        case Tag::RhoDual: return {Tag::Rho, order};
        default: return *this;  // Fisher/LC/Bhattacharyya are self-dual
    }
}

std::string GeometryLabel::describe() const {
    std::ostringstream os;
    switch (tag) {
        case Tag::Fisher: os << "fisher"; break;
        case Tag::E: os << "e"; break;
        case Tag::M: os << "m"; break;
        case Tag::LC: os << "lc"; break;
        case Tag::Alpha: os << "alpha(" << order << ")"; break;
        case Tag::AlphaDual: os << "alpha-dual(" << order << ")"; break;
        case Tag::Rho: os << "rho(" << order << ")"; break;
        case Tag::RhoDual: os << "rho-dual(" << order << ")"; break;
        case Tag::Bhattacharyya: os << "bhattacharyya"; break;
    }
    return os.str();
}

void MetricTensor::validate(double sym_tol) const {
    const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
    if (asym > sym_tol)
        throw NotPositiveDefinite("metric asymmetry " + std::to_string(asym) +
                                  " exceeds tolerance");
    Eigen::LLT<Matrix> llt(0.5 * (g + g.transpose()));
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("metric is not positive definite");
}

Matrix MetricTensor::inverse() const {
    Eigen::LLT<Matrix> llt(0.5 * (g + g.transpose()));
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("metric is not positive definite");
    return llt.solve(Matrix::Identity(g.rows(), g.cols()));
}

double MetricTensor::log_det() const {
    Eigen::LLT<Matrix> llt(0.5 * (g + g.transpose()));
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("metric is not positive definite");
    double ld = 0.0;
    for (int i = 0; i < g.rows(); ++i) ld += 2.0 * std::log(llt.matrixL()(i, i));
    return ld;
}

}  // namespace igeo
