#include "igeo/family.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "igeo/errors.hpp"
#include "igeo/fd.hpp"

namespace igeo {

namespace {

constexpr double kBoundaryMargin = 1e-6;
constexpr double kFdStep = 1e-5;  // score / log-hessian fallback base step

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vector vec1(double a) {
    Vector v(1);
    v[0] = a;
    return v;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v[0] = a;
    v[1] = b;
    return v;
}

Vector const_vec(int n, double a) { return Vector::Constant(n, a); }

}  // namespace

std::string to_string(FlatStructure s) {
    switch (s) {
        case FlatStructure::ExponentialFlat: return "exponential-flat";
        case FlatStructure::MixtureFlat: return "mixture-flat";
        case FlatStructure::None: return "generic";
    }
    return "generic";
}

bool Domain::contains(const Vector& theta) const {
    if (lower.size() != theta.size() || upper.size() != theta.size()) return false;
    for (int i = 0; i < theta.size(); ++i) {
        if (!std::isfinite(theta[i])) return false;
        if (theta[i] < lower[i] || theta[i] > upper[i]) return false;
    }
    return !extra || extra(theta);
}

bool Domain::contains_with_margin(const Vector& theta, double r) const {
    for (int i = 0; i < theta.size(); ++i) {
        if (!std::isfinite(theta[i])) return false;
        if (theta[i] < lower[i] + r || theta[i] > upper[i] - r) return false;
    }
    if (!extra) return true;
    if (!extra(theta)) return false;
    const int n = static_cast<int>(theta.size());
    // Probe the single- and double-coordinate excursions stencils produce.
    for (int i = 0; i < n; ++i) {
        for (double si : {-r, r}) {
            Vector p = theta;
            p[i] += si;
            if (!extra(p)) return false;
            for (int j = i + 1; j < n; ++j) {
                for (double sj : {-r, r}) {
                    Vector q = p;
                    q[j] += sj;
                    if (!extra(q)) return false;
                }
            }
        }
    }
    return true;
}

Vector ModelFamily::score(double y, const Vector& theta) const {
    if (score_fn) return score_fn(y, theta);
    const double h = kFdStep * fd::step_scale(theta);
    return fd::gradient([&](const Vector& t) { return log_density(y, t); }, theta, h);
}

Matrix ModelFamily::log_hessian(double y, const Vector& theta) const {
    if (log_hessian_fn) return log_hessian_fn(y, theta);
    const double h = kFdStep * fd::step_scale(theta);
    return fd::hessian([&](const Vector& t) { return log_density(y, t); }, theta, h);
}

void ModelFamily::check_in_domain(const Vector& theta) const {
    if (theta.size() != dim)
        throw DomainError(name + ": parameter has dimension " + std::to_string(theta.size()) +
                          ", expected " + std::to_string(dim));
    if (!domain.contains(theta)) {
        std::ostringstream os;
        os << name << ": parameter point outside domain:";
        for (int i = 0; i < theta.size(); ++i) os << " " << theta[i];
        throw DomainError(os.str());
    }
}

// ---------------------------------------------------------------------------
// Built-in families
// ---------------------------------------------------------------------------

namespace {

ModelFamily bernoulli_mean() {
    ModelFamily f;
    f.name = "bernoulli-mean";
    f.dim = 1;
    f.space = SampleSpace::finite({0.0, 1.0});
    f.flat_structure = FlatStructure::MixtureFlat;
    f.domain = Domain::box(vec1(kBoundaryMargin), vec1(1.0 - kBoundaryMargin));
    f.reference = vec1(0.5);
    f.test_lower = vec1(0.05);
    f.test_upper = vec1(0.95);
    f.log_density = [](double y, const Vector& th) {
        const double p = th[0];
        return y > 0.5 ? std::log(p) : std::log1p(-p);
    };
    f.score_fn = [](double y, const Vector& th) {
        const double p = th[0];
        return vec1(y > 0.5 ? 1.0 / p : -1.0 / (1.0 - p));
    };
    f.log_hessian_fn = [](double y, const Vector& th) {
        const double p = th[0];
        Matrix h(1, 1);
        h(0, 0) = y > 0.5 ? -1.0 / (p * p) : -1.0 / ((1.0 - p) * (1.0 - p));
        return h;
    };
    return f;
}

ModelFamily bernoulli_natural() {
    ModelFamily f;
    f.name = "bernoulli-natural";
    f.dim = 1;
    f.space = SampleSpace::finite({0.0, 1.0});
    f.flat_structure = FlatStructure::ExponentialFlat;
    f.domain = Domain::box(vec1(-12.0), vec1(12.0));
    f.reference = vec1(0.0);
    f.test_lower = vec1(-2.5);
    f.test_upper = vec1(2.5);
    f.log_density = [](double y, const Vector& th) { return th[0] * y - softplus(th[0]); };
    f.score_fn = [](double y, const Vector& th) { return vec1(y - logistic(th[0])); };
    f.log_hessian_fn = [](double, const Vector& th) {
        const double s = logistic(th[0]);
        Matrix h(1, 1);
        h(0, 0) = -s * (1.0 - s);
        return h;
    };
    return f;
}

ModelFamily categorical(int k) {
    if (k < 2) throw UnknownFamily("categorical-K needs K >= 2");
    ModelFamily f;
    f.name = "categorical-" + std::to_string(k);
    f.dim = k - 1;
    std::vector<double> atoms(k);
    for (int i = 0; i < k; ++i) atoms[i] = double(i);
    f.space = SampleSpace::finite(atoms);
    f.flat_structure = FlatStructure::MixtureFlat;
    f.domain = Domain::box(const_vec(k - 1, kBoundaryMargin), const_vec(k - 1, 1.0 - kBoundaryMargin));
    f.domain.extra = [](const Vector& th) { return th.sum() <= 1.0 - kBoundaryMargin; };
    f.reference = const_vec(k - 1, 1.0 / k);
    f.test_lower = const_vec(k - 1, 0.08);
    f.test_upper = const_vec(k - 1, 0.8 / (k - 1));
    auto plast = [](const Vector& th) { return 1.0 - th.sum(); };
    f.log_density = [plast](double y, const Vector& th) {
        const int i = static_cast<int>(std::lround(y));
        return i < th.size() ? std::log(th[i]) : std::log(plast(th));
    };
    f.score_fn = [plast](double y, const Vector& th) {
        const int i = static_cast<int>(std::lround(y));
        Vector s = Vector::Zero(th.size());
        if (i < th.size())
            s[i] = 1.0 / th[i];
        else
            s.setConstant(-1.0 / plast(th));
        return s;
    };
    f.log_hessian_fn = [plast](double y, const Vector& th) {
        const int i = static_cast<int>(std::lround(y));
        Matrix h = Matrix::Zero(th.size(), th.size());
        if (i < th.size()) {
            h(i, i) = -1.0 / (th[i] * th[i]);
        } else {
            const double q = plast(th);
            h.setConstant(-1.0 / (q * q));
        }
        return h;
    };
    return f;
}

ModelFamily gaussian_loc_scale() {
    ModelFamily f;
    f.name = "gaussian-loc-scale";
    f.dim = 2;
    f.space = SampleSpace::real_line();
    f.flat_structure = FlatStructure::None;
    f.domain = Domain::box(vec2(-1e8, 1e-3), vec2(1e8, 1e4));
    f.reference = vec2(0.0, 1.0);
    f.test_lower = vec2(-1.5, 0.7);
    f.test_upper = vec2(1.5, 2.2);
    f.log_density = [](double y, const Vector& th) {
        const double z = (y - th[0]) / th[1];
        return -0.5 * z * z - std::log(th[1]) - 0.5 * std::log(2.0 * M_PI);
    };
    f.score_fn = [](double y, const Vector& th) {
        const double mu = th[0], sg = th[1];
        const double d = y - mu;
        return vec2(d / (sg * sg), d * d / (sg * sg * sg) - 1.0 / sg);
    };
    f.log_hessian_fn = [](double y, const Vector& th) {
        const double mu = th[0], sg = th[1];
        const double d = y - mu;
        Matrix h(2, 2);
        h(0, 0) = -1.0 / (sg * sg);
        h(0, 1) = h(1, 0) = -2.0 * d / (sg * sg * sg);
        h(1, 1) = -3.0 * d * d / (sg * sg * sg * sg) + 1.0 / (sg * sg);
        return h;
    };
    f.window_hint = [](const Vector& th) { return quad::Window{th[0], th[1]}; };
    return f;
}

ModelFamily poisson_natural() {
    ModelFamily f;
    f.name = "poisson-natural";
    f.dim = 1;
    f.flat_structure = FlatStructure::ExponentialFlat;
    f.domain = Domain::box(vec1(-10.0), vec1(10.0));
    f.reference = vec1(0.0);  // lambda = 1
    f.test_lower = vec1(-1.5);
    f.test_upper = vec1(2.5);
    // Truncation keeps tail mass below 1e-14 over the domain.
    f.space = SampleSpace::countably_infinite([](const Vector& th) {
        const double mean = std::exp(th[0]);
        return static_cast<std::int64_t>(std::max(50.0, std::ceil(mean + 12.0 * std::sqrt(mean))));
    });
    f.log_density = [](double y, const Vector& th) {
        return th[0] * y - std::exp(th[0]) - std::lgamma(y + 1.0);
    };
    f.score_fn = [](double y, const Vector& th) { return vec1(y - std::exp(th[0])); };
    f.log_hessian_fn = [](double, const Vector& th) {
        Matrix h(1, 1);
        h(0, 0) = -std::exp(th[0]);
        return h;
    };
    return f;
}

}  // namespace

ModelFamily gaussian_loc(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("gaussian-loc needs sigma > 0");
    ModelFamily f;
    f.name = "gaussian-loc";
    f.dim = 1;
    f.space = SampleSpace::real_line();
    f.flat_structure = FlatStructure::ExponentialFlat;
    f.domain = Domain::box(vec1(-1e8), vec1(1e8));
    f.reference = vec1(0.0);
    f.test_lower = vec1(-2.0);
    f.test_upper = vec1(2.0);
    f.log_density = [sigma](double y, const Vector& th) {
        const double z = (y - th[0]) / sigma;
        return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
    };
    f.score_fn = [sigma](double y, const Vector& th) { return vec1((y - th[0]) / (sigma * sigma)); };
    f.log_hessian_fn = [sigma](double, const Vector&) {
        Matrix h(1, 1);
        h(0, 0) = -1.0 / (sigma * sigma);
        return h;
    };
    f.window_hint = [sigma](const Vector& th) { return quad::Window{th[0], sigma}; };
    return f;
}

ModelFamily builtin(const std::string& name) {
    if (name == "bernoulli-mean") return bernoulli_mean();
    if (name == "bernoulli-natural") return bernoulli_natural();
    if (name == "gaussian-loc") return gaussian_loc(1.0);
    if (name == "gaussian-loc-scale") return gaussian_loc_scale();
    if (name == "poisson-natural") return poisson_natural();
    if (name.rfind("categorical-", 0) == 0) {
        const std::string num = name.substr(std::string("categorical-").size());
        char* end = nullptr;
        const long k = std::strtol(num.c_str(), &end, 10);
        if (end && *end == '\0' && k >= 2 && k <= 64) return categorical(static_cast<int>(k));
    }
    throw UnknownFamily("unknown family: " + name);
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "bernoulli-mean",   "bernoulli-natural", "categorical-3",
        "gaussian-loc",     "gaussian-loc-scale", "poisson-natural"};
    return names;
}

std::vector<Vector> interior_grid(const ModelFamily& family, int m) {
    std::vector<Vector> pts;
    pts.reserve(m);
    for (int j = 1; j <= m; ++j) {
        const double t = double(j) / (m + 1);
        pts.push_back(family.test_lower + t * (family.test_upper - family.test_lower));
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Exponential family from a spec
// ---------------------------------------------------------------------------

namespace {

// Shared evaluation core with per-point caches; the family closures hold it
// by shared_ptr so ModelFamily stays copyable and immutable.
struct ExpFamilyCore {
    ExponentialFamilySpec spec;
    std::mutex mu;
    std::map<std::vector<double>, double> psi_cache;
    std::map<std::vector<double>, std::pair<Vector, Matrix>> moment_cache;

    double stat_dot(const Vector& th, double y) const {
        double s = 0.0;
        for (size_t i = 0; i < spec.sufficient_stats.size(); ++i)
            s += th[static_cast<int>(i)] * spec.sufficient_stats[i](y);
        return s;
    }
    double carrier(double y) const { return spec.carrier ? spec.carrier(y) : 0.0; }

    double psi(const Vector& th) {
        std::vector<double> key(th.data(), th.data() + th.size());
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = psi_cache.find(key);
            if (it != psi_cache.end()) return it->second;
        }
        auto log_g = [&](double y) { return stat_dot(th, y) + carrier(y); };
        quad::Window w;
        if (!spec.space.discrete()) w = quad::window_from_log_integrand(log_g, 0.0);
        // Shift by the max log-integrand over nodes to keep exp in range.
        const double shift = spec.space.discrete()
                                 ? [&] {
                                       double m = -1e300;
                                       for (double a : spec.space.atoms) m = std::max(m, log_g(a));
                                       return m;
                                   }()
                                 : log_g(w.loc);
        quad::ExpectOptions opts;
        const double integral = quad::integrate(
            spec.space, [&](double y) { return std::exp(log_g(y) - shift); }, w, opts, {th});
        if (!(integral > 0.0) || !std::isfinite(integral))
            throw NormalizationFailure("exponential family normalization integral is not positive");
        const double value = shift + std::log(integral);
        std::lock_guard<std::mutex> lock(mu);
        psi_cache.emplace(std::move(key), value);
        return value;
    }

    // Mean and covariance of the sufficient statistics under p_theta; these
    // are grad psi and hess psi, hence score and log-hessian.
    std::pair<Vector, Matrix> moments(const Vector& th) {
        std::vector<double> key(th.data(), th.data() + th.size());
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = moment_cache.find(key);
            if (it != moment_cache.end()) return it->second;
        }
        const int n = static_cast<int>(spec.sufficient_stats.size());
        const double psi_v = psi(th);
        auto log_p = [&](double y) { return stat_dot(th, y) + carrier(y) - psi_v; };
        quad::Window w;
        if (!spec.space.discrete()) w = quad::window_from_log_integrand(log_p, 0.0);
        quad::ExpectOptions opts;
        auto expect_fn = [&](const std::function<double(double)>& f) {
            return quad::integrate(
                spec.space, [&](double y) { return std::exp(log_p(y)) * f(y); }, w, opts, {th});
        };
        Vector mean(n);
        for (int i = 0; i < n; ++i) mean[i] = expect_fn(spec.sufficient_stats[i]);
        Matrix cov(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double eij = expect_fn([&](double y) {
                    return spec.sufficient_stats[i](y) * spec.sufficient_stats[j](y);
                });
                cov(i, j) = cov(j, i) = eij - mean[i] * mean[j];
            }
        std::pair<Vector, Matrix> value{mean, cov};
        std::lock_guard<std::mutex> lock(mu);
        moment_cache.emplace(std::move(key), value);
        return value;
    }
};

void check_stat_independence(const ExponentialFamilySpec& spec) {
    const int n = static_cast<int>(spec.sufficient_stats.size());
    if (n == 0) throw DegenerateStatistics("empty sufficient-statistics list");
    std::vector<double> nodes;
    if (spec.space.discrete()) {
        if (spec.space.kind == SampleSpace::Kind::Finite) {
            nodes = spec.space.atoms;
        } else {
            for (int y = 0; y <= 64; ++y) nodes.push_back(double(y));
        }
    } else {
        std::vector<double> x, w;
        quad::gauss_hermite(48, x, w);
        const double lo = spec.space.kind == SampleSpace::Kind::RealInterval ? spec.space.lo : -6.0;
        const double hi = spec.space.kind == SampleSpace::Kind::RealInterval ? spec.space.hi : 6.0;
        for (double t : x) {
            const double y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t / 10.0;
            nodes.push_back(y);
        }
    }
    Matrix gram = Matrix::Zero(n, n);
    for (double y : nodes)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gram(i, j) += spec.sufficient_stats[i](y) * spec.sufficient_stats[j](y);
    Eigen::JacobiSVD<Matrix> svd(gram);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(n - 1);
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw DegenerateStatistics("sufficient statistics are linearly dependent on the sample space");
}

}  // namespace

ModelFamily from_exponential_spec(const ExponentialFamilySpec& spec, Domain domain) {
    check_stat_independence(spec);
    const int n = static_cast<int>(spec.sufficient_stats.size());
    auto core = std::make_shared<ExpFamilyCore>();
    core->spec = spec;

    ModelFamily f;
    f.name = "exponential-spec";
    f.dim = n;
    f.space = spec.space;
    f.flat_structure = FlatStructure::ExponentialFlat;
    f.domain = std::move(domain);
    Vector ref = Vector::Zero(n);
    if (!f.domain.contains(ref)) ref = 0.5 * (f.domain.lower + f.domain.upper);
    f.reference = ref;
    f.test_lower = ref.array() - 1.0;
    f.test_upper = ref.array() + 1.0;
    for (int i = 0; i < n; ++i) {
        f.test_lower[i] = std::max(f.test_lower[i], f.domain.lower[i] + 0.05);
        f.test_upper[i] = std::min(f.test_upper[i], f.domain.upper[i] - 0.05);
    }

    f.log_density = [core](double y, const Vector& th) {
        return core->stat_dot(th, y) + core->carrier(y) - core->psi(th);
    };
    f.score_fn = [core](double y, const Vector& th) {
        const auto [mean, cov] = core->moments(th);
        Vector s(mean.size());
        for (int i = 0; i < mean.size(); ++i) s[i] = core->spec.sufficient_stats[i](y) - mean[i];
        return s;
    };
    f.log_hessian_fn = [core](double, const Vector& th) {
        const auto [mean, cov] = core->moments(th);
        return Matrix(-cov);
    };
    // Probe normalization once at the reference point.
    core->psi(f.reference);
    return f;
}

ModelFamily from_mixture_spec(const MixtureFamilySpec& spec, Domain domain) {
    const int n = static_cast<int>(spec.components.size());
    if (n == 0) throw ConfigError("mixture spec needs at least one component");
    if (!spec.carrier) throw ConfigError("mixture spec needs a carrier with unit integral");

    auto components = std::make_shared<std::vector<std::function<double(double)>>>(spec.components);
    auto carrier = spec.carrier;

    auto density = [components, carrier](double y, const Vector& th) {
        double p = carrier(y);
        for (int i = 0; i < th.size(); ++i) p += th[i] * (*components)[static_cast<size_t>(i)](y);
        return p;
    };

    // Base-measure integrals of the pieces (component mean 0, carrier mass 1).
    {
        quad::ExpectOptions opts;
        quad::Window w{0.0, 4.0};
        Vector zero = Vector::Zero(n);
        const double carrier_mass =
            quad::integrate(spec.space, [&](double y) { return carrier(y); }, w, opts, {zero});
        if (std::abs(carrier_mass - 1.0) > 1e-8)
            throw NormalizationFailure("mixture carrier must integrate to 1, got " +
                                       std::to_string(carrier_mass));
        for (int i = 0; i < n; ++i) {
            const double mass = quad::integrate(
                spec.space, [&](double y) { return (*components)[static_cast<size_t>(i)](y); }, w,
                opts, {zero});
            if (std::abs(mass) > 1e-8)
                throw NormalizationFailure("mixture component " + std::to_string(i) +
                                           " must integrate to 0");
        }
    }

    // Positivity spot-check on quadrature nodes over the eta-domain corners.
    {
        std::vector<double> nodes;
        if (spec.space.kind == SampleSpace::Kind::Finite) {
            nodes = spec.space.atoms;
        } else if (spec.space.kind == SampleSpace::Kind::RealInterval) {
            std::vector<double> x, w;
            quad::gauss_legendre(32, x, w);
            for (double t : x)
                nodes.push_back(0.5 * (spec.space.lo + spec.space.hi) +
                                0.5 * (spec.space.hi - spec.space.lo) * t);
        } else {
            std::vector<double> x, w;
            quad::gauss_hermite(32, x, w);
            for (double t : x) nodes.push_back(std::sqrt(2.0) * 3.0 * t);
        }
        std::vector<Vector> probes;
        probes.push_back(0.5 * (domain.lower + domain.upper));
        const long corners = 1L << n;
        for (long mask = 0; mask < corners && n <= 8; ++mask) {
            Vector c(n);
            for (int i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? domain.upper[i] : domain.lower[i];
            probes.push_back(c);
        }
        for (const Vector& eta : probes) {
            if (!domain.contains(eta)) continue;
            for (double y : nodes) {
                if (density(y, eta) < 0.0) {
                    std::ostringstream os;
                    os << "mixture density negative at y=" << y << ", eta=";
                    for (int i = 0; i < eta.size(); ++i) os << " " << eta[i];
                    throw NegativeDensity(os.str());
                }
            }
        }
    }

    ModelFamily f;
    f.name = "mixture-spec";
    f.dim = n;
    f.space = spec.space;
    f.flat_structure = FlatStructure::MixtureFlat;
    f.domain = std::move(domain);
    Vector ref = Vector::Zero(n);
    if (!f.domain.contains(ref)) ref = 0.5 * (f.domain.lower + f.domain.upper);
    f.reference = ref;
    f.test_lower = f.domain.lower + 0.1 * (f.domain.upper - f.domain.lower);
    f.test_upper = f.domain.upper - 0.1 * (f.domain.upper - f.domain.lower);

    f.log_density = [density](double y, const Vector& th) { return std::log(density(y, th)); };
    f.score_fn = [components, density](double y, const Vector& th) {
        const double p = density(y, th);
        Vector s(th.size());
        for (int i = 0; i < th.size(); ++i) s[i] = (*components)[static_cast<size_t>(i)](y) / p;
        return s;
    };
    f.log_hessian_fn = [components, density](double y, const Vector& th) {
        const double p = density(y, th);
        Matrix h(th.size(), th.size());
        for (int i = 0; i < th.size(); ++i)
            for (int j = 0; j < th.size(); ++j)
                h(i, j) = -(*components)[static_cast<size_t>(i)](y) *
                          (*components)[static_cast<size_t>(j)](y) / (p * p);
        return h;
    };
    return f;
}

// ---------------------------------------------------------------------------
// Declarative JSON configs (schemas/family-config-v1.json)
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

std::function<double(double)> parse_scalar_fn(const json& j);

std::function<double(double)> parse_scalar_fn_impl(const json& j) {
    const std::string fn = j.at("fn").get<std::string>();
    if (fn == "identity") return [](double y) { return y; };
    if (fn == "const") {
        const double v = j.at("value").get<double>();
        return [v](double) { return v; };
    }
    if (fn == "power") {
        const int k = j.at("k").get<int>();
        return [k](double y) { return std::pow(y, k); };
    }
    if (fn == "poly") {
        const std::vector<double> c = j.at("coeffs").get<std::vector<double>>();
        return [c](double y) {
            double acc = 0.0;
            for (size_t i = c.size(); i-- > 0;) acc = acc * y + c[i];
            return acc;
        };
    }
    if (fn == "indicator") {
        const double a = j.at("atom").get<double>();
        return [a](double y) { return y == a ? 1.0 : 0.0; };
    }
    if (fn == "log") return [](double y) { return std::log(y); };
    if (fn == "gaussian-log-carrier")
        return [](double y) { return -0.5 * y * y - 0.5 * std::log(2.0 * M_PI); };
    if (fn == "scaled") {
        const double c = j.at("factor").get<double>();
        auto inner = parse_scalar_fn(j.at("of"));
        return [c, inner](double y) { return c * inner(y); };
    }
    if (fn == "sum") {
        std::vector<std::function<double(double)>> terms;
        for (const auto& t : j.at("terms")) terms.push_back(parse_scalar_fn(t));
        return [terms](double y) {
            double acc = 0.0;
            for (const auto& t : terms) acc += t(y);
            return acc;
        };
    }
    throw ConfigError("unknown function spec: " + fn);
}

std::function<double(double)> parse_scalar_fn(const json& j) {
    if (!j.is_object()) throw ConfigError("function spec must be an object with an 'fn' key");
    return parse_scalar_fn_impl(j);
}

SampleSpace parse_space(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite") return SampleSpace::finite(j.at("atoms").get<std::vector<double>>());
    if (kind == "real-line") return SampleSpace::real_line();
    if (kind == "interval")
        return SampleSpace::real_interval(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (kind == "counting") {
        const std::int64_t n = j.at("max_index").get<std::int64_t>();
        if (n < 0) throw ConfigError("counting space needs max_index >= 0");
        return SampleSpace::countably_infinite([n](const Vector&) { return n; });
    }
    throw ConfigError("unknown sample space kind: " + kind);
}

Domain parse_domain(const json& j, int dim) {
    const auto lo = j.at("lower").get<std::vector<double>>();
    const auto hi = j.at("upper").get<std::vector<double>>();
    if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
        throw ConfigError("domain bounds must match the parameter dimension");
    Vector l(dim), u(dim);
    for (int i = 0; i < dim; ++i) {
        l[i] = lo[static_cast<size_t>(i)];
        u[i] = hi[static_cast<size_t>(i)];
    }
    return Domain::box(std::move(l), std::move(u));
}

}  // namespace

ModelFamily family_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid family config JSON: ") + e.what());
    }
    try {
        const std::string kind = j.at("kind").get<std::string>();
        ModelFamily f;
        if (kind == "builtin") {
            const auto& b = j.at("builtin");
            const std::string name = b.at("name").get<std::string>();
            if (name == "gaussian-loc" && b.contains("sigma"))
                f = gaussian_loc(b.at("sigma").get<double>());
            else
                f = builtin(name);
        } else if (kind == "exponential") {
            ExponentialFamilySpec spec;
            spec.space = parse_space(j.at("space"));
            for (const auto& t : j.at("exponential").at("sufficient_stats"))
                spec.sufficient_stats.push_back(parse_scalar_fn(t));
            if (j.at("exponential").contains("carrier"))
                spec.carrier = parse_scalar_fn(j.at("exponential").at("carrier"));
            f = from_exponential_spec(spec, parse_domain(j.at("domain"),
                                                         static_cast<int>(spec.sufficient_stats.size())));
        } else if (kind == "mixture") {
            MixtureFamilySpec spec;
            spec.space = parse_space(j.at("space"));
            for (const auto& t : j.at("mixture").at("components"))
                spec.components.push_back(parse_scalar_fn(t));
            spec.carrier = parse_scalar_fn(j.at("mixture").at("carrier"));
            f = from_mixture_spec(spec, parse_domain(j.at("domain"),
                                                     static_cast<int>(spec.components.size())));
        } else {
            throw ConfigError("unknown family kind: " + kind);
        }
        if (j.contains("name")) f.name = j.at("name").get<std::string>();
        if (j.contains("reference")) {
            const auto r = j.at("reference").get<std::vector<double>>();
            if (static_cast<int>(r.size()) != f.dim)
                throw ConfigError("reference point dimension mismatch");
            for (int i = 0; i < f.dim; ++i) f.reference[i] = r[static_cast<size_t>(i)];
        }
        return f;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("family config missing field: ") + e.what());
    }
}

ModelFamily family_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open family config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return family_from_json_text(ss.str());
}

}  // namespace igeo
