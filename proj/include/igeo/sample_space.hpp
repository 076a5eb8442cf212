#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "igeo/errors.hpp"
#include "igeo/linalg.hpp"

namespace igeo {

/// 1-D data space together with its integration measure: counting measure for
/// Finite / CountablyInfinite, Lebesgue measure for RealLine / RealInterval.
struct SampleSpace {
    enum class Kind { Finite, CountablyInfinite, RealLine, RealInterval };

    Kind kind = Kind::RealLine;
    int dimension = 1;

    /// Finite: support atoms, in summation order.
    std::vector<double> atoms;

    /// CountablyInfinite: inclusive upper bound N(theta) of the truncated
    /// support {0, 1, ..., N}; must be finite for every valid parameter point.
    std::function<std::int64_t(const Vector&)> truncation;

    /// RealInterval bounds.
    double lo = 0.0;
    double hi = 0.0;

    static SampleSpace finite(std::vector<double> atoms_in) {
        if (atoms_in.empty()) throw ConfigError("finite sample space needs at least one atom");
        for (size_t a = 0; a < atoms_in.size(); ++a)
            for (size_t b = a + 1; b < atoms_in.size(); ++b)
                if (atoms_in[a] == atoms_in[b])
                    throw ConfigError("finite sample space atoms must be duplicate-free");
        SampleSpace s;
        s.kind = Kind::Finite;
        s.atoms = std::move(atoms_in);
        return s;
    }

    static SampleSpace countably_infinite(std::function<std::int64_t(const Vector&)> trunc) {
        SampleSpace s;
        s.kind = Kind::CountablyInfinite;
        s.truncation = std::move(trunc);
        return s;
    }

    static SampleSpace real_line() {
        SampleSpace s;
        s.kind = Kind::RealLine;
        return s;
    }

    static SampleSpace real_interval(double lo, double hi) {
        if (!(lo < hi)) throw ConfigError("interval bounds must satisfy lo < hi");
        SampleSpace s;
        s.kind = Kind::RealInterval;
        s.lo = lo;
        s.hi = hi;
        return s;
    }

    bool discrete() const { return kind == Kind::Finite || kind == Kind::CountablyInfinite; }
};

}  // namespace igeo
