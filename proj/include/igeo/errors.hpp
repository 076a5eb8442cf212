#pragma once

#include <stdexcept>
#include <string>

namespace igeo {

/// Base class for all error conditions raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : Error {
    using Error::Error;
};
struct NonConvergent : Error {
    using Error::Error;
};
struct UnknownFamily : Error {
    using Error::Error;
};
struct DegenerateStatistics : Error {
    using Error::Error;
};
struct NormalizationFailure : Error {
    using Error::Error;
};
struct NegativeDensity : Error {
    using Error::Error;
};
struct InvalidOrder : Error {
    using Error::Error;
};
struct IntegralNonPositive : Error {
    using Error::Error;
};
struct StepTooLarge : Error {
    using Error::Error;
};
struct NotPositiveDefinite : Error {
    using Error::Error;
};
struct StructureMismatch : Error {
    using Error::Error;
};
struct PathExitsDomain : Error {
    using Error::Error;
};
struct NonClosedField : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace igeo
