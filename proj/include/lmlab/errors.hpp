#pragma once

#include <stdexcept>
#include <string>

namespace lmlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

struct PoleError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct StatisticsError : Error {
    using Error::Error;
};

struct FitError : Error {
    using Error::Error;
};

struct ResolutionError : Error {
    ResolutionError(const std::string& what, double estimate)
        : Error(what), estimated_error(estimate) {}
    double estimated_error;
};

struct AccuracyError : Error {
    AccuracyError(const std::string& what, double bound)
        : Error(what), achieved_bound(bound) {}
    double achieved_bound;
};

struct ResourceError : Error {
    ResourceError(const std::string& what, double budget_terms, double required_terms)
        : Error(what), budget(budget_terms), required(required_terms) {}
    double budget;
    double required;
};

// Raised when a Harper schedule has no admissible block. The minimal T is
// astronomically large for the asymptotic knobs, so it is carried as log log T.
struct EmptyScheduleError : Error {
    EmptyScheduleError(const std::string& what, double min_loglogT)
        : Error(what), min_log_log_T(min_loglogT) {}
    double min_log_log_T;
};

} // namespace lmlab
