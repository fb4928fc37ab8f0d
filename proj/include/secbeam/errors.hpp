#ifndef SECBEAM_ERRORS_HPP
#define SECBEAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace secbeam {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

struct BracketInvalid : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct SingularSystem : Error {
    using Error::Error;
};

struct NegativeInput : Error {
    using Error::Error;
};

/// Raised by the outer drivers when an objective step decreases beyond the
/// allowed slack; monotone evolution is a hard contract of the algorithms.
struct MonotonicityViolation : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace secbeam

#endif
