#ifndef HEIS_ERRORS_HPP
#define HEIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heis {

// Domain errors map to CLI exit code 2, parse/IO errors to exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct NonHorizontal : DomainError {
    using DomainError::DomainError;
};

struct NotHorizontallyRegular : DomainError {
    double where = 0.0;  // parameter value of the offending node
    explicit NotHorizontallyRegular(const std::string& msg, double t = 0.0)
        : DomainError(msg), where(t) {}
};

struct DegenerateFrame : DomainError {
    using DomainError::DomainError;
};

struct TooFarFromGroup : DomainError {
    using DomainError::DomainError;
};

struct GridMismatch : DomainError {
    using DomainError::DomainError;
};

struct NotNormalParametrization : DomainError {
    using DomainError::DomainError;
};

struct SingularPointEncountered : DomainError {
    using DomainError::DomainError;
};

struct TransversalNotFound : DomainError {
    using DomainError::DomainError;
};

struct NearSingular : DomainError {
    using DomainError::DomainError;
};

struct IntegrabilityViolated : DomainError {
    using DomainError::DomainError;
};

struct DegenerateAmplitude : DomainError {
    using DomainError::DomainError;
};

struct EmptyMesh : DomainError {
    using DomainError::DomainError;
};

}  // namespace heis

#endif
