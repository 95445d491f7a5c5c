#ifndef HELIXLAB_ERRORS_HPP
#define HELIXLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace helix {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Spherical projection requested at (or within tolerance of) its base point.
struct ProjectionUndefined : Error {
    using Error::Error;
};

/// Matrix has an eigenvalue below the negative tolerance band.
struct NotPsd : Error {
    using Error::Error;
};

struct InvalidParameters : Error {
    using Error::Error;
};

struct NotTriangleEqual : Error {
    using Error::Error;
};

struct DegenerateQuadruple : Error {
    using Error::Error;
};

/// Quadruple parameters (x, y) outside the admissible region.
struct NotAdmissible : Error {
    using Error::Error;
};

/// Kernel evaluated outside the domain of its process kind.
struct DomainError : Error {
    using Error::Error;
};

struct NonPositiveEntry : Error {
    using Error::Error;
};

/// Sign recovery hit a zero correlation against the reference point.
struct ZeroPivot : Error {
    using Error::Error;
};

/// Conditioning point perfectly correlated with a target time.
struct DegenerateConditioning : Error {
    using Error::Error;
};

/// Quadruple is neither line-embeddable nor an exceptional pattern
/// within tolerance (cannot happen for a genuine triangle-equality metric).
struct PatternMismatch : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace helix

#endif // HELIXLAB_ERRORS_HPP
