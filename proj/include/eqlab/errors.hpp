// errors.hpp — error types thrown across the eqlab library.
#pragma once

#include <stdexcept>

namespace eqlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NonSquare : Error { using Error::Error; };
struct AmbiguousClustering : Error { using Error::Error; };
struct TooManyLevels : Error { using Error::Error; };
struct ExhaustedRetries : Error { using Error::Error; };
struct DegenerateGaps : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };
struct EmptySet : Error { using Error::Error; };
struct BadDimension : Error { using Error::Error; };
struct EdgeOnLevel : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct BasisNotInSubspace : Error { using Error::Error; };
struct NotEigenstates : Error { using Error::Error; };
struct StateOutsideSubspace : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace eqlab
