#pragma once

#include <stdexcept>
#include <string>

namespace dlec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// model
struct DomainError : Error { using Error::Error; };
struct ModelDegenerateError : Error { using Error::Error; };
struct BandOrderError : Error { using Error::Error; };
struct BoundsError : Error { using Error::Error; };
struct UnitError : Error { using Error::Error; };

// calibration
struct DegenerateSeriesError : Error { using Error::Error; };
struct LengthMismatchError : Error { using Error::Error; };
struct InsufficientOverlapError : Error { using Error::Error; };
struct CoincidentAbscissaError : Error { using Error::Error; };

// catalog
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct ReferenceError : Error { using Error::Error; };
struct InvariantError : Error { using Error::Error; };

// connectors
struct TransportError : Error { using Error::Error; };
struct ExtractionError : Error { using Error::Error; };
struct ExtractedValueError : Error { using Error::Error; };
struct UnknownNetworkError : Error { using Error::Error; };

}  // namespace dlec
