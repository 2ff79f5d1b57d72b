#pragma once

#include <stdexcept>
#include <string>

namespace quartica {

/** Base class for all errors raised by this library. */
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- polynomial layer ---
struct DegreeUnderflow : Error { using Error::Error; };   // derivative/split of a degree-0 form
struct DegreeMismatch  : Error { using Error::Error; };   // operands live in incompatible graded slices
struct ParseError      : Error { using Error::Error; };   // malformed serialized data

// --- division / reduction layer ---
struct SingularSurface : Error { using Error::Error; };   // Jacobian ideal misses part of the degree-12 slice
struct DegreeTooLow    : Error { using Error::Error; };   // division requested below degree 12

// --- certified arithmetic layer ---
struct PrecisionTooLow : Error { using Error::Error; };   // a required sign/positivity could not be certified
struct InvalidInput    : Error { using Error::Error; };   // argument outside the documented domain

// --- lattice layer ---
struct NotEven        : Error { using Error::Error; };
struct NotUnimodular  : Error { using Error::Error; };
struct WrongSignature : Error { using Error::Error; };
struct WrongHSquare   : Error { using Error::Error; };

// --- bound ledger layer ---
struct InvalidIndex          : Error { using Error::Error; };
struct LedgerInconsistency   : Error { using Error::Error; };
struct DivisibilityViolation : Error { using Error::Error; };

// --- pipeline layer ---
struct ShapeMismatch           : Error { using Error::Error; };
struct OmegaConstraintViolated : Error { using Error::Error; };
struct ChainViolation          : Error { using Error::Error; };

} // namespace quartica
