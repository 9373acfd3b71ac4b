#pragma once

#include <stdexcept>
#include <string>

namespace qrng {

/// Base class for all toolkit errors so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSweep : Error {
    using Error::Error;
};

struct ZeroDenominator : Error {
    using Error::Error;
};

struct NoInteriorMaximum : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct EntropyDeficit : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct DesignMismatch : Error {
    using Error::Error;
};

struct InvalidFieldSize : Error {
    using Error::Error;
};

struct ZeroVariance : Error {
    using Error::Error;
};

struct TooShort : Error {
    using Error::Error;
};

struct TooFew : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

}  // namespace qrng
