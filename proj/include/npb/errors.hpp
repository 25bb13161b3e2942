#pragma once

#include <stdexcept>
#include <string>

namespace npb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Charge density handed to the Poisson solver has a nonzero mean.
class NonNeutralSource : public Error {
public:
    using Error::Error;
};

class InvalidIC : public Error {
public:
    using Error::Error;
};

/// Temperature dropped below T*/2; 1/T is no longer safe to evaluate.
class TemperatureFloorViolated : public Error {
public:
    using Error::Error;
};

/// A step produced a state that fails validation beyond tolerance.
class StateInvalid : public Error {
public:
    using Error::Error;
};

/// Per-step fixed-point iteration did not contract within the iteration budget.
class PicardDiverged : public Error {
public:
    using Error::Error;
};

class InvalidMean : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class NonPositiveSample : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace npb
