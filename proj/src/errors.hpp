#pragma once

#include <stdexcept>
#include <string>

namespace corr1d {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

// The coupled-dipole linear system could not be solved reliably.
class SingularSystem : public Error {
public:
    using Error::Error;
};

// Field requested too close to an atom position.
class GridTooClose : public Error {
public:
    using Error::Error;
};

// Lossless resonant atom (t = 0) has no finite transfer matrix.
class SingularAtomMatrix : public Error {
public:
    using Error::Error;
};

class NoTransmissionSolution : public Error {
public:
    using Error::Error;
};

// Two-atom denominator vanished: lossless resonant pair at a
// round-trip phase that closes the recurrent-scattering loop.
class ResonantDivergence : public Error {
public:
    using Error::Error;
};

class NonconvergentSeries : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class MftVanishes : public Error {
public:
    using Error::Error;
};

class ChainNotEquilibrated : public Error {
public:
    using Error::Error;
};

class PeakAtBoundary : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

// Run-configuration file failed to parse or validate.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace corr1d
