#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace relaybf {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Base of every error raised by the core library. The C API maps each
/// subclass onto a distinct status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid SystemConfig / ExperimentSpec (dimension or sign constraints).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside a function's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite input or a decomposition that produced garbage.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A beamformer could not be built for this realization (rank deficiency).
class DesignError : public Error {
public:
    using Error::Error;
};

/// Malformed config text or override.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch between design, realization and config.
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace relaybf

namespace relaybf {

/// Scheme tag that is not one of the known names.
class UnknownSchemeError : public Error {
public:
    using Error::Error;
};

/// Preset name that is not one of the known figures.
class UnknownPresetError : public Error {
public:
    using Error::Error;
};

/// Output could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace relaybf
