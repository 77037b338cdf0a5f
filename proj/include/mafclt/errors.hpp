#pragma once

#include <stdexcept>
#include <string>

namespace mafclt {

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An experiment or model configuration is inconsistent.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure (quadrature, root finding) failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sample carries too little information for the requested estimate.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two paths cannot be compared on a common grid of admissible size.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mafclt
