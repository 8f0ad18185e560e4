#pragma once

#include <stdexcept>
#include <string>

namespace hs {

/// Evaluation requested at a pole of the function.
class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

/// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Series or product requested outside its region of safe convergence.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Matrix is elliptic or parabolic where a hyperbolic element was required.
class NonHyperbolicError : public std::domain_error {
public:
    explicit NonHyperbolicError(const std::string& what) : std::domain_error(what) {}
};

class IterationLimitError : public std::runtime_error {
public:
    explicit IterationLimitError(const std::string& what) : std::runtime_error(what) {}
};

class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

class IndexRangeError : public std::out_of_range {
public:
    explicit IndexRangeError(const std::string& what) : std::out_of_range(what) {}
};

/// Malformed or unsupported persisted data.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hs
