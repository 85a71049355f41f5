#pragma once

#include <stdexcept>
#include <string>

namespace bootnet {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor dimension disagreements (matmul inner dims, congruence, ...).
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Bad input data or configuration values.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// API misuse: missing parameter group, non-scalar loss, mismatched keys.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& msg) : Error(msg) {}
};

// File-level problems. Subclasses distinguish the corruption modes the
// binary formats must report.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class BadMagicError : public IoError {
public:
    explicit BadMagicError(const std::string& msg) : IoError(msg) {}
};

class BadVersionError : public IoError {
public:
    explicit BadVersionError(const std::string& msg) : IoError(msg) {}
};

class TruncatedError : public IoError {
public:
    explicit TruncatedError(const std::string& msg) : IoError(msg) {}
};

}  // namespace bootnet
