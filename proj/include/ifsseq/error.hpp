#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ifsseq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: dimension mismatch, parse failure,
/// a point outside its domain, an invalid configuration value.
class InputError : public Error {
public:
    using Error::Error;
};

/// A map whose Lipschitz constant is not strictly below one, or which does
/// not send its domain into itself.
class InvalidContraction : public InputError {
public:
    using InputError::InputError;
};

/// Two IFSs with different arity or different domains were compared.
class ArityMismatch : public InputError {
public:
    using InputError::InputError;
};

/// A computation would exceed a configured size cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A mathematical precondition of an operation is not met by the data.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what, std::optional<std::size_t> slot = std::nullopt)
        : Error(what), slot_(slot) {}

    /// Map slot that violated the precondition, when the check is per slot.
    std::optional<std::size_t> slot() const noexcept { return slot_; }

private:
    std::optional<std::size_t> slot_;
};

} // namespace ifsseq
