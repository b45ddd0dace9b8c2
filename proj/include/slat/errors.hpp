#pragma once

#include <stdexcept>
#include <string>

namespace slat {

/// Caller passed an id, shape, or parameter that the operation does not accept.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called on an object that lacks a required structure
/// (e.g. atoms of a semilattice without least element).
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A cross-check between two independent routes failed. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An interaction does not factor through the tensor decomposition required
/// for a quotient Hamiltonian.
class ModelNotNR : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written, or its contents are not JSON.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slat
