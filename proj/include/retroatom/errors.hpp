// errors.hpp — Exception types for physically invalid inputs and degenerate queries
#pragma once

#include <stdexcept>
#include <string>

namespace retroatom {

// Base class for all domain errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An operator violates a physical constraint (Hermiticity, positivity,
// finiteness, completeness) beyond the configured tolerance.
class NonPhysicalError : public Error {
 public:
  explicit NonPhysicalError(const std::string& what) : Error(what) {}
};

// An operator cannot be scaled to unit trace (zero or negative trace).
class UnnormalizableError : public Error {
 public:
  explicit UnnormalizableError(const std::string& what) : Error(what) {}
};

// The measurement outcome has zero retrodictive weight under the channel,
// so no state can be assigned. Distinct from invalid-parameter errors.
class ImpossibleOutcomeError : public Error {
 public:
  explicit ImpossibleOutcomeError(const std::string& what) : Error(what) {}
};

// Every preparation in the ensemble has zero overlap with the retrodicted
// state; posterior probabilities are undefined.
class IncompatibleEnsembleError : public Error {
 public:
  explicit IncompatibleEnsembleError(const std::string& what) : Error(what) {}
};

}  // namespace retroatom
