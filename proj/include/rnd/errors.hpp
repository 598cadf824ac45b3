#pragma once

#include <stdexcept>
#include <string>

namespace rnd {

// Failures of a numerical procedure (no root, no convergence, ...). The CLI
// maps these to exit status 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(kind) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Invalid parameters or configuration. Exit status 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

#define RND_NUMERICAL_ERROR(Name)                                   \
  class Name : public NumericalError {                              \
   public:                                                          \
    explicit Name(const std::string& what) : NumericalError(#Name, what) {} \
  };

RND_NUMERICAL_ERROR(NoRoot)
RND_NUMERICAL_ERROR(NoCrossing)
RND_NUMERICAL_ERROR(Miss)
RND_NUMERICAL_ERROR(OutOfJumpZone)
RND_NUMERICAL_ERROR(NoConvergence)
RND_NUMERICAL_ERROR(DomainTooShort)
RND_NUMERICAL_ERROR(StepFailure)
RND_NUMERICAL_ERROR(NotFound)
RND_NUMERICAL_ERROR(NoTransverseCrossing)
RND_NUMERICAL_ERROR(NonDecaying)
RND_NUMERICAL_ERROR(PrefactorMismatch)
RND_NUMERICAL_ERROR(DegenerateSplitting)
RND_NUMERICAL_ERROR(IrrecoverableBlowup)
RND_NUMERICAL_ERROR(RefinementExhausted)

#undef RND_NUMERICAL_ERROR

}  // namespace rnd
