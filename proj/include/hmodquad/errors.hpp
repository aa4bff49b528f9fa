#ifndef HMODQUAD_ERRORS_HPP_
#define HMODQUAD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hmodquad {

// Every failure raised by the library derives from Error so callers can
// catch the whole family at the CLI boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs outside an operation's mathematical domain (angles out of range,
// non-skew matrix passed to vee, negative thrust, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

class AllocationError : public Error {
 public:
  using Error::Error;
};

// Degenerate geometry in desired-attitude construction.
class DegenerateThrustError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateYawError : public DomainError {
 public:
  using DomainError::DomainError;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

// Failure inside the closed-loop simulation, tagged with the step at which it
// happened.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, long step, double time)
      : Error(what), step_(step), time_(time) {}
  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

}  // namespace hmodquad

#endif  // HMODQUAD_ERRORS_HPP_
