#ifndef VSHOCK_ERRORS_HPP_
#define VSHOCK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace vshock {

// Shock construction errors.
struct NonCompressive : std::runtime_error {
  explicit NonCompressive(const std::string& what) : std::runtime_error(what) {}
};
struct NewtonDiverged : std::runtime_error {
  explicit NewtonDiverged(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidOrdering : std::runtime_error {
  explicit InvalidOrdering(const std::string& what) : std::runtime_error(what) {}
};

// Traveling-wave solve errors.
struct NoUnstableDirection : std::runtime_error {
  explicit NoUnstableDirection(const std::string& what) : std::runtime_error(what) {}
};
struct EndpointMiss : std::runtime_error {
  explicit EndpointMiss(const std::string& what) : std::runtime_error(what) {}
};

// Diagnostic / solver errors.
struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct NonPositiveState : std::runtime_error {
  explicit NonPositiveState(const std::string& what) : std::runtime_error(what) {}
};
struct CflViolation : std::runtime_error {
  explicit CflViolation(const std::string& what) : std::runtime_error(what) {}
};
struct DomainOutrun : std::runtime_error {
  explicit DomainOutrun(const std::string& what) : std::runtime_error(what) {}
};
struct EmptyRegion : std::runtime_error {
  explicit EmptyRegion(const std::string& what) : std::runtime_error(what) {}
};

// Configuration errors. Both carry the offending field path in the message.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vshock

#endif  // VSHOCK_ERRORS_HPP_
