#ifndef WAYBOUND_ERRORS_HPP
#define WAYBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace waybound {

/// Violated precondition or malformed input (dimension mismatch, invalid
/// matrix data, bad configuration).
class ContractError : public std::invalid_argument {
  public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical-health failure: a quantity that must be real/nonnegative came
/// out of the solver too far off to trust.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested computation exceeds the configured resource limits
/// (dense-dimension cap).
class ResourceError : public std::runtime_error {
  public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace waybound

#endif
