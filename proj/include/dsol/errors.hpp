#pragma once

#include <stdexcept>
#include <string>

namespace dsol {

// Input that violates a documented precondition (bad parameter domain,
// unsupported model combination, missing registry key, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative numeric procedure failed to converge to its tolerance.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (scenario files, registry files, CLI grids).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Lookup of a (ppm_order, code_rate, slot_time, noise_flux) key that the
// required-flux registry does not carry. Derives from DomainError so callers
// that only distinguish the three classes above keep working.
class RegistryKeyError : public DomainError {
 public:
  explicit RegistryKeyError(const std::string& what) : DomainError(what) {}
};

}  // namespace dsol
