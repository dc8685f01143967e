#pragma once

#include <stdexcept>
#include <string>

namespace mvpois {

// Invalid arguments or parameters outside a documented domain.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A configured size cap (state space, transport pairs, enumeration) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A model cannot provide what was asked of it (e.g. conditioning on a null event).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant was breached; indicates a bug or a violated hypothesis.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mvpois
