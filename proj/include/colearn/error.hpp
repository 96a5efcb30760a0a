#pragma once

#include <stdexcept>
#include <string>

namespace colearn {

/// Malformed, missing or inconsistent input data. Maps to CLI exit status 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// An estimator or density could not be evaluated (rank deficiency,
/// separation, isolated node, ...). Maps to CLI exit status 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace colearn
