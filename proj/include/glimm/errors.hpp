#pragma once

#include <stdexcept>
#include <string>

namespace glimm {

/// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state left the admissible neighbourhood of the system.
class OutOfPhaseBox : public Error {
 public:
  using Error::Error;
};

/// The Riemann solver could not produce a fan (no convergence, vacuum).
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// A wave ray left its diamond, or s/r exceeds the characteristic bound.
class CflViolated : public Error {
 public:
  using Error::Error;
};

/// A test function reaches outside the computed spacetime window.
class SupportExceedsWindow : public Error {
 public:
  using Error::Error;
};

}  // namespace glimm
