#pragma once

#include <stdexcept>
#include <string>

namespace mml {

// Base for every error the library raises on bad input or exhausted limits.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: out-of-range vertices, wrong lengths, broken invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Exact hypercube enumeration requested above the configured dimension cutoff.
class CutoffError : public Error {
 public:
  using Error::Error;
};

// Enumeration or retry budget exhausted before the request could be met.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace mml
