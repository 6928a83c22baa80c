#pragma once

#include <stdexcept>
#include <string>

namespace trinfo {

/// Malformed or unreadable input data (files, CSV, TSV, JSON).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to produce a usable result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative proportional fitting did not reach the requested tolerance.
class IpfError : public NumericError {
 public:
  IpfError(const std::string& what, double residual, int iterations)
      : NumericError(what), residual(residual), iterations(iterations) {}

  double residual;
  int iterations;
};

}  // namespace trinfo
