#pragma once

#include <stdexcept>
#include <string>

namespace nv0 {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class NonHermitianError : public Error {
public:
  NonHermitianError(double max_asymmetry, double tolerance);
  double max_asymmetry() const { return max_asymmetry_; }

private:
  double max_asymmetry_;
};

// Ground doublets closer than the degeneracy tolerance.
class DegenerateManifoldError : public Error {
public:
  using Error::Error;
};

// Both absorption probabilities vanish.
class UndefinedPolarizationError : public Error {
public:
  using Error::Error;
};

class GridError : public Error {
public:
  using Error::Error;
};

class BracketingError : public Error {
public:
  using Error::Error;
};

}  // namespace nv0
