#pragma once

#include <stdexcept>
#include <string>

namespace nhdkr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
  using Error::Error;
};

// numerics
class NonHermitianInput : public Error {
public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// bloch
/// The Bloch vector is undefined because |sin E| fell below the gap tolerance.
class GaplessPoint : public Error {
public:
  using Error::Error;
};

// invariants / dynamics
class GaplessSpectrum : public Error {
public:
  using Error::Error;
};

class WindingNotQuantized : public Error {
public:
  WindingNotQuantized(const std::string& what, double raw)
      : Error(what), raw_(raw) {}

  double raw() const noexcept { return raw_; }

private:
  double raw_;
};

class NoSolutions : public Error {
public:
  using Error::Error;
};

class MismatchedReports : public Error {
public:
  using Error::Error;
};

}  // namespace nhdkr
