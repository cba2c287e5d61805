#pragma once

#include <stdexcept>
#include <string>

namespace sgotto {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied a value outside an operation's domain (sizes, fields,
/// temperatures, unsorted or too-short inputs).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A coupling equal to zero makes ln|J| undefined; resample the realization.
class DegenerateCoupling : public Error {
 public:
  using Error::Error;
};

/// LAPACK did not converge on a quasiparticle spectrum.
class DiagonalizationError : public Error {
 public:
  using Error::Error;
};

/// Heat signs matched none of the four allowed regimes. Thermodynamically
/// forbidden, so this always indicates a numerical bug upstream.
class ClausiusViolation : public Error {
 public:
  using Error::Error;
};

/// An ensemble skipped more realizations than the 1% ceiling allows.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an artifact failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgotto
