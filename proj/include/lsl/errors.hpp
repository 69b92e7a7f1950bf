#pragma once

#include <stdexcept>
#include <string>

namespace lsl {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside a provider domain, or a grid touching a singular set.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// EG - F^2 vanishes: x_u and x_v do not span a plane.
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// The normal direction is not spacelike.
class NotLorentzError : public Error {
 public:
  using Error::Error;
};

/// L or N (equivalently H^2 - K) vanishes where a general-type surface is required.
class NotGeneralTypeError : public Error {
 public:
  using Error::Error;
};

/// H^2 - K or K vanishes inside a natural-equation specialization.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Grid too small for the requested finite-difference stencil.
class StencilError : public Error {
 public:
  using Error::Error;
};

/// Requested point lies outside the range of a map.
class RangeError : public Error {
 public:
  using Error::Error;
};

class InvalidFrameError : public Error {
 public:
  using Error::Error;
};

/// Frame marching hit F <= 0 or a non-finite state.
class ReconstructionAbort : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// Malformed chart, seed or report file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace lsl
