#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tdlc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite set would exceed the configured enumeration cap.
class ResolutionTooFine : public Error {
 public:
  explicit ResolutionTooFine(std::uint64_t cap)
      : Error("resolution too fine: enumeration cap " + std::to_string(cap) + " exceeded"), cap_(cap) {}
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error("parse error at position " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// The element lies outside the class the model can treat exactly.
class UnsupportedElement : public Error {
 public:
  using Error::Error;
};

class ContainmentError : public Error {
 public:
  using Error::Error;
};

class NotIntegral : public Error {
 public:
  using Error::Error;
};

class PrimeMismatch : public Error {
 public:
  PrimeMismatch(int a, int b)
      : Error("prime mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class WindowMismatch : public Error {
 public:
  using Error::Error;
};

/// Characterizations of one object disagreed; carries a rendering of both sides.
class Disagreement : public Error {
 public:
  using Error::Error;
};

/// An iteration bound was reached before the sought object was found.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An exact check that must hold failed; the message carries the counterexample.
class CheckFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace tdlc
