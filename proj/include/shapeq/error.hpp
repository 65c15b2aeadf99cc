#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shapeq {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands were built over different alphabets.
class AlphabetMismatch : public Error {
 public:
  AlphabetMismatch() : Error("alphabet mismatch") {}
};

/// A letter refers to a generator index that the alphabet does not have.
class GeneratorOutOfRange : public Error {
 public:
  GeneratorOutOfRange(std::size_t index, std::size_t rank)
      : Error("generator index " + std::to_string(index) +
              " out of range for alphabet of rank " + std::to_string(rank)) {}
};

/// An iterated image exceeded the configured word-length cap.
class WordBlowup : public Error {
 public:
  WordBlowup(std::size_t length, std::size_t cap)
      : Error("word length " + std::to_string(length) +
              " exceeds the configured maximum of " + std::to_string(cap)),
        length_(length),
        cap_(cap) {}

  std::size_t length() const noexcept { return length_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t length_;
  std::size_t cap_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The operation needs a stabilized image chain and none was established.
class NotStabilized : public Error {
 public:
  using Error::Error;
};

class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// Input text could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace shapeq
