#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace epiwave {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

// ---- dataset ----

class MissingFile : public Error {
public:
  explicit MissingFile(std::string file)
      : Error("missing file: " + file), name(std::move(file)) {}
  std::string name;
};

class MalformedSegment : public Error {
public:
  MalformedSegment(std::string file, std::size_t got_lines, std::size_t want_lines)
      : Error("malformed segment " + file + ": got " + std::to_string(got_lines) +
              " samples, want " + std::to_string(want_lines)),
        name(std::move(file)), got(got_lines), want(want_lines) {}
  std::string name;
  std::size_t got;
  std::size_t want;
};

class ParseError : public Error {
public:
  ParseError(std::string file, std::size_t line)
      : Error("parse error in " + file + " at line " + std::to_string(line)),
        name(std::move(file)), line_no(line) {}
  std::string name;
  std::size_t line_no;
};

class UnknownCase : public Error {
public:
  explicit UnknownCase(const std::string& case_name)
      : Error("unknown binary case: " + case_name) {}
};

class DegenerateSplit : public Error {
public:
  using Error::Error;
};

// ---- dwt ----

class UnsupportedFamily : public Error {
public:
  explicit UnsupportedFamily(const std::string& family)
      : Error("unsupported wavelet family: " + family) {}
};

class SignalTooShort : public Error {
public:
  using Error::Error;
};

class BandLengthMismatch : public Error {
public:
  using Error::Error;
};

class DecompositionTooDeep : public Error {
public:
  using Error::Error;
};

class BandMissing : public Error {
public:
  explicit BandMissing(const std::string& band)
      : Error("band missing from decomposition: " + band) {}
};

// ---- pca / features ----

class RankError : public Error {
public:
  using Error::Error;
};

class NonFiniteInput : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class InconsistentDecomposition : public Error {
public:
  using Error::Error;
};

// ---- classifiers ----

class ConvergenceError : public Error {
public:
  explicit ConvergenceError(std::uint64_t iters)
      : Error("optimizer failed to converge after " + std::to_string(iters) + " iterations"),
        iterations(iters) {}
  std::uint64_t iterations;
};

class SingleClassError : public Error {
public:
  using Error::Error;
};

// ---- eval ----

class LabelError : public Error {
public:
  using Error::Error;
};

class EmptyEvaluation : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace epiwave
