#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drazinkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value reached a public entry point.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Triangular solve hit a diagonal entry below the singularity threshold.
class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Shifted QR iteration did not converge. Carries the eigenvalues that had
/// already deflated.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what,
                   std::vector<std::complex<double>> partial)
      : Error(what), partial_(std::move(partial)) {}
  const std::vector<std::complex<double>>& partial() const noexcept {
    return partial_;
  }

 private:
  std::vector<std::complex<double>> partial_;
};

/// Krylov seed vector was exactly zero.
class ZeroSeedError : public Error {
 public:
  ZeroSeedError()
      : Error("Drazin-consistent residual already annihilated (zero seed)") {}
};

/// Fewer nonzero Ritz values than requested.
class RitzError : public Error {
 public:
  using Error::Error;
};

/// Assembled Drazin inverse failed the axiom check.
class AxiomError : public Error {
 public:
  AxiomError(const std::string& what, double core, double reflexive,
             double commute)
      : Error(what), core_(core), reflexive_(reflexive), commute_(commute) {}
  double core() const noexcept { return core_; }
  double reflexive() const noexcept { return reflexive_; }
  double commute() const noexcept { return commute_; }

 private:
  double core_, reflexive_, commute_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace drazinkit
