#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fstein {

enum class ErrorCode {
  domain = 1,           // argument outside the mathematical domain
  pole,                 // gamma at a non-positive integer
  divergent,            // integral does not converge
  invalid_parameter,    // distribution or config parameter out of range
  unknown_distribution, // catalog name not recognised
  precondition,         // role or hypothesis violated
  nonexistent_mean,     // law has no finite mean
  inversion,            // bracketing or root finding failed
  accuracy,             // quadrature budget exhausted
  evaluation,           // law evaluation violates its own model
  validation,           // user input rejected (CLI / sweep spec)
  io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Thrown when adaptive quadrature runs out of subdivisions; the best
/// available estimate is carried along.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : Error(ErrorCode::accuracy, what), best_(best_estimate), err_(error_estimate) {}
  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

 private:
  double best_;
  double err_;
};

}  // namespace fstein
