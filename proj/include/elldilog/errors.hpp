#ifndef ELLDILOG_ERRORS_HPP
#define ELLDILOG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace elldilog {

// Exit codes used by the verify tool; the exception type decides the code.
enum class ExitCode : int {
  ok = 0,
  verdict_failed = 1,
  config_error = 2,
  numeric_error = 3,
  unsupported_place = 4,
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A support point has no Mordell-Weil coordinates.
struct CoordinateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Place whose reduction type the requested computation does not cover.
struct UnsupportedPlace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Series, Newton or AGM failed to reach the requested accuracy.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace elldilog

#endif  // ELLDILOG_ERRORS_HPP
