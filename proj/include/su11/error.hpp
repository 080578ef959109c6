#ifndef SU11_ERROR_HPP
#define SU11_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace su11 {

enum class ErrorKind {
  invalid_argument,
  index_out_of_range,
  mode_count_mismatch,
  undefined_lcc,
  non_informative_point,
  step_underflow,
  flat_landscape,
  truncation_leakage,
  config,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::index_out_of_range: return "index_out_of_range";
    case ErrorKind::mode_count_mismatch: return "mode_count_mismatch";
    case ErrorKind::undefined_lcc: return "undefined_lcc";
    case ErrorKind::non_informative_point: return "non_informative_point";
    case ErrorKind::step_underflow: return "step_underflow";
    case ErrorKind::flat_landscape: return "flat_landscape";
    case ErrorKind::truncation_leakage: return "truncation_leakage";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

/// Exception type thrown by every su11 component. `kind()` is stable and
/// machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace detail
}  // namespace su11

#endif  // SU11_ERROR_HPP
