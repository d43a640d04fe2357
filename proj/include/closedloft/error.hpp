#ifndef CLOSEDLOFT_ERROR_HPP
#define CLOSEDLOFT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace closedloft {

enum class ErrorKind {
  invalid_input,
  domain,
  singular,
  precondition,
  parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::singular: return "singular system";
    case ErrorKind::precondition: return "precondition failed";
    case ErrorKind::parse: return "parse error";
  }
  return "error";
}

/// Library error. `stage` names the pipeline step that failed
/// ("interpolate row 3", "parse", ...), when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string stage = {})
      : std::runtime_error(stage.empty() ? message : stage + ": " + message),
        kind_(kind),
        stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message, const std::string& stage) {
  throw Error(kind, message, stage);
}

}  // namespace closedloft

#endif  // CLOSEDLOFT_ERROR_HPP
