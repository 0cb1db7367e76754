#pragma once

#include <stdexcept>
#include <string>

namespace sdftrack {

/// Base class of every error thrown by the library. `code()` is a short
/// machine-parseable token used by the CLI when reporting failures.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Quaternion norm collapsed to (almost) zero, usually an optimizer blow-up.
struct DegenerateQuaternion : Error {
  explicit DegenerateQuaternion(const std::string& what) : Error("DegenerateQuaternion", what) {}
};

struct InvalidDepth : Error {
  explicit InvalidDepth(const std::string& what) : Error("InvalidDepth", what) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

struct ResolutionTooLow : Error {
  explicit ResolutionTooLow(const std::string& what) : Error("ResolutionTooLow", what) {}
};

struct NoValidPixels : Error {
  explicit NoValidPixels(const std::string& what) : Error("NoValidPixels", what) {}
};

struct FrameMismatch : Error {
  explicit FrameMismatch(const std::string& what) : Error("FrameMismatch", what) {}
};

/// File-level failure; the message always carries the offending path.
struct IoError : Error {
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

/// Malformed file contents; the message carries the path and line/offset.
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

}  // namespace sdftrack
