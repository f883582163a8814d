#pragma once

#include <stdexcept>
#include <string>

namespace netforge {

// Exit-code mapping used by the CLI: input errors -> 2, numerical -> 3,
// verification failures -> 1.
enum class ErrorKind { Input, Numerical, Verification };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error input_error(std::string msg) {
  return Error(ErrorKind::Input, std::move(msg));
}
inline Error numerical_error(std::string msg) {
  return Error(ErrorKind::Numerical, std::move(msg));
}

}  // namespace netforge
