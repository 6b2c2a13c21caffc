#pragma once

#include <stdexcept>
#include <string>

namespace dladmm {

enum class ErrorKind { config, data, numeric, checkpoint };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dladmm
