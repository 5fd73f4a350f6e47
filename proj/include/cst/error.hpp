#pragma once

#include <stdexcept>
#include <string>

namespace cst {

// Data/config validation failure. The CLI maps this to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

}  // namespace cst
