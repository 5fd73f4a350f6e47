#include "cst/kv.hpp"

#include <stdexcept>

#include "cst/error.hpp"

namespace cst {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long out = std::stol(value, &pos);
    require(pos == value.size(), "config key '" + key + "': trailing junk in '" + value + "'");
    return out;
  } catch (const std::logic_error&) {
    throw Error("config key '" + key + "': expected an integer, got '" + value + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    unsigned long long out = std::stoull(value, &pos);
    require(pos == value.size(), "config key '" + key + "': trailing junk in '" + value + "'");
    return out;
  } catch (const std::logic_error&) {
    throw Error("config key '" + key + "': expected an unsigned integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double out = std::stod(value, &pos);
    require(pos == value.size(), "config key '" + key + "': trailing junk in '" + value + "'");
    return out;
  } catch (const std::logic_error&) {
    throw Error("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error("config key '" + key + "': expected true|false, got '" + value + "'");
}

}  // namespace cst
