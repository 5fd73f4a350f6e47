#pragma once

#include <cstdint>
#include <string>

namespace cst {

// Helpers for the flat "key = value" file syntax shared by train configs and
// generator specs. Parse failures throw Error mentioning the offending key.
std::string trim(const std::string& s);
long parse_long(const std::string& key, const std::string& value);
uint64_t parse_u64(const std::string& key, const std::string& value);
double parse_double(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);

}  // namespace cst
