#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace epiwave {

// Shortest decimal form that round-trips an IEEE 754 double ("%.17g").
// Staged artifacts rely on this so that text round-trips are bit-exact.
std::string fmt_full(double v);

// Fixed six decimal places, the reporting precision for percentages.
std::string fmt_f6(double v);

double parse_double(std::string_view text);           // throws InvalidArgument
long long parse_int(std::string_view text);           // throws InvalidArgument

std::vector<std::string> split(std::string_view line, char delim);
std::string_view trim(std::string_view s);

// FNV-1a over a byte string, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace epiwave
