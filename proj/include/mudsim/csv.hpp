#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mudsim::csv {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

std::vector<std::string_view> split_fields(std::string_view line);

std::string_view trim(std::string_view s);

// Throws std::invalid_argument naming `context` on malformed input.
double parse_double(std::string_view field, const std::string& context);

}  // namespace mudsim::csv
