#pragma once
#include <string>
#include <vector>

namespace qadapt {

// Shortest decimal form that round-trips the exact double; locale-free.
std::string format_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

// Throws std::invalid_argument with the offending text on bad input.
double parse_double(const std::string& s);
long parse_long(const std::string& s);

std::string trim(const std::string& s);

}  // namespace qadapt
