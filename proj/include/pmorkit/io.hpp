#pragma once

#include <map>
#include <string>
#include <vector>

#include "pmorkit/linalg.hpp"

namespace pmk {

// Shared plain-text matrix format: line 1 "rows cols", then one line per row
// of space-separated decimals with 17 significant digits.
void write_matrix(const std::string& path, const Matrix& m);
Matrix read_matrix(const std::string& path);

// Sidecar metadata: one "key = value" pair per line.
using KeyValues = std::map<std::string, std::string>;
void write_key_values(const std::string& path, const KeyValues& kv);
KeyValues read_key_values(const std::string& path);

std::string format_double(double x);
std::vector<double> parse_double_list(const std::string& s);
std::string format_double_list(const std::vector<double>& v);

}  // namespace pmk
