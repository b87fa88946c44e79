#pragma once

#include <string>
#include <vector>

namespace nlsprof {

/// 17-significant-digit decimal rendering (round-trips doubles).
std::string fmt17(double x);

/// RFC-4180 field quoting: fields containing comma, quote or newline are
/// wrapped in double quotes with embedded quotes doubled.
std::string csv_field(const std::string& raw);

std::string csv_row(const std::vector<std::string>& fields);

/// Writes content to path atomically (temp file in the same directory,
/// then rename).  Throws std::runtime_error on I/O failure.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace nlsprof
