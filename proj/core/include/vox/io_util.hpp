#pragma once

#include <string>

namespace vox {

// Writes via a temp file in the same directory followed by rename, so
// readers never observe a partial file.  Throws IoError.
void write_file_atomic(const std::string& path, const std::string& bytes);

std::string read_file(const std::string& path);

// Shortest-faithful formatting used everywhere numbers land in reports,
// so that identical runs produce identical bytes.
std::string format_double(double v);

// Fixed significant digits (CSV exports use 6).
std::string format_double(double v, int significant_digits);

}  // namespace vox
