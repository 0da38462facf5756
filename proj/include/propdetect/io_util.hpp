#pragma once

#include <string>
#include <vector>

namespace propdetect {

std::string read_file(const std::string& path);

// Writes to path.tmp then renames, so partial writes never clobber a
// previous artifact.
void write_file_atomic(const std::string& path, const std::string& content);

std::vector<std::string> read_lines(const std::string& path);

void ensure_dir(const std::string& path);

bool file_exists(const std::string& path);

// Locale-independent float formatting used by every CSV writer.
std::string format_double(double value, int decimals = 6);

}  // namespace propdetect
