#include "propdetect/hash.hpp"

#include <cstdio>

#include "propdetect/io_util.hpp"

namespace propdetect {

std::uint64_t file_checksum(const std::string& path) {
  return fnv1a64(read_file(path));
}

std::string to_hex(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace propdetect
