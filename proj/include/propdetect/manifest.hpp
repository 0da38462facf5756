#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace propdetect {

/// Inputs, config fingerprint, and versions for one pipeline stage,
/// written next to the stage's artifacts so every output is reproducible
/// from its manifest.
struct Manifest {
  std::string stage;
  std::string config_fingerprint;
  std::map<std::string, std::string> inputs;    // name -> path@checksum
  std::map<std::string, std::string> versions;  // e.g. registry, format
  std::map<std::string, std::string> outputs;

  void add_input(const std::string& name, const std::string& path);
  void write(const std::string& dir) const;
};

/// Hex FNV fingerprint of a canonical JSON dump.
std::string fingerprint_of_json(const std::string& canonical_json);

}  // namespace propdetect
