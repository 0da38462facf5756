#include "propdetect/manifest.hpp"

#include <json.hpp>

#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"

namespace propdetect {

void Manifest::add_input(const std::string& name, const std::string& path) {
  inputs[name] = path + "@" + to_hex(file_checksum(path));
}

void Manifest::write(const std::string& dir) const {
  ensure_dir(dir);
  nlohmann::json doc;
  doc["stage"] = stage;
  doc["config_fingerprint"] = config_fingerprint;
  doc["inputs"] = inputs;
  doc["versions"] = versions;
  doc["outputs"] = outputs;
  write_file_atomic(dir + "/manifest.json", doc.dump(2) + "\n");
}

std::string fingerprint_of_json(const std::string& canonical_json) {
  return to_hex(fnv1a64(canonical_json));
}

}  // namespace propdetect
