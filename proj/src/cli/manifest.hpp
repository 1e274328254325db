#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace kinex::cli {

struct InputDigest {
  std::string path;
  std::string sha256;
};

// Written as manifest.json next to every output set. Contains nothing
// time- or host-dependent, so identical inputs give identical bytes.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> diagnostics;
  std::string tool_version;
};

// Lowercase hex SHA-256 of a file's bytes. Throws Error(Io) if unreadable.
std::string sha256_file(const std::string& path);
std::string sha256_hex(const std::string& bytes);

void write_manifest(std::ostream& out, const RunManifest& manifest);

}  // namespace kinex::cli
