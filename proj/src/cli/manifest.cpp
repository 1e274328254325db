#include "manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>

#include "kinex/error.hpp"
#include "kinex/format.hpp"

namespace kinex::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void write_manifest(std::ostream& out, const RunManifest& m) {
  JsonWriter w(out);
  w.begin_object();
  w.key("command").value(m.command);
  w.key("tool_version").value(m.tool_version);
  w.key("parameters").begin_object();
  for (const auto& [k, v] : m.parameters) w.key(k).value(v);
  w.end_object();
  w.key("inputs").begin_array();
  for (const auto& in : m.inputs) {
    w.begin_object();
    w.key("path").value(in.path);
    w.key("sha256").value(in.sha256);
    w.end_object();
  }
  w.end_array();
  w.key("outputs").begin_array();
  for (const auto& o : m.outputs) w.value(o);
  w.end_array();
  w.key("diagnostics").begin_object();
  for (const auto& [k, v] : m.diagnostics) w.key(k).value(v);
  w.end_object();
  w.end_object();
}

}  // namespace kinex::cli
