#include "mfchaos/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mfchaos/error.hpp"

namespace mfchaos::cli {

std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error("cli: cannot allocate digest context");
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("cli: SHA-1 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string git_blob_hash_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cli: cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return git_blob_hash(ss.str());
}

json to_json(const RunManifest& m) {
  return {{"schema_version", kManifestSchema},
          {"config_schema", m.schema},
          {"tool_version", m.tool_version},
          {"config", m.config},
          {"verdict", m.verdict},
          {"outputs", m.outputs}};
}

std::map<std::string, std::string> hash_outputs(const std::filesystem::path& dir, const std::vector<std::string>& names) {
  std::map<std::string, std::string> out;
  for (const auto& name : names) out[name] = git_blob_hash_file(dir / name);
  return out;
}

}  // namespace mfchaos::cli
