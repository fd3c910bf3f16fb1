#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mfchaos/config.hpp"

namespace mfchaos::cli {

/// Git blob id: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_hash(const std::string& content);
std::string git_blob_hash_file(const std::filesystem::path& path);

struct RunManifest {
  std::string schema = kConfigSchema;
  std::string tool_version;
  json config;
  std::string verdict;                         ///< pass | fail
  std::map<std::string, std::string> outputs;  ///< file name -> git blob hash
};

json to_json(const RunManifest& m);

/// Hashes of the named files in dir.
std::map<std::string, std::string> hash_outputs(const std::filesystem::path& dir, const std::vector<std::string>& names);

inline constexpr const char* kManifestFile = "manifest.json";
/// Wall time lives beside the manifest so the manifest stays reproducible.
inline constexpr const char* kTimingFile = "timing.json";

}  // namespace mfchaos::cli
