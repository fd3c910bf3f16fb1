#pragma once

#include "mfchaos/config.hpp"
#include "mfchaos/manifest.hpp"

namespace mfchaos::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdictFail = 2;

const char* tool_version();

struct RunResult {
  int exit_code = kExitPass;
  RunManifest manifest;
};

/// Execute a validated config, writing outputs, manifest.json and timing.json
/// into its output directory. Errors propagate as exceptions.
RunResult run(const ExperimentConfig& config);

}  // namespace mfchaos::cli
