#pragma once

#include <string>

#include "mfchaos/config.hpp"

namespace mfchaos::cli {

/// Convert a command-line string into JSON shaped like `like` (the key's
/// default): numbers, booleans, comma-separated lists, inline JSON objects.
json flag_value(const std::string& key, const std::string& text, const json& like);

/// "picard_tol" -> "--picard-tol"
std::string flag_name(const std::string& key);

}  // namespace mfchaos::cli
