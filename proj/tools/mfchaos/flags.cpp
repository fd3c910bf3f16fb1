#include "mfchaos/flags.hpp"

#include <charconv>
#include <sstream>

#include "mfchaos/error.hpp"

namespace mfchaos::cli {

namespace {

json scalar(const std::string& key, const std::string& s, const json& like) {
  if (like.is_boolean()) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw RangeError(key, "expected true or false");
  }
  if (like.is_number_unsigned() || like.is_number_integer()) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw RangeError(key, "expected a nonnegative integer");
    return v;
  }
  if (like.is_number()) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw RangeError(key, "expected a number");
    return v;
  }
  return s;
}

}  // namespace

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  for (auto& c : s) {
    if (c == '_') c = '-';
  }
  return s;
}

json flag_value(const std::string& key, const std::string& text, const json& like) {
  if (like.is_array()) {
    // element type from the default when it has one, else numbers
    const json elem = like.empty() ? json(0.0) : like.front();
    json arr = json::array();
    if (text.empty()) return arr;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) arr.push_back(scalar(key, item, elem));
    return arr;
  }
  if (like.is_null() || like.is_object()) {
    try {
      return json::parse(text);
    } catch (const json::parse_error&) {
      throw RangeError(key, "expected inline JSON");
    }
  }
  return scalar(key, text, like);
}

}  // namespace mfchaos::cli
