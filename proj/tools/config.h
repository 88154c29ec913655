#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace roughwave {
namespace cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grammar, one statement per line:
///
///   # comment            (also ; comment)
///   [section]
///   key = value
///
/// Values are numbers, true/false, comma-separated lists of numbers, or bare
/// strings. The same document can be given as JSON: {"section": {"key": value}}.
nlohmann::json ParseConfigText(const std::string& text);

/// Reads PATH; JSON when the first non-blank character is '{'.
nlohmann::json LoadConfig(const std::string& path);

/// Every section and key with its default value.
const nlohmann::json& Defaults();

/// Overlays `user` on the defaults for experiment `kind`. Unknown sections or
/// keys and type mismatches throw ConfigError.
nlohmann::json Resolve(const nlohmann::json& user, const std::string& kind);

/// Key-value rendering of a resolved config (the emitted config copy).
std::string ToText(const nlohmann::json& config);

/// SHA-256 of the compact JSON dump, hex; ConfigHash ignores experiment.jobs.
std::string Sha256Hex(const std::string& bytes);
std::string ConfigHash(const nlohmann::json& config);

}  // namespace cli
}  // namespace roughwave
