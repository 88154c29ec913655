#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace roughwave {
namespace cli {

struct Provenance {
  std::string tool_version;
  std::string config_hash;
  long long seed = 0;
  std::string kind;
};

/// The one writer of an output directory. Artifacts carry the provenance
/// (JSON: a "provenance" member; CSV: a leading '#' line; SVG: a comment);
/// Finish() writes manifest.json listing every file with its SHA-256.
class OutputWriter {
 public:
  OutputWriter(std::filesystem::path root, Provenance provenance);

  void Json(const std::string& name, nlohmann::json body);
  /// `body` starts with the header row.
  void Csv(const std::string& name, const std::string& body);
  void Svg(const std::string& name, const std::string& body);
  void Text(const std::string& name, const std::string& body);
  void Binary(const std::string& name, const std::string& bytes);

  const std::filesystem::path& root() const { return root_; }
  const Provenance& provenance() const { return provenance_; }
  nlohmann::json ProvenanceJson() const;
  /// Writes manifest.json and returns its contents.
  nlohmann::json Finish(const nlohmann::json& extra = nlohmann::json::object());

 private:
  void Write(const std::string& name, const std::string& bytes);

  std::filesystem::path root_;
  Provenance provenance_;
  std::vector<nlohmann::json> files_;
};

/// Reads every manifest.json below `dir` and bundles them into one document.
nlohmann::json AggregateManifests(const std::filesystem::path& dir);

}  // namespace cli
}  // namespace roughwave
