#include "manifest.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "config.h"

namespace roughwave {
namespace cli {

OutputWriter::OutputWriter(std::filesystem::path root, Provenance provenance)
    : root_(std::move(root)), provenance_(std::move(provenance)) {
  std::filesystem::create_directories(root_);
}

nlohmann::json OutputWriter::ProvenanceJson() const {
  return {{"tool", "roughwave"},
          {"version", provenance_.tool_version},
          {"config_hash", provenance_.config_hash},
          {"seed", provenance_.seed},
          {"kind", provenance_.kind}};
}

void OutputWriter::Write(const std::string& name, const std::string& bytes) {
  const std::filesystem::path rel(name);
  if (rel.is_absolute() || name.find("..") != std::string::npos) {
    throw std::invalid_argument("output name escapes the output directory: " + name);
  }
  const auto path = root_ / rel;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bytes;
  files_.push_back({{"path", rel.generic_string()}, {"bytes", bytes.size()}, {"sha256", Sha256Hex(bytes)}});
}

void OutputWriter::Json(const std::string& name, nlohmann::json body) {
  body["provenance"] = ProvenanceJson();
  Write(name, body.dump(2) + "\n");
}

void OutputWriter::Csv(const std::string& name, const std::string& body) {
  std::ostringstream s;
  s << "# roughwave " << provenance_.tool_version << " config " << provenance_.config_hash
    << " seed " << provenance_.seed << "\n"
    << body;
  Write(name, s.str());
}

void OutputWriter::Svg(const std::string& name, const std::string& body) {
  std::ostringstream s;
  const auto end = body.find("?>");
  const size_t cut = end == std::string::npos ? 0 : end + 2;
  s << body.substr(0, cut) << "\n<!-- roughwave " << provenance_.tool_version << " config "
    << provenance_.config_hash << " seed " << provenance_.seed << " -->" << body.substr(cut);
  Write(name, s.str());
}

void OutputWriter::Text(const std::string& name, const std::string& body) {
  Write(name, "# roughwave " + provenance_.tool_version + " config " + provenance_.config_hash +
                  " seed " + std::to_string(provenance_.seed) + "\n" + body);
}

void OutputWriter::Binary(const std::string& name, const std::string& bytes) { Write(name, bytes); }

nlohmann::json OutputWriter::Finish(const nlohmann::json& extra) {
  nlohmann::json m = ProvenanceJson();
  m["files"] = files_;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  std::ofstream out(root_ / "manifest.json");
  out << m.dump(2) << "\n";
  return m;
}

nlohmann::json AggregateManifests(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::invalid_argument("report input is not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> found;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() == "manifest.json") found.push_back(e.path());
  }
  std::sort(found.begin(), found.end());
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : found) {
    std::ifstream in(p);
    nlohmann::json m = nlohmann::json::parse(in);
    m["directory"] = std::filesystem::relative(p.parent_path(), dir).generic_string();
    // Checksums are re-verified so a stale manifest shows up in the report.
    bool intact = true;
    for (const auto& f : m.value("files", nlohmann::json::array())) {
      std::ifstream file(p.parent_path() / f["path"].get<std::string>(), std::ios::binary);
      std::stringstream buf;
      buf << file.rdbuf();
      intact = intact && file && Sha256Hex(buf.str()) == f["sha256"];
    }
    m["intact"] = intact;
    out.push_back(m);
  }
  return {{"manifests", out}, {"count", out.size()}};
}

}  // namespace cli
}  // namespace roughwave
