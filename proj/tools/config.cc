#include "config.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace roughwave {
namespace cli {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool ParseNumber(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::istringstream in(s);
  in >> out;
  return in && in.peek() == std::char_traits<char>::eof();
}

nlohmann::json ParseValue(const std::string& raw) {
  const std::string v = Trim(raw);
  if (v == "true") return true;
  if (v == "false") return false;
  double d;
  if (ParseNumber(v, d)) return d;
  if (v.find(',') != std::string::npos) {
    nlohmann::json list = nlohmann::json::array();
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
      const std::string t = Trim(item);
      if (ParseNumber(t, d)) {
        list.push_back(d);
      } else {
        list.push_back(t);
      }
    }
    return list;
  }
  return v;
}

// Numbers take the integer/real type of the default so that text and JSON
// configs with the same content hash alike.
nlohmann::json Normalize(const nlohmann::json& def, const nlohmann::json& v, const std::string& where) {
  if (def.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    const nlohmann::json proto = def.empty() ? nlohmann::json(0.0) : def[0];
    for (const auto& item : v) {
      if (!item.is_number()) throw ConfigError(where + ": list entries must be numbers");
      out.push_back(Normalize(proto, item, where));
    }
    return out;
  }
  if (!def.is_number()) return v;
  const double d = v.get<double>();
  if (def.is_number_integer()) {
    if (d != std::floor(d)) throw ConfigError(where + ": expected an integer");
    return static_cast<long long>(d);
  }
  return d;
}

}  // namespace

nlohmann::json ParseConfigText(const std::string& text) {
  nlohmann::json out = nlohmann::json::object();
  std::istringstream in(text);
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("config line " + std::to_string(number) + ": bad section");
      section = Trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty section");
      out[section] = out.value(section, nlohmann::json::object());
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(number) + ": key outside a section");
    }
    const std::string key = Trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    out[section][key] = ParseValue(t.substr(eq + 1));
  }
  return out;
}

nlohmann::json LoadConfig(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
  }
  return ParseConfigText(text);
}

const nlohmann::json& Defaults() {
  static const nlohmann::json d = {
      {"experiment", {{"kind", "simulate"}, {"seed", 1}, {"jobs", 1}, {"plots", true}}},
      {"coefficient",
       {{"family", "constant"},
        {"value", 1.0},
        {"base", 2.0},
        {"amplitude", 1.0},
        {"center", 0.5},
        {"exponent", 0.5},
        {"n_max", 16},
        {"weight_power", 0.0},
        {"frequency", 1.0},
        {"phase", 0.0}}},
      {"sequence",
       {{"descriptor", "psi:identity"}, {"mode", "scaled"}, {"N", 1}, {"j_lo", 2}, {"j_hi", 6}, {"j0", 4}}},
      {"numerics",
       {{"resolution", 1024},
        {"cfl", 0.9},
        {"T", 0.0},
        {"tolerance", 1e-12},
        {"energy_orders", 2},
        {"snapshot_stride", 0}}},
      {"data",
       {{"profile", "sine"},
        {"k", 1},
        {"amplitude", 1.0},
        {"velocity", false},
        {"center", 0.5},
        {"width", 0.05},
        {"cutoff", 8}}},
      {"observability",
       {{"m_max", 2},
        {"betas", {0.1, 0.2}},
        {"cutoffs", {16, 64}},
        {"random_members", 16},
        {"adversarial", true},
        {"gramian_cutoff", 16}}},
      {"counterexample", {{"m_list", {0, 1, 2}}, {"min_resolution", 1024}, {"max_resolution", 16384}}},
      {"control", {{"resolution", 256}, {"m", 0}, {"tolerance", 1e-6}, {"max_iterations", 200}}},
      {"modulus", {{"intervals", 65536}, {"j_max", 10}, {"input", ""}}},
      {"report", {{"input", ""}}},
  };
  return d;
}

nlohmann::json Resolve(const nlohmann::json& user, const std::string& kind) {
  if (!user.is_object()) throw ConfigError("config must be an object of sections");
  nlohmann::json out = Defaults();
  for (const auto& [section, body] : user.items()) {
    if (!out.contains(section)) throw ConfigError("unknown config section [" + section + "]");
    if (!body.is_object()) throw ConfigError("section [" + section + "] must hold key = value pairs");
    for (const auto& [key, value] : body.items()) {
      if (!out[section].contains(key)) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
      const auto& def = out[section][key];
      nlohmann::json v = value;
      // A one-element list reads as a bare number in the text grammar.
      if (def.is_array() && v.is_number()) v = nlohmann::json::array({v});
      const bool ok = (def.is_number() && v.is_number()) || (def.is_boolean() && v.is_boolean()) ||
                      (def.is_string() && v.is_string()) || (def.is_array() && v.is_array());
      if (!ok) throw ConfigError("[" + section + "] " + key + ": expected " + def.type_name());
      out[section][key] = Normalize(def, v, section + "." + key);
    }
  }
  if (user.contains("experiment") && user["experiment"].contains("kind") &&
      user["experiment"]["kind"] != kind && kind != "selftest") {
    throw ConfigError("config kind '" + user["experiment"]["kind"].get<std::string>() +
                      "' does not match the subcommand '" + kind + "'");
  }
  out["experiment"]["kind"] = kind;
  return out;
}

std::string ToText(const nlohmann::json& config) {
  std::ostringstream s;
  for (const auto& [section, body] : config.items()) {
    s << '[' << section << "]\n";
    for (const auto& [key, value] : body.items()) {
      s << key << " = ";
      if (value.is_string()) {
        s << value.get<std::string>();
      } else if (value.is_array()) {
        for (size_t i = 0; i < value.size(); ++i) {
          s << (i ? ", " : "") << (value[i].is_string() ? value[i].get<std::string>() : value[i].dump());
        }
      } else {
        s << value.dump();
      }
      s << '\n';
    }
    s << '\n';
  }
  return s.str();
}

std::string Sha256Hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return s.str();
}

// The thread count never changes results, so it stays out of the hash.
std::string ConfigHash(const nlohmann::json& config) {
  nlohmann::json c = config;
  if (c.contains("experiment")) c["experiment"].erase("jobs");
  return Sha256Hex(c.dump());
}

}  // namespace cli
}  // namespace roughwave
