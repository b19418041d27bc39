#pragma once

// Flat INI configs, run manifests and CSV output for the batch front end.
//
//   # comment
//   [section]
//   key = value
//
// One level of sections; keys outside any section are rejected. serialize() emits sections
// and keys in sorted order, so serialize(parse(serialize(c))) == serialize(c).

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "dslab/errors.hpp"

namespace dslab {

inline constexpr const char* kToolVersion = "dslab 0.1.0";

namespace detail {
inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}
}  // namespace detail

class Config {
 public:
  using Section = std::map<std::string, std::string>;

  static Config parse(std::string_view text, const std::string& origin = "config") {
    Config c;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
      ++line_no;
      const std::string line = detail::trim(raw);
      auto fail = [&](const std::string& why) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + why);
      };
      if (line.empty() || line[0] == '#' || line[0] == ';') continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail("unterminated section header");
        section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
        if (!detail::valid_name(section)) fail("bad section name '" + section + "'");
        c.sections_[section];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("expected key = value");
      if (section.empty()) fail("key outside any section");
      const std::string key = detail::trim(std::string_view(line).substr(0, eq));
      const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
      if (!detail::valid_name(key)) fail("bad key '" + key + "'");
      auto& sec = c.sections_[section];
      if (sec.count(key)) fail("duplicate key '" + section + "." + key + "'");
      sec[key] = value;
    }
    return c;
  }

  static Config load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
  }

  std::string serialize() const {
    std::string out;
    bool first = true;
    for (const auto& [name, sec] : sections_) {
      if (!first) out += '\n';
      first = false;
      out += "[" + name + "]\n";
      for (const auto& [k, v] : sec) out += k + " = " + v + "\n";
    }
    return out;
  }

  bool has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key);
  }
  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

  void set(const std::string& section, const std::string& key, const std::string& value) {
    if (!detail::valid_name(section) || !detail::valid_name(key))
      throw ConfigError("config: bad name '" + section + "." + key + "'");
    sections_[section][key] = value;
  }

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
    return raw(section, key).value_or(fallback);
  }

  double get_double(const std::string& section, const std::string& key, double fallback) const {
    auto r = raw(section, key);
    return r ? to_double(*r, section + "." + key) : fallback;
  }

  long long get_int(const std::string& section, const std::string& key, long long fallback) const {
    auto r = raw(section, key);
    if (!r) return fallback;
    long long v = 0;
    auto [p, ec] = std::from_chars(r->data(), r->data() + r->size(), v);
    if (ec != std::errc() || p != r->data() + r->size())
      throw ConfigError("config: " + section + "." + key + " is not an integer: '" + *r + "'");
    return v;
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t fallback) const {
    auto r = raw(section, key);
    return r ? to_u64(*r, section + "." + key) : fallback;
  }

  bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
    auto r = raw(section, key);
    if (!r) return fallback;
    if (*r == "true" || *r == "1" || *r == "yes" || *r == "on") return true;
    if (*r == "false" || *r == "0" || *r == "no" || *r == "off") return false;
    throw ConfigError("config: " + section + "." + key + " is not a boolean: '" + *r + "'");
  }

  /// Comma-separated list of numbers.
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const {
    auto r = raw(section, key);
    if (!r) return fallback;
    std::vector<double> out;
    std::istringstream in(*r);
    for (std::string item; std::getline(in, item, ',');) out.push_back(to_double(detail::trim(item), section + "." + key));
    if (out.empty()) throw ConfigError("config: " + section + "." + key + " is an empty list");
    return out;
  }

  /// Keys of `section` not in `known`; the CLI rejects typos with these.
  std::vector<std::string> unknown_keys(const std::string& section, const std::vector<std::string>& known) const {
    std::vector<std::string> out;
    auto s = sections_.find(section);
    if (s == sections_.end()) return out;
    for (const auto& [k, v] : s->second)
      if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back(k);
    return out;
  }

  const std::map<std::string, Section>& sections() const { return sections_; }

  static double to_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw ConfigError("config: " + what + " is not a number: '" + s + "'");
    return v;
  }

  static std::uint64_t to_u64(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw ConfigError(what + " is not an unsigned 64-bit integer: '" + s + "'");
    return v;
  }

 private:
  std::map<std::string, Section> sections_;
};

// ---------------------------------------------------------------------------------------------
// Hashing

inline std::string sha1_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("sha1: digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

/// Same id `git hash-object` assigns to a blob with this content.
inline std::string git_blob_hash(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob.append(content);
  return sha1_hex(blob);
}

// ---------------------------------------------------------------------------------------------
// CSV

/// "%.17g": round-trips every double; locale-independent for the C locale the tools run in.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  template <class... Ts>
  void add(const Ts&... cells) {
    if (sizeof...(cells) != header_.size()) throw std::logic_error("csv: row width does not match header");
    std::vector<std::string> row;
    (row.push_back(cell(cells)), ...);
    add_row(std::move(row));
  }

  void add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::logic_error("csv: row width does not match header");
    for (const auto& c : row)
      if (c.find_first_of(",\"\n") != std::string::npos) throw std::logic_error("csv: cell needs quoting: " + c);
    rows_.push_back(std::move(row));
  }

  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::string out = join(header_);
    for (const auto& r : rows_) out += join(r);
    return out;
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::ios_base::failure("cannot write " + path.string());
    os << str();
    if (!os) throw std::ios_base::failure("write failed: " + path.string());
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "1" : "0"; }
  template <class T>
    requires std::is_integral_v<T>
  static std::string cell(T v) {
    return std::to_string(v);
  }

  static std::string join(const std::vector<std::string>& r) {
    std::string out;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    return out + "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------------------------
// Manifest

struct RunManifest {
  std::string command;
  std::string tool_version = kToolVersion;
  std::string config;  ///< canonical serialized config after CLI overrides
  std::uint64_t seed = 0;
  int grid_modes = 0;
  double grid_length = 0.0;
  double wall_seconds = 0.0;
  std::size_t steps = 0;
  std::map<std::string, std::size_t> outputs;  ///< CSV file -> declared row count
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> warnings;

  /// Hash of everything that determines the CSV bytes.
  std::string input_hash() const {
    return git_blob_hash(command + "\n" + tool_version + "\nseed = " + std::to_string(seed) + "\n" + config);
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["tool_version"] = tool_version;
    j["config"] = config;
    j["seed"] = seed;
    if (grid_modes > 0)
      j["grid"] = {{"modes", grid_modes}, {"length", grid_length}};
    else
      j["grid"] = nullptr;
    j["input_hash"] = input_hash();
    j["wall_seconds"] = wall_seconds;
    j["steps"] = steps;
    j["outputs"] = outputs;
    j["summary"] = summary;
    j["warnings"] = warnings;
    return j;
  }

  void write(const std::filesystem::path& dir) const {
    const auto path = dir / "manifest.json";
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::ios_base::failure("cannot write " + path.string());
    os << to_json().dump(2) << "\n";
    if (!os) throw std::ios_base::failure("write failed: " + path.string());
  }
};

}  // namespace dslab
