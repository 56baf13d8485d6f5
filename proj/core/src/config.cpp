#include "fpme/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fpme/errors.hpp"

namespace fpme {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& raw) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(raw, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + raw +
                      "' as a number");
  }
  if (pos != raw.size())
    throw ConfigError("key '" + key + "': trailing junk in number '" + raw +
                      "'");
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  cfg.text_ = text;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    if (cfg.entries_.count(key))
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    cfg.entries_[key] = value;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::string KeyValueConfig::get_string(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError("missing required key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) {
  if (!has(key)) return fallback;
  return get_string(key);
}

double KeyValueConfig::get_double(const std::string& key) {
  return parse_double(key, get_string(key));
}

double KeyValueConfig::get_double(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_double(key);
}

int KeyValueConfig::get_int(const std::string& key) {
  std::string raw = get_string(key);
  size_t pos = 0;
  int v;
  try {
    v = std::stoi(raw, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + raw +
                      "' as an integer");
  }
  if (pos != raw.size())
    throw ConfigError("key '" + key + "': trailing junk in integer '" + raw +
                      "'");
  return v;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) {
  if (!has(key)) return fallback;
  return get_int(key);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  std::string raw = get_string(key);
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + raw +
                    "'");
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, const std::vector<double>& fallback) {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const std::string& part : split_commas(get_string(key)))
    out.push_back(parse_double(key, part));
  return out;
}

std::vector<std::string> KeyValueConfig::get_string_list(
    const std::string& key, const std::vector<std::string>& fallback) {
  if (!has(key)) return fallback;
  return split_commas(get_string(key));
}

void KeyValueConfig::finish() const {
  std::string stray;
  for (const auto& [key, value] : entries_)
    if (!consumed_.count(key)) stray += (stray.empty() ? "" : ", ") + key;
  if (!stray.empty())
    throw ConfigError("unknown config keys: " + stray);
}

}  // namespace fpme
