#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace fpme {

// Flat key = value configuration file: one pair per line, '#' starts a
// comment, blank lines ignored.  Typed getters record which keys were
// consumed; finish() turns any unconsumed key into a ConfigError — silent
// typos are the classic way scientific sweeps go wrong.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key);
  int get_int(const std::string& key, int fallback);
  bool get_bool(const std::string& key, bool fallback);
  // Comma-separated doubles / identifiers.
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback);
  std::vector<std::string> get_string_list(
      const std::string& key, const std::vector<std::string>& fallback);

  // Throws ConfigError naming every unconsumed key.
  void finish() const;

  // Verbatim reproduction of the parsed text (config snapshot artifact).
  const std::string& original_text() const { return text_; }

 private:
  std::string text_;
  std::map<std::string, std::string> entries_;
  std::set<std::string> consumed_;
};

}  // namespace fpme
