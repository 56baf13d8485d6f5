#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fpme {

// Deterministic CSV writing: shortest round-trip double formatting
// (std::to_chars), comma separator, '.' decimal point, LF endings.
// Identical inputs produce byte-identical files on every platform with
// IEEE doubles, which is what makes run artifacts hashable.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
  static CsvTable read_file(const std::string& path);
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// FNV-1a 64-bit content hash, hex-encoded; used for manifest entries and
// run-directory names.
uint64_t fnv1a(const std::string& data);
std::string fnv1a_hex(const std::string& data);

}  // namespace fpme
