#pragma once

#include <map>
#include <string>
#include <vector>

#include "minnaert/types.hpp"

namespace minnaert {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Flat "key = value" text with [section] headers; keys are stored as
// "section.key" ("key" before the first header). '#' and ';' start comments.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }
  // Canonical text, sorted by key.
  std::string dump() const;

 private:
  std::map<std::string, std::string> values_;
};

// 17 significant digits.
std::string format_real(double v);

// Header plus rows; complex values go out as two columns.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& add(double v);
  CsvWriter& add(cplx v);
  CsvWriter& add(const std::string& v);
  CsvWriter& add(long v);
  void end_row();
  const std::string& text() const { return text_; }
  void save(const std::string& path) const;

 private:
  std::string text_;
  std::size_t columns_, current_ = 0;
};

struct ManifestEntry {
  std::string path;  // relative to the manifest directory
  std::string sha256;
};

struct ResultManifest {
  std::string run_id;
  std::string command;
  std::string config_echo;
  std::vector<ManifestEntry> files;
  std::map<std::string, double> timings;
  std::vector<std::string> warnings;

  std::string to_json() const;
  void save(const std::string& dir) const;  // writes dir/manifest.json
};

struct ManifestCheck {
  bool ok = true;
  std::vector<std::string> problems;
};
ManifestCheck check_manifest(const std::string& dir);

// Row-major, little-endian (re, im) float64 pairs, preceded by rows and cols as uint64.
void dump_matrix(const CMat& A, const std::string& path);
CMat load_matrix_dump(const std::string& path);

}  // namespace minnaert
