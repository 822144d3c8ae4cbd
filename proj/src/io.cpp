#include "minnaert/io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace minnaert {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

std::string sha256_file(const std::string& path) { return sha256_hex(slurp(path)); }

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto h = line.find_first_of("#;");
    if (h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError("config line " + std::to_string(lineno) + ": empty key");
    c.values_[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) { return parse(slurp(path)); }

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InputError("missing config key " + key);
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InputError("config key " + key + " is not a number: " + it->second);
  }
}

std::string Config::dump() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

CsvWriter& CsvWriter::add(double v) { return add(format_real(v)); }
CsvWriter& CsvWriter::add(cplx v) {
  add(v.real());
  return add(v.imag());
}
CsvWriter& CsvWriter::add(long v) { return add(std::to_string(v)); }
CsvWriter& CsvWriter::add(const std::string& v) {
  if (current_) text_ += ",";
  text_ += v;
  ++current_;
  return *this;
}

void CsvWriter::end_row() {
  if (current_ != columns_)
    throw std::logic_error("csv row has " + std::to_string(current_) + " columns, header has " + std::to_string(columns_));
  text_ += "\n";
  current_ = 0;
}

void CsvWriter::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text_;
}

std::string ResultManifest::to_json() const {
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  j["command"] = command;
  j["config"] = config_echo;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}});
  j["timings_s"] = timings;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

void ResultManifest::save(const std::string& dir) const {
  std::ofstream out(std::filesystem::path(dir) / "manifest.json", std::ios::binary);
  if (!out) throw InputError("cannot write manifest in " + dir);
  out << to_json();
}

ManifestCheck check_manifest(const std::string& dir) {
  ManifestCheck c;
  const auto path = std::filesystem::path(dir) / "manifest.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(path.string()));
  } catch (const std::exception& e) {
    c.ok = false;
    c.problems.push_back(std::string("cannot read manifest: ") + e.what());
    return c;
  }
  for (const auto& f : j.at("files")) {
    const std::string rel = f.at("path").get<std::string>();
    const auto p = std::filesystem::path(dir) / rel;
    if (!std::filesystem::exists(p)) {
      c.ok = false;
      c.problems.push_back("missing file " + rel);
      continue;
    }
    if (sha256_file(p.string()) != f.at("sha256").get<std::string>()) {
      c.ok = false;
      c.problems.push_back("checksum mismatch for " + rel);
    }
  }
  return c;
}

namespace {
static_assert(std::endian::native == std::endian::little, "matrix dumps assume a little-endian host");

void put_u64(std::ostream& o, std::uint64_t v) { o.write(reinterpret_cast<const char*>(&v), sizeof v); }
void put_f64(std::ostream& o, double v) { o.write(reinterpret_cast<const char*>(&v), sizeof v); }
}  // namespace

void dump_matrix(const CMat& A, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  put_u64(out, static_cast<std::uint64_t>(A.rows()));
  put_u64(out, static_cast<std::uint64_t>(A.cols()));
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      put_f64(out, A(i, j).real());
      put_f64(out, A(i, j).imag());
    }
}

CMat load_matrix_dump(const std::string& path) {
  const std::string s = slurp(path);
  if (s.size() < 16) throw InputError("matrix dump too short");
  std::uint64_t r, c;
  std::memcpy(&r, s.data(), 8);
  std::memcpy(&c, s.data() + 8, 8);
  if (s.size() != 16 + 16 * r * c) throw InputError("matrix dump size mismatch");
  CMat A(r, c);
  const char* p = s.data() + 16;
  for (std::uint64_t i = 0; i < r; ++i)
    for (std::uint64_t j = 0; j < c; ++j) {
      double re, im;
      std::memcpy(&re, p, 8);
      std::memcpy(&im, p + 8, 8);
      p += 16;
      A(i, j) = cplx(re, im);
    }
  return A;
}

}  // namespace minnaert
