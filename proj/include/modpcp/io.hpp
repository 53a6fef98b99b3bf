#pragma once

// Text formats used across the project.
//
// Matrix CSV: UTF-8, one matrix row per line, entries separated by commas,
// each entry written with 17 significant digits (exact double round trip),
// no header. An empty file is a matrix with no rows.
//
// Manifest: flat `key = value` lines, UTF-8, `#` starts a comment, blank
// lines ignored. Lists are comma-separated values.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modpcp/matrix_core.hpp"

namespace modpcp::io {

/// 17 significant digits, `%.17g` style.
std::string format_double(double x);
/// Strict parse of a complete field; throws ParseError carrying `line`.
double parse_double(std::string_view field, std::size_t line);

Matrix parse_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

class Manifest {
 public:
  static Manifest parse(std::istream& in);
  static Manifest read(const std::filesystem::path& path);
  void write(std::ostream& out) const;
  void write(const std::filesystem::path& path) const;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);
  void set(const std::string& key, const std::vector<double>& values);
  void set(const std::string& key, const std::vector<std::int64_t>& values);
  void add_comment(const std::string& text) { comments_.push_back(text); }

  /// Throws ParameterError when the key is missing.
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::int64_t> get_ints(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::size_t> lines_;
  std::vector<std::string> comments_;
};

}  // namespace modpcp::io
