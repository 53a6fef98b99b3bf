#include "modpcp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "modpcp/errors.hpp"

namespace modpcp::io {

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParseError("invalid number '" + std::string(field) + "'", line);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite number '" + std::string(field) + "'", line);
  return value;
}

Matrix parse_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (trim(text).empty()) {
      // Blank lines are only allowed at the end of the file.
      std::string rest;
      while (std::getline(in, rest)) {
        ++line_no;
        if (!trim(rest).empty()) throw ParseError("blank line inside matrix", line_no - 1);
      }
      break;
    }
    std::vector<double> row;
    for (const auto& field : split(text, ',')) row.push_back(parse_double(field, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  const Eigen::Index n1 = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index n2 = n1 ? static_cast<Eigen::Index>(rows.front().size()) : 0;
  Matrix m(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j) m(i, j) = rows[i][j];
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return parse_matrix_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  std::string line;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) line += ',';
      line += format_double(m(i, j));
    }
    line += '\n';
    out << line;
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_matrix_csv(out, m);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

// ---------------------------------------------------------------- Manifest

Manifest Manifest::parse(std::istream& in) {
  Manifest m;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::string_view view = text;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(view.substr(0, eq)));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (m.values_.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    m.values_[key] = std::string(trim(view.substr(eq + 1)));
    m.lines_[key] = line_no;
  }
  return m;
}

Manifest Manifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void Manifest::write(std::ostream& out) const {
  for (const auto& c : comments_) out << "# " << c << '\n';
  for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write(out);
}

void Manifest::set(const std::string& key, const std::string& value) { values_[key] = value; }
void Manifest::set(const std::string& key, double value) { values_[key] = format_double(value); }
void Manifest::set(const std::string& key, std::int64_t value) { values_[key] = std::to_string(value); }

void Manifest::set(const std::string& key, const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + format_double(values[i]);
  values_[key] = s;
}

void Manifest::set(const std::string& key, const std::vector<std::int64_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + std::to_string(values[i]);
  values_[key] = s;
}

const std::string& Manifest::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ParameterError("manifest key '" + key + "' is missing");
  return it->second;
}

std::string Manifest::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

namespace {
std::size_t line_of(const std::map<std::string, std::size_t>& lines, const std::string& key) {
  auto it = lines.find(key);
  return it == lines.end() ? 0 : it->second;
}

std::int64_t parse_int(std::string_view field, std::size_t line) {
  field = trim(field);
  std::int64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParseError("invalid integer '" + std::string(field) + "'", line);
  }
  return v;
}
}  // namespace

double Manifest::get_double(const std::string& key) const {
  return parse_double(get(key), line_of(lines_, key));
}

double Manifest::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Manifest::get_int(const std::string& key) const {
  return parse_int(get(key), line_of(lines_, key));
}

std::int64_t Manifest::get_int_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> Manifest::get_doubles(const std::string& key) const {
  std::vector<double> out;
  const auto& v = get(key);
  if (trim(v).empty()) return out;
  for (const auto& f : split(v, ',')) out.push_back(parse_double(f, line_of(lines_, key)));
  return out;
}

std::vector<std::int64_t> Manifest::get_ints(const std::string& key) const {
  std::vector<std::int64_t> out;
  const auto& v = get(key);
  if (trim(v).empty()) return out;
  for (const auto& f : split(v, ',')) out.push_back(parse_int(f, line_of(lines_, key)));
  return out;
}

}  // namespace modpcp::io
