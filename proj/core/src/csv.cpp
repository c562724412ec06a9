#include "iam/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable CsvTable::parse(std::string_view text, std::string name,
                         const std::vector<std::string>& required,
                         const std::vector<std::string>& optional) {
  CsvTable t;
  t.name_ = std::move(name);
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (line_no == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    if (raw.empty()) continue;
    auto fields = split_csv_record(raw);
    for (auto& f : fields) {
      const auto a = f.find_first_not_of(" \t");
      const auto b = f.find_last_not_of(" \t");
      f = a == std::string::npos ? std::string() : f.substr(a, b - a + 1);
    }
    if (!have_header) {
      have_header = true;
      t.header_ = std::move(fields);
      for (const auto& r : required) {
        if (std::find(t.header_.begin(), t.header_.end(), r) == t.header_.end()) {
          throw SchemaViolation(t.name_, line_no, r, "required column missing from header");
        }
      }
      for (std::size_t i = 0; i < t.header_.size(); ++i) {
        const auto& h = t.header_[i];
        const bool known = std::find(required.begin(), required.end(), h) != required.end() ||
                           std::find(optional.begin(), optional.end(), h) != optional.end();
        if (!known) throw SchemaViolation(t.name_, line_no, h, "unknown column");
        if (std::find(t.header_.begin(), t.header_.begin() + i, h) != t.header_.begin() + i) {
          throw SchemaViolation(t.name_, line_no, h, "duplicate column");
        }
      }
      continue;
    }
    if (fields.size() != t.header_.size()) {
      throw SchemaViolation(t.name_, line_no, fields.size() > t.header_.size() ? "(extra)" : t.header_[fields.size()],
                            fmt::format("expected {} fields, found {}", t.header_.size(), fields.size()));
    }
    t.rows_.push_back(std::move(fields));
    t.lines_.push_back(line_no);
  }
  if (!have_header) throw SchemaViolation(t.name_, 1, "(header)", "table is empty");
  return t;
}

CsvTable CsvTable::read(const std::filesystem::path& path, const std::vector<std::string>& required,
                        const std::vector<std::string>& optional) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingTable(fmt::format("table '{}' not found", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.filename().string(), required, optional);
}

bool CsvTable::has_column(std::string_view column) const {
  return std::find(header_.begin(), header_.end(), column) != header_.end();
}

std::size_t CsvTable::column_index(std::string_view column) const {
  return static_cast<std::size_t>(std::find(header_.begin(), header_.end(), column) - header_.begin());
}

const std::string& CsvTable::text(std::size_t row, std::string_view column) const {
  static const std::string kEmpty;
  const auto i = column_index(column);
  return i < header_.size() ? rows_[row][i] : kEmpty;
}

std::string CsvTable::required_text(std::size_t row, std::string_view column) const {
  const auto& s = text(row, column);
  if (s.empty()) fail(row, column, "value required");
  return s;
}

void CsvTable::fail(std::size_t row, std::string_view column, std::string reason) const {
  throw SchemaViolation(name_, lines_[row], std::string(column), std::move(reason));
}

double CsvTable::number(std::size_t row, std::string_view column) const {
  const auto& s = required_text(row, column);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(row, column, fmt::format("'{}' is not a finite number", s));
  }
  return v;
}

std::optional<double> CsvTable::optional_number(std::size_t row, std::string_view column) const {
  if (text(row, column).empty()) return std::nullopt;
  return number(row, column);
}

int CsvTable::integer(std::size_t row, std::string_view column) const {
  const auto& s = required_text(row, column);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(row, column, fmt::format("'{}' is not an integer", s));
  }
  return v;
}

bool CsvTable::boolean(std::size_t row, std::string_view column) const {
  const auto& s = text(row, column);
  if (s.empty() || s == "false") return false;
  if (s == "true") return true;
  fail(row, column, fmt::format("'{}' is not true or false", s));
}

}  // namespace iam
