#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iam {

/// Splits one CSV record. Double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_record(std::string_view line);
/// Quotes a field only when it needs it.
std::string csv_field(std::string_view text);

/// A header-checked table. Every required column must be present, optional
/// columns may be absent, anything else is rejected. Errors are
/// SchemaViolation naming the table, line and column.
class CsvTable {
 public:
  static CsvTable parse(std::string_view text, std::string name,
                        const std::vector<std::string>& required,
                        const std::vector<std::string>& optional = {});
  /// Throws MissingTable when the file does not exist.
  static CsvTable read(const std::filesystem::path& path,
                       const std::vector<std::string>& required,
                       const std::vector<std::string>& optional = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return rows_.size(); }
  /// 1-based line number of a data row in the source file.
  std::size_t line(std::size_t row) const { return lines_[row]; }

  bool has_column(std::string_view column) const;
  /// Raw text; empty when the column is optional and absent.
  const std::string& text(std::size_t row, std::string_view column) const;
  std::string required_text(std::size_t row, std::string_view column) const;
  double number(std::size_t row, std::string_view column) const;
  std::optional<double> optional_number(std::size_t row, std::string_view column) const;
  int integer(std::size_t row, std::string_view column) const;
  bool boolean(std::size_t row, std::string_view column) const;

  [[noreturn]] void fail(std::size_t row, std::string_view column, std::string reason) const;

 private:
  std::size_t column_index(std::string_view column) const;

  std::string name_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

}  // namespace iam
