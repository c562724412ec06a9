#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace iam {

/// Calendar of model periods: a historical base year followed by
/// equally spaced model years from first_model_year through end_year.
class TimeGrid {
 public:
  static constexpr int kMaxEndYear = 2100;

  TimeGrid() = default;
  /// Throws BadTimeGrid unless base < first, step > 0, step divides the span,
  /// and end_year <= 2100.
  TimeGrid(int base_year, int first_model_year, int step, int end_year);

  int base_year() const noexcept { return base_year_; }
  int first_model_year() const noexcept { return first_model_year_; }
  int step() const noexcept { return step_; }
  int end_year() const noexcept { return end_year_; }

  /// Number of model periods (base year excluded).
  std::size_t size() const noexcept;
  int year(std::size_t period) const;
  std::optional<std::size_t> period_of(int year) const noexcept;
  bool contains(int year) const noexcept { return period_of(year).has_value(); }
  std::vector<int> years() const;

  /// Same grid truncated (or extended) to a new end year.
  TimeGrid with_end_year(int end_year) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  int base_year_ = 2010;
  int first_model_year_ = 2015;
  int step_ = 5;
  int end_year_ = 2050;
};

}  // namespace iam
