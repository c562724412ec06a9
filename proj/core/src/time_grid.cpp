#include "iam/time_grid.hpp"

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

TimeGrid::TimeGrid(int base_year, int first_model_year, int step, int end_year)
    : base_year_(base_year),
      first_model_year_(first_model_year),
      step_(step),
      end_year_(end_year) {
  if (step <= 0) {
    throw BadTimeGrid(fmt::format("time step must be positive, got {}", step));
  }
  if (base_year >= first_model_year) {
    throw BadTimeGrid(fmt::format("base year {} must precede first model year {}",
                                  base_year, first_model_year));
  }
  if (end_year < first_model_year) {
    throw BadTimeGrid(fmt::format("end year {} precedes first model year {}",
                                  end_year, first_model_year));
  }
  if (end_year > kMaxEndYear) {
    throw BadTimeGrid(fmt::format("end year {} exceeds {}", end_year, kMaxEndYear));
  }
  if ((end_year - first_model_year) % step != 0) {
    throw BadTimeGrid(fmt::format("step {} does not divide {}-{}", step,
                                  first_model_year, end_year));
  }
}

std::size_t TimeGrid::size() const noexcept {
  return static_cast<std::size_t>((end_year_ - first_model_year_) / step_ + 1);
}

int TimeGrid::year(std::size_t period) const {
  if (period >= size()) {
    throw BadTimeGrid(fmt::format("period {} outside grid of {} periods", period, size()));
  }
  return first_model_year_ + static_cast<int>(period) * step_;
}

std::optional<std::size_t> TimeGrid::period_of(int year) const noexcept {
  if (year < first_model_year_ || year > end_year_) return std::nullopt;
  if ((year - first_model_year_) % step_ != 0) return std::nullopt;
  return static_cast<std::size_t>((year - first_model_year_) / step_);
}

std::vector<int> TimeGrid::years() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::size_t p = 0; p < size(); ++p) out.push_back(year(p));
  return out;
}

TimeGrid TimeGrid::with_end_year(int end_year) const {
  return TimeGrid(base_year_, first_model_year_, step_, end_year);
}

}  // namespace iam
