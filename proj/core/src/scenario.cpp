#include "iam/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

// Matches `prefix(NNNN)` and returns the year.
std::optional<int> call_year(std::string_view value, std::string_view prefix) {
  if (!value.starts_with(prefix) || !value.ends_with(')')) return std::nullopt;
  value.remove_prefix(prefix.size());
  if (!value.starts_with('(')) return std::nullopt;
  return parse_number<int>(value.substr(1, value.size() - 2));
}

const char* const kKeys[] = {"name", "cap", "nuclear_new_builds", "storage_cost_usd_per_t",
                             "dac_cost_usd_per_t", "exogenous_trajectories"};

}  // namespace

ScenarioConfig parse_scenario(std::string_view text, std::string_view origin) {
  ScenarioConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw BadValue(fmt::format("{}:{}: expected key=value", origin, line_no));
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    auto bad = [&](std::string_view why) {
      return BadValue(fmt::format("{}:{}: {} = '{}': {}", origin, line_no, key, value, why));
    };
    if (!seen.emplace(key, line_no).second) throw bad("key given twice");

    if (key == "name") {
      if (value.empty()) throw bad("empty name");
      cfg.name = value;
    } else if (key == "cap") {
      if (value == "none") {
        cfg.netzero_year.reset();
      } else if (auto y = call_year(value, "linear")) {
        cfg.netzero_year = *y;
      } else {
        throw bad("expected none or linear(YEAR)");
      }
    } else if (key == "nuclear_new_builds") {
      if (value == "free") {
        cfg.nuclear_banned_after.reset();
      } else if (auto y = call_year(value, "banned_after")) {
        cfg.nuclear_banned_after = *y;
      } else {
        throw bad("expected free or banned_after(YEAR)");
      }
    } else if (key == "storage_cost_usd_per_t" || key == "dac_cost_usd_per_t") {
      auto v = parse_number<double>(value);
      if (!v) throw bad("not a number");
      if (!(*v > 0.0)) throw bad("must be positive");
      (key == "storage_cost_usd_per_t" ? cfg.storage_cost_usd_per_t : cfg.dac_cost_usd_per_t) = *v;
    } else if (key == "exogenous_trajectories") {
      if (value.empty()) throw bad("empty profile");
      cfg.exogenous_trajectories = value;
    } else {
      throw UnknownKey(fmt::format("{}:{}: unknown key '{}'", origin, line_no, key));
    }
  }
  for (const char* k : kKeys) {
    if (!seen.contains(k)) throw BadValue(fmt::format("{}: missing key '{}'", origin, k));
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BadValue(fmt::format("cannot open scenario file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string serialize(const ScenarioConfig& c) {
  std::string out;
  out += fmt::format("name={}\n", c.name);
  out += c.netzero_year ? fmt::format("cap=linear({})\n", *c.netzero_year) : "cap=none\n";
  out += c.nuclear_banned_after
             ? fmt::format("nuclear_new_builds=banned_after({})\n", *c.nuclear_banned_after)
             : "nuclear_new_builds=free\n";
  out += fmt::format("storage_cost_usd_per_t={}\n", c.storage_cost_usd_per_t);
  out += fmt::format("dac_cost_usd_per_t={}\n", c.dac_cost_usd_per_t);
  out += fmt::format("exogenous_trajectories={}\n", c.exogenous_trajectories);
  return out;
}

}  // namespace iam
