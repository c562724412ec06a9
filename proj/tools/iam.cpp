#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "iam/errors.hpp"
#include "iam/io.hpp"
#include "iam/model.hpp"
#include "iam/results.hpp"
#include "iam/scenario.hpp"

namespace fs = std::filesystem;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("iam");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("IAM_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps anything unrecognised to off; only honour real names.
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
  }
}

iam::ModelInstance load_instance(const fs::path& data, std::optional<int> end_year) {
  spdlog::info("loading dataset {}", data.string());
  auto dataset = iam::load_dataset(data);
  if (end_year) dataset.grid = dataset.grid.with_end_year(*end_year);
  auto instance = iam::build_model(std::move(dataset));
  spdlog::info("dataset checksum {}", instance.checksum());
  return instance;
}

// Runs `work` over every scenario on up to `jobs` threads. Returns the exit
// code of the first failure in input order, or 0.
template <typename Work>
int for_each_scenario(const std::vector<iam::ScenarioConfig>& scenarios, int jobs, Work work) {
  std::vector<int> codes(scenarios.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        work(scenarios[i]);
      } catch (const iam::Error& e) {
        std::lock_guard lock(log_mutex);
        spdlog::error("{}: {}: {}", scenarios[i].name, e.kind(), e.what());
        codes[i] = e.exit_code();
      } catch (const std::exception& e) {
        std::lock_guard lock(log_mutex);
        spdlog::error("{}: {}", scenarios[i].name, e.what());
        codes[i] = 1;
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < std::min(n, scenarios.size()); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (int c : codes) {
    if (c != 0) return c;
  }
  return 0;
}

std::vector<iam::ScenarioConfig> load_scenarios(const std::vector<std::string>& paths) {
  std::vector<iam::ScenarioConfig> out;
  for (const auto& p : paths) out.push_back(iam::load_scenario(p));
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw iam::BadValue(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Single-region energy-economy scenario runner"};
  app.set_version_flag("--version", std::string(iam::tool_version()));
  app.require_subcommand(1);

  std::string data;
  std::vector<std::string> scenario_paths;
  std::string out = "results";
  std::optional<int> end_year;
  int jobs = 1;
  int samples = 8;
  std::vector<std::string> result_dirs;

  auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
    cmd->add_option("--data", data, "dataset directory")->required()->check(CLI::ExistingDirectory);
    auto* s = cmd->add_option("--scenario", scenario_paths, "scenario file (repeatable)")
                  ->check(CLI::ExistingFile);
    if (needs_scenario) s->required();
    cmd->add_option("--end-year", end_year, "last model year (<= 2100)");
    cmd->add_option("--jobs", jobs, "scenarios solved in parallel")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "solve scenarios and write result tables");
  add_common(run, true);
  run->add_option("--out", out, "results root; one directory per scenario");
  run->add_option("--samples", samples, "carbon-price samples per period for policy cost")
      ->check(CLI::Range(2, 1000));

  auto* feas = app.add_subcommand("feasibility", "solve scenarios and print the feasibility dashboard");
  add_common(feas, true);
  feas->add_option("--out", out, "results root; one directory per scenario");
  feas->add_option("--samples", samples, "carbon-price samples per period for policy cost")
      ->check(CLI::Range(2, 1000));

  auto* cmp = app.add_subcommand("compare", "join result directories into comparison.csv");
  cmp->add_option("results", result_dirs, "result directories")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--out", out, "directory for comparison.csv");

  auto* val = app.add_subcommand("validate", "check a dataset and optional scenario files");
  add_common(val, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmp) {
      std::vector<fs::path> dirs(result_dirs.begin(), result_dirs.end());
      fs::create_directories(out);
      write_text(fs::path(out) / "comparison.csv", iam::compare_results(dirs));
      spdlog::info("wrote {}", (fs::path(out) / "comparison.csv").string());
      return 0;
    }

    const auto instance = load_instance(data, end_year);
    const auto scenarios = load_scenarios(scenario_paths);

    if (*val) {
      std::cout << fmt::format("dataset ok: {} commodities, {} technologies, {} sector nodes, {} periods\n",
                               instance.commodity_count(), instance.technologies().size(),
                               instance.nodes().size(), instance.grid().size());
      std::cout << fmt::format("checksum {}\n", instance.checksum());
      for (const auto& s : scenarios) {
        iam::apply_scenario(instance, s);
        std::cout << fmt::format("scenario ok: {}\n", s.name);
      }
      return 0;
    }

    std::mutex print_mutex;
    return for_each_scenario(scenarios, jobs, [&](const iam::ScenarioConfig& s) {
      spdlog::info("{}: solving", s.name);
      const auto result = iam::run_scenario(instance, s, samples);
      const auto dir = fs::path(out) / s.name;
      if (*run) {
        iam::write_results(instance, result, dir);
      } else {
        fs::create_directories(dir);
        write_text(dir / "feasibility.csv", iam::feasibility_csv(instance, result));
      }
      spdlog::info("{}: wrote {}", s.name, dir.string());
      if (*feas) {
        const auto& f = result.feasibility;
        const auto& last = result.run.periods.back();
        std::lock_guard lock(print_mutex);
        std::cout << fmt::format("{} ({})\n", s.name, last.solution.year);
        if (!f.policy_cost_pct.empty()) {
          std::cout << fmt::format("  policy cost        {:8.3f} % of GDP\n", f.policy_cost_pct.back());
        }
        std::cout << fmt::format("  carbon price       {:8.1f} USD/tCO2\n", last.carbon_price);
        std::cout << fmt::format("  stored CO2         {:8.3f} GtCO2 cumulative\n", f.storage.cumulative_gt.back());
        for (const auto& [cls, km2] : f.land_km2) {
          std::cout << fmt::format("  land ({:<8})     {:8.1f} km2 ({:.2f} x Seoul)\n", cls, km2.back(),
                                   iam::seoul_multiple(km2.back()));
        }
        for (const auto& [id, h] : f.headroom_gw) {
          std::cout << fmt::format("  headroom {:<10}{:8.1f} GW{}\n", id, h.back(), h.back() < 0 ? "  EXCEEDED" : "");
        }
      }
    });
  } catch (const iam::Error& e) {
    spdlog::error("{}: {}", e.kind(), e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
