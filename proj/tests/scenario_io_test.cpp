#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "iam/csv.hpp"
#include "iam/errors.hpp"
#include "iam/io.hpp"
#include "iam/results.hpp"
#include "iam/scenario.hpp"
#include "toy.hpp"

namespace fs = std::filesystem;

namespace iam {
namespace {

constexpr const char* kValid =
    "# comment line\n"
    "name = demo\n"
    "cap = linear(2050)\n"
    "nuclear_new_builds = banned_after(2024)\n"
    "storage_cost_usd_per_t = 3000\n"
    "dac_cost_usd_per_t = 330\n"
    "exogenous_trajectories = none\n";

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
  std::istringstream in(text);
  std::string out, l;
  while (std::getline(in, l)) out += (l.starts_with(key + " ") ? line : l) + "\n";
  return out;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("iam-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(ParseScenario, Valid) {
  const auto s = parse_scenario(kValid);
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.netzero_year, 2050);
  EXPECT_EQ(s.nuclear_banned_after, 2024);
  EXPECT_EQ(s.storage_cost_usd_per_t, 3000.0);
  EXPECT_EQ(s.dac_cost_usd_per_t, 330.0);
  EXPECT_EQ(s.exogenous_trajectories, "none");
}

TEST(ParseScenario, AlternativeForms) {
  auto text = replace_line(kValid, "cap", "cap=none");
  text = replace_line(text, "nuclear_new_builds", "nuclear_new_builds = free   # trailing comment");
  const auto s = parse_scenario(text);
  EXPECT_FALSE(s.netzero_year);
  EXPECT_FALSE(s.nuclear_banned_after);
}

TEST(ParseScenario, NegativeCostIsBadValue) {
  EXPECT_THROW(parse_scenario(replace_line(kValid, "storage_cost_usd_per_t", "storage_cost_usd_per_t=-5")),
               BadValue);
}

TEST(ParseScenario, Rejections) {
  EXPECT_THROW(parse_scenario(std::string(kValid) + "colour = blue\n"), UnknownKey);
  EXPECT_THROW(parse_scenario(std::string(kValid) + "name = again\n"), BadValue);
  EXPECT_THROW(parse_scenario(replace_line(kValid, "name", "")), BadValue);
  EXPECT_THROW(parse_scenario(replace_line(kValid, "cap", "cap = linear(20x0)")), BadValue);
  EXPECT_THROW(parse_scenario(replace_line(kValid, "cap", "cap = quadratic(2050)")), BadValue);
  EXPECT_THROW(parse_scenario(replace_line(kValid, "dac_cost_usd_per_t", "dac_cost_usd_per_t = cheap")),
               BadValue);
  EXPECT_THROW(parse_scenario(replace_line(kValid, "name", "just words")), BadValue);
}

TEST(ParseScenario, ErrorNamesLine) {
  try {
    parse_scenario(std::string(kValid) + "colour = blue\n", "demo.cfg");
    FAIL() << "expected UnknownKey";
  } catch (const UnknownKey& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("demo.cfg"), std::string::npos);
    EXPECT_NE(what.find("8"), std::string::npos);
    EXPECT_NE(what.find("colour"), std::string::npos);
  }
}

TEST(ShippedScenarios, DefinitionMatrix) {
  const auto cur = load_scenario(test::shipped_scenario("curpol"));
  const auto nz = load_scenario(test::shipped_scenario("nz2050"));
  const auto nuc = load_scenario(test::shipped_scenario("nz2050_nuc"));
  const auto lim = load_scenario(test::shipped_scenario("nz2050_limccs"));

  EXPECT_FALSE(cur.netzero_year);
  EXPECT_EQ(nz.netzero_year, 2050);
  EXPECT_EQ(nuc.netzero_year, 2050);
  EXPECT_EQ(lim.netzero_year, 2050);

  EXPECT_EQ(cur.nuclear_banned_after, 2024);
  EXPECT_EQ(nz.nuclear_banned_after, 2024);
  EXPECT_FALSE(nuc.nuclear_banned_after);
  EXPECT_EQ(lim.nuclear_banned_after, 2024);

  for (const auto* s : {&cur, &nz, &nuc}) {
    EXPECT_EQ(s->storage_cost_usd_per_t, 1000.0);
    EXPECT_EQ(s->dac_cost_usd_per_t, 200.0);
  }
  EXPECT_EQ(lim.storage_cost_usd_per_t, 3000.0);
  EXPECT_EQ(lim.dac_cost_usd_per_t, 330.0);

  EXPECT_EQ(cur.exogenous_trajectories, "npsp");
  for (const auto* s : {&nz, &nuc, &lim}) EXPECT_EQ(s->exogenous_trajectories, "none");
}

TEST(ShippedScenarios, SerializeRoundTrip) {
  for (const char* name : {"curpol", "nz2050", "nz2050_nuc", "nz2050_limccs"}) {
    const auto s = load_scenario(test::shipped_scenario(name));
    EXPECT_EQ(s.name, name);
    EXPECT_EQ(parse_scenario(serialize(s)), s) << name;
    EXPECT_EQ(serialize(parse_scenario(serialize(s))), serialize(s));
  }
}

TEST(LoadScenario, MissingFile) {
  EXPECT_THROW(load_scenario("/nonexistent/none.cfg"), BadValue);
}

TEST(Csv, SplitsQuotedFields) {
  const auto f = split_csv_record(R"(a,"b,c","say ""hi""",)");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "say \"hi\"");
  EXPECT_EQ(f[3], "");
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
}

TEST(Csv, MissingColumnIsSchemaViolation) {
  try {
    CsvTable::parse("id,kind\nx,y\n", "commodities", {"id", "kind", "unit"});
    FAIL() << "expected SchemaViolation";
  } catch (const SchemaViolation& e) {
    EXPECT_EQ(e.table(), "commodities");
    EXPECT_EQ(e.column(), "unit");
  }
}

TEST(Csv, UnknownColumnRejected) {
  EXPECT_THROW(CsvTable::parse("id,colour\nx,y\n", "t", {"id"}), SchemaViolation);
  EXPECT_NO_THROW(CsvTable::parse("id,note\nx,y\n", "t", {"id"}, {"note"}));
}

TEST(Csv, BadNumberNamesRowAndColumn) {
  const auto t = CsvTable::parse("id,value\na,1\nb,oops\n", "t", {"id", "value"});
  EXPECT_EQ(t.number(0, "value"), 1.0);
  try {
    t.number(1, "value");
    FAIL() << "expected SchemaViolation";
  } catch (const SchemaViolation& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), "value");
  }
}

TEST(LoadDataset, EmptyDirectoryIsMissingTable) {
  EXPECT_THROW(load_dataset(scratch("empty")), MissingTable);
}

TEST(LoadDataset, ShippedDirectoryLoads) {
  const auto d = load_dataset(test::shipped_data_dir());
  EXPECT_EQ(d.grid, TimeGrid(2010, 2015, 5, 2050));
  EXPECT_FALSE(d.technologies.empty());
  EXPECT_FALSE(d.calibration.shares.empty());
}

TEST(LoadDataset, MissingHeaderColumnNamesIt) {
  const auto dir = scratch("broken");
  for (const auto& e : fs::directory_iterator(test::shipped_data_dir())) {
    if (e.path().extension() == ".csv") fs::copy_file(e.path(), dir / e.path().filename());
  }
  auto text = slurp(dir / "technologies.csv");
  const auto pos = text.find("lifetime");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 8, "lifespan");
  std::ofstream(dir / "technologies.csv", std::ios::trunc) << text;
  try {
    load_dataset(dir);
    FAIL() << "expected SchemaViolation";
  } catch (const SchemaViolation& e) {
    EXPECT_EQ(e.table(), "technologies.csv");
    EXPECT_EQ(e.column(), "lifetime");
  }
}

class ShippedRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto& m = test::shipped_instance();
    result_ = new ScenarioRun(run_scenario(m, load_scenario(test::shipped_scenario("nz2050"))));
  }
  static void TearDownTestSuite() {
    delete result_;
    result_ = nullptr;
  }
  static ScenarioRun* result_;
};
ScenarioRun* ShippedRun::result_ = nullptr;

TEST_F(ShippedRun, ProvenanceAndContiguousPeriods) {
  const auto& r = *result_;
  EXPECT_EQ(r.run.provenance.dataset_checksum, test::shipped_instance().checksum());
  EXPECT_EQ(r.run.provenance.config_checksum.size(), 64u);
  EXPECT_EQ(r.run.provenance.tool_version, tool_version());
  const auto years = test::shipped_instance().grid().years();
  ASSERT_EQ(r.run.periods.size(), years.size());
  for (std::size_t i = 0; i < years.size(); ++i) EXPECT_EQ(r.run.periods[i].solution.year, years[i]);
}

TEST_F(ShippedRun, WritesTablesWithUnitsDeterministically) {
  const auto& m = test::shipped_instance();
  const auto a = scratch("run-a");
  const auto b = scratch("run-b");
  write_results(m, *result_, a);
  write_results(m, run_scenario(m, load_scenario(test::shipped_scenario("nz2050"))), b);
  for (const char* f : {"emissions.csv", "generation.csv", "final_energy.csv", "capacity.csv",
                        "prices.csv", "feasibility.csv", "manifest.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const std::vector<std::string> unit_tags = {"_gw", "_twh", "_fraction", "_mtco2", "_mtco2e",
                                              "_ej", "_per_unit"};
  for (const char* f : {"emissions.csv", "generation.csv", "final_energy.csv", "capacity.csv",
                        "prices.csv", "feasibility.csv"}) {
    std::ifstream in(a / f);
    std::string header;
    std::getline(in, header);
    const auto cols = split_csv_record(header);
    const bool has_unit_column = std::find(cols.begin(), cols.end(), "unit") != cols.end();
    std::string first;
    std::getline(in, first);
    const auto row = split_csv_record(first);
    ASSERT_EQ(row.size(), cols.size()) << f;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c] == "period") continue;
      char* end = nullptr;
      std::strtod(row[c].c_str(), &end);
      const bool numeric = !row[c].empty() && *end == '\0';
      if (!numeric) continue;
      const bool tagged = std::any_of(unit_tags.begin(), unit_tags.end(),
                                      [&](const std::string& t) { return cols[c].ends_with(t); });
      EXPECT_TRUE(tagged || has_unit_column) << f << ": " << cols[c];
    }
  }
}

TEST_F(ShippedRun, CompareJoinsFeasibilityTables) {
  const auto& m = test::shipped_instance();
  const auto a = scratch("cmp-nz");
  write_results(m, *result_, a);
  const auto text = compare_results({a});
  EXPECT_TRUE(text.starts_with("scenario,period,metric,value,unit\n"));
  EXPECT_NE(text.find("nz2050,2050,net_emissions,"), std::string::npos);
  EXPECT_THROW(compare_results({scratch("cmp-empty")}), MissingTable);
}

}  // namespace
}  // namespace iam
