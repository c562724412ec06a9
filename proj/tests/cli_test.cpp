#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "toy.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("iam-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Result iam(const std::string& args, const std::string& env = "IAM_LOG=warn") {
  static int calls = 0;
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const auto dir = scratch(std::string(info->name()) + "-" + std::to_string(calls++));
  const auto cmd = env + " '" IAM_CLI "' " + args + " >" + (dir / "out").string() + " 2>" + (dir / "err").string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "out");
  r.err = slurp(dir / "err");
  return r;
}

std::string data() { return "--data '" + iam::test::shipped_data_dir().string() + "'"; }

std::string scenario(const std::string& name) {
  return "--scenario '" + iam::test::shipped_scenario(name).string() + "'";
}

TEST(Cli, ValidateShippedInputs) {
  const auto r = iam("validate " + data() + " " + scenario("nz2050") + " " + scenario("curpol"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("dataset ok"), std::string::npos);
  EXPECT_NE(r.out.find("scenario ok: nz2050"), std::string::npos);
}

TEST(Cli, MissingDataIsInputError) {
  EXPECT_EQ(iam("validate").code, 2);
  EXPECT_EQ(iam("validate --data /nonexistent/dir").code, 2);
  EXPECT_EQ(iam("frobnicate").code, 2);
}

TEST(Cli, BadScenarioIsInputError) {
  const auto dir = scratch("bad-scenario");
  std::ofstream(dir / "bad.cfg") << "name = bad\ncolour = blue\n";
  const auto r = iam("validate " + data() + " --scenario '" + (dir / "bad.cfg").string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
}

TEST(Cli, BrokenDatasetIsInputError) {
  const auto dir = scratch("empty-data");
  EXPECT_EQ(iam("validate --data '" + dir.string() + "'").code, 2);
}

TEST(Cli, RunWritesTablesAndCompareJoinsThem) {
  const auto out = scratch("run");
  const auto r = iam("run " + data() + " " + scenario("curpol") + " " + scenario("nz2050") +
                     " --jobs 2 --out '" + out.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* s : {"curpol", "nz2050"}) {
    for (const char* f : {"emissions.csv", "generation.csv", "final_energy.csv", "capacity.csv", "prices.csv",
                          "feasibility.csv", "manifest.json"}) {
      EXPECT_TRUE(fs::exists(out / s / f)) << s << "/" << f;
    }
  }
  const auto cmp = iam("compare '" + (out / "curpol").string() + "' '" + (out / "nz2050").string() +
                       "' --out '" + out.string() + "'");
  ASSERT_EQ(cmp.code, 0) << cmp.err;
  const auto text = slurp(out / "comparison.csv");
  EXPECT_NE(text.find("curpol,"), std::string::npos);
  EXPECT_NE(text.find("nz2050,"), std::string::npos);
}

TEST(Cli, EndYearShortensHorizon) {
  const auto out = scratch("short");
  const auto r = iam("run " + data() + " " + scenario("curpol") + " --end-year 2030 --out '" + out.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(out / "curpol" / "prices.csv");
  EXPECT_NE(text.find("\n2030,"), std::string::npos);
  EXPECT_EQ(text.find("\n2035,"), std::string::npos);
}

TEST(Cli, LogLevelFromEnvironment) {
  const std::string args = "validate " + data();
  EXPECT_EQ(iam(args, "IAM_LOG=warn").err, "");
  const auto verbose = iam(args, "IAM_LOG=info");
  EXPECT_EQ(verbose.code, 0);
  EXPECT_NE(verbose.err.find("checksum"), std::string::npos);
}

}  // namespace
