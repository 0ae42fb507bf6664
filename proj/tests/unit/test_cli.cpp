#include <gtest/gtest.h>

#include <sstream>

#include "app.hpp"
#include "lacelab/io.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lacelab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lacelab::app::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json error_of(const Run& r) { return nlohmann::json::parse(r.err)["error"]; }

const std::string fixtures = LACELAB_FIXTURES;

}  // namespace

TEST(Cli, DistReportsMetadata) {
  const auto r = cli({"dist", "--kind", "power-law", "--d", "1", "--alpha", "3", "--L", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "dist");
  EXPECT_TRUE(j["summary"].contains("vAlpha"));
  EXPECT_EQ(j["configHash"].get<std::string>().size(), 16u);
}

TEST(Cli, HashIsStableAcrossRuns) {
  const auto a = nlohmann::json::parse(cli({"dist", "--alpha", "1.5"}).out);
  const auto b = nlohmann::json::parse(cli({"dist", "--alpha", "1.5"}).out);
  EXPECT_EQ(a["configHash"], b["configHash"]);
  EXPECT_EQ(a["summaryHash"], b["summaryHash"]);
}

TEST(Cli, InvalidAlphaIsADomainError) {
  const auto r = cli({"dist", "--alpha", "-1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["field"], "alpha");
}

TEST(Cli, UnknownFlagIsAUsageError) {
  const auto r = cli({"green", "--nonsense", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["module"], "cli");
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const auto dir = std::filesystem::temp_directory_path() / "lacelab_cli_test";
  std::filesystem::create_directories(dir);
  lacelab::write_json(dir / "cfg.json", {{"parameters", {{"alpha", 3.0}, {"d", 2}}}});
  const auto r = cli({"--config", (dir / "cfg.json").string(), "dist", "--d", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto p = nlohmann::json::parse(r.out)["parameters"];
  EXPECT_EQ(p["alpha"], 3.0);
  EXPECT_EQ(p["d"], 1);
  lacelab::write_json(dir / "bad.json", {{"bogus", 1}});
  EXPECT_EQ(cli({"--config", (dir / "bad.json").string(), "dist"}).code, 2);
}

TEST(Cli, GreenCriticalAmplitude) {
  const auto r = cli({"green", "--d", "3", "--alpha", "1.5", "--L", "5", "--p", "1", "--M", "256"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = nlohmann::json::parse(r.out)["summary"];
  EXPECT_NEAR(s["amplitudeEstimate"].get<double>() / s["amplitude"].get<double>(), 1.0, 0.02);
}

TEST(Cli, CorruptedPiIsRejectedWithProvenance) {
  const auto r = cli({"lace", "--pi", fixtures + "/corrupted_pi.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["module"], "lace-algebra");
}

TEST(Cli, VerifyAllFailsOnCorruptedPi) {
  const auto r = cli({"verify-all", "--criteria", "9", "--pi", fixtures + "/corrupted_pi.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("PASS  9"), std::string::npos);
  EXPECT_NE(r.out.find("[module lace-algebra]"), std::string::npos);
}

TEST(Cli, VerifyAllAcceptsValidPi) {
  const auto r = cli({"verify-all", "--criteria", "4", "--pi", fixtures + "/valid_pi.json"});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, SawAndPercRun) {
  EXPECT_EQ(cli({"saw", "--kind", "power-law", "--alpha", "2.5", "--N", "3"}).code, 0);
  const auto r = cli({"perc", "--kind", "power-law", "--alpha", "2.5", "--p", "0.2,0.4", "--M", "64", "--samples",
                      "200", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["seed"], 5);
}

TEST(Cli, WorkersMustBePositive) { EXPECT_EQ(cli({"--workers", "0", "dist"}).code, 2); }
