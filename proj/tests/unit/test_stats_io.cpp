#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lacelab/errors.hpp"
#include "lacelab/io.hpp"
#include "lacelab/stats.hpp"

using namespace lacelab;

TEST(Stats, LinearFitExactLine) {
  const auto f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2, 1e-14);
  EXPECT_NEAR(f.intercept, 1, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0, 1e-12);
}

TEST(Stats, WilsonInterval) {
  const auto ci = wilson_interval(0, 100);
  EXPECT_NEAR(ci.lo, 0, 1e-15);
  // z^2 / (n + z^2) for k = 0
  EXPECT_NEAR(ci.hi, 3.8414588206941245 / 103.84145882069412, 1e-12);
  const auto mid = wilson_interval(50, 100);
  EXPECT_NEAR(mid.lo + mid.hi, 1.0, 1e-14);
}

TEST(Stats, Quantiles) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(bonferroni_z(0.05, 1), 1.959963984540054, 1e-12);
  EXPECT_GT(bonferroni_z(0.05, 100), bonferroni_z(0.05, 10));
}

TEST(Stats, GammaIntervalReducesToPoissonForUnitWeights) {
  // 10 unit counts: exact Poisson limits chi2(0.025, 20)/2 and chi2(0.975, 22)/2
  const auto ci = gamma_interval(10, 10, 1);
  EXPECT_NEAR(ci.lo, 4.795389, 1e-5);
  EXPECT_NEAR(ci.hi, 18.390356, 1e-5);
}

TEST(Stats, KendallTrend) {
  EXPECT_LT(kendall_trend({1, 2, 3, 4, 5, 6, 7, 8}).p_increasing, 0.01);
  EXPECT_GT(kendall_trend({8, 7, 6, 5, 4, 3, 2, 1}).p_increasing, 0.99);
}

TEST(Io, ConfigHashIsKeyOrderIndependent) {
  const nlohmann::json a{{"x", 1}, {"y", 2}}, b{{"y", 2}, {"x", 1}};
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(nlohmann::json{{"x", 1}, {"y", 3}}));
}

TEST(Io, CsvWithSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "lacelab_io_test";
  std::filesystem::create_directories(dir);
  CsvTable t({"a", "b"});
  t.row({"1", "x,y"});
  t.write(dir / "t.csv", {{"k", 1}});
  std::ifstream in(dir / "t.csv");
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  // rows end in CRLF
  header.pop_back();
  line.pop_back();
  EXPECT_EQ(header, "a,b");
  EXPECT_EQ(line, "1,\"x,y\"");
  EXPECT_EQ(read_json(dir / "t.csv.meta.json")["k"], 1);
}

TEST(Io, ReadJsonMissingFile) { EXPECT_THROW(read_json("/nonexistent/x.json"), DomainError); }
