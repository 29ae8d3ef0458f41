#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cornerlab/experiments.hpp"
#include "cornerlab/edge_scaling.hpp"
#include "cornerlab/io.hpp"

using namespace cornerlab;

namespace {

std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(CORNERLAB_CONFIG_DIR) / name;
}

ExperimentConfig small(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.entries = EntryProcessSpec::make(EntryKind::resampled_unimodular, SymmetryClass::orthogonal);
  c.m = 50;
  c.trials = 100;
  c.seed = 7;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"edge_distribution.json", "edge_universality_beta1.json", "l1_stationarity.json",
                           "continuity_probe.json", "moment_convergence.json"}) {
    EXPECT_NO_THROW(load_experiment_config(config_path(name))) << name;
  }
}

TEST(Config, RejectsZeroTrials) {
  auto j = read_json_file(config_path("edge_distribution.json"));
  j["trials"] = 0;
  EXPECT_THROW(experiment_config_from_json(j), std::invalid_argument);
}

TEST(Config, RejectsUnknownFieldsAndSmallM) {
  auto j = read_json_file(config_path("edge_distribution.json"));
  j["tirals"] = 100;
  EXPECT_ANY_THROW(experiment_config_from_json(j));
  auto c = small(ExperimentKind::edge_distribution);
  c.m = 20;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, JsonRoundTrip) {
  const auto c = load_experiment_config(config_path("l1_stationarity.json"));
  const auto again = experiment_config_from_json(to_json(c));
  EXPECT_EQ(to_json(again), to_json(c));
}

TEST(SampleLines, IntegerPointsMatchScaledSpectrum) {
  const MatrixPath path(EntryProcessSpec::make(EntryKind::gaussian_ou, SymmetryClass::unitary), 3);
  const QueryPoint points[] = {{0, 0}, {0, 0.5 / std::pow(64.0, 2.0 / 3)}};
  const auto lines = sample_lines(path, 64, points, 3);
  ASSERT_EQ(lines.size(), 2u);
  for (std::size_t j = 0; j + 1 < 3; ++j) EXPECT_GE(lines[0][j], lines[0][j + 1]);
}

TEST(Experiments, L1AtZeroDeltaIsExactlyOne) {
  auto c = small(ExperimentKind::l1_stationarity);
  c.deltas = {0.0};
  const auto r = run_l1_stationarity(c);
  EXPECT_EQ(r.row("corr_s", 0.0).value, 1.0);
  EXPECT_EQ(r.row("corr_t", 0.0).value, 1.0);
  std::istringstream csv(samples_csv(r));
  for (std::string line; std::getline(csv, line);) EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2) << line;
}

TEST(Experiments, ContinuityAtZeroIsZero) {
  auto c = small(ExperimentKind::continuity_probe);
  c.h_multiples = {0, 1, 2};
  const auto r = run_continuity_probe(c);
  EXPECT_EQ(r.row("mean_increment", 0.0).value, 0.0);
  const auto& one = r.row("mean_increment", ScalingMap(c.m).t_step());
  EXPECT_GT(one.value, 0);
}

TEST(Experiments, MomentConvergenceRows) {
  auto c = small(ExperimentKind::moment_convergence);
  c.trials = 400;
  MomentSpec s;
  s.exponents = {2};
  s.taus = {0};
  s.sizes = {4};
  c.moments = {s};
  c.catalan = CatalanCheck{60, {2, 3}};
  const auto r = run_moment_convergence(c);
  const auto& z = r.row("z", 0.0);
  EXPECT_LE(std::abs(z.value), 3);
  EXPECT_DOUBLE_EQ(r.row("catalan_benchmark", 2.0).value, 0.25);
  EXPECT_EQ(r.row("catalan_benchmark", 3.0).value, 0);
}

TEST(Experiments, CatalanBenchmark) {
  EXPECT_DOUBLE_EQ(catalan_benchmark(200, 4) / 200, 0.125);
  EXPECT_EQ(catalan_benchmark(200, 5), 0);
}

TEST(Experiments, OutputsAreByteIdenticalAcrossThreadCounts) {
  auto c = small(ExperimentKind::edge_distribution);
  c.entries = EntryProcessSpec::make(EntryKind::resampled_unimodular, SymmetryClass::unitary);
  const auto dir = std::filesystem::temp_directory_path() / "cornerlab_repro";
  std::filesystem::remove_all(dir);
  write_result_table(run_edge_distribution(c, 1), dir / "a");
  write_result_table(run_edge_distribution(c, 3), dir / "b");
  for (const char* f : {"results.csv", "samples.csv", "result.json"}) {
    const auto a = slurp(dir / "a" / f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / "b" / f)) << f;
  }
  EXPECT_EQ(slurp(dir / "a" / "results.csv").substr(0, 32), "statistic,parameter,value,stderr");
  EXPECT_EQ(slurp(dir / "a" / "samples.csv").substr(0, 18), "trial,series,value");
  const auto meta = nlohmann::json::parse(slurp(dir / "a" / "result.json"));
  EXPECT_EQ(meta.at("metadata").at("seed").get<std::uint64_t>(), 7u);
  std::filesystem::remove_all(dir);
}

TEST(Experiments, SeedChangesSamples) {
  auto c = small(ExperimentKind::edge_distribution);
  const auto a = samples_csv(run_edge_distribution(c));
  c.seed = 8;
  EXPECT_NE(a, samples_csv(run_edge_distribution(c)));
}
