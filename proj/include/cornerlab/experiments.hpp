#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cornerlab/entry_process.hpp"
#include "cornerlab/moments.hpp"
#include "cornerlab/tracy_widom.hpp"

namespace cornerlab {

inline constexpr std::uint64_t kDefaultSeed = 20261017;
inline constexpr std::string_view kVersion = "1.0.0";

enum class ExperimentKind { edge_distribution, l1_stationarity, continuity_probe, moment_convergence };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

struct CatalanCheck {
  std::size_t n = 200;
  std::vector<int> exponents;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::edge_distribution;
  EntryProcessSpec entries;
  // Second ensemble for the two-sample comparison.
  std::optional<EntryProcessSpec> reference_entries;
  double m = 200;
  std::size_t trials = 2000;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> deltas{0.5};
  std::size_t lines = 3;
  std::vector<int> h_multiples{1, 2, 4, 8};
  std::vector<MomentSpec> moments;
  std::optional<CatalanCheck> catalan;
  std::filesystem::path output_dir = "out";

  /// trials >= 100; M >= 50 for the distributional experiments; every
  /// queried N(t) >= 3.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ResultRow {
  std::string statistic;
  std::optional<double> parameter;
  double value = 0;
  std::optional<double> stderr_;
};

struct SampleRow {
  std::size_t trial;
  std::string series;
  double value;
};

struct ResultTable {
  std::string experiment;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::optional<std::string> timestamp;
  std::string version{kVersion};
  nlohmann::json config;
  std::vector<ResultRow> rows;
  std::vector<SampleRow> samples;

  /// First row with the given statistic (and parameter, if given).
  const ResultRow& row(std::string_view statistic, std::optional<double> parameter = std::nullopt) const;
};

/// CSV statistic,parameter,value,stderr.
std::string results_csv(const ResultTable& table);
/// CSV trial,series,value.
std::string samples_csv(const ResultTable& table);
nlohmann::json result_json(const ResultTable& table);

/// Writes results.csv, samples.csv and result.json into the directory.
void write_result_table(const ResultTable& table, const std::filesystem::path& dir);

struct QueryPoint {
  double s;
  double t;
};

/// Scaled lambda_j(s, t) for j = 1..lines at each query point of one matrix
/// path. Non-integer N(t) interpolates linearly between the neighbouring
/// corners. Result is indexed [point][j - 1].
std::vector<std::vector<double>> sample_lines(const MatrixPath& path, double m,
                                              std::span<const QueryPoint> points, std::size_t lines);

/// Reference CDF for beta: the shipped table if present, otherwise the
/// Painleve table on the default grid.
TWTable reference_tw_table(int beta);

ResultTable run_edge_distribution(const ExperimentConfig& config, unsigned threads = 1);
ResultTable run_l1_stationarity(const ExperimentConfig& config, unsigned threads = 1);
ResultTable run_continuity_probe(const ExperimentConfig& config, unsigned threads = 1);
ResultTable run_moment_convergence(const ExperimentConfig& config, unsigned threads = 1);

ResultTable run_experiment(const ExperimentConfig& config, unsigned threads = 1);

/// N Cat_{m/2} / 4^{m/2} for even m, 0 for odd m.
double catalan_benchmark(std::size_t n, int m);

}  // namespace cornerlab
