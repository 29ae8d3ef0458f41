#include "cornerlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cornerlab/corner_spectra.hpp"
#include "cornerlab/edge_scaling.hpp"
#include "cornerlab/io.hpp"
#include "cornerlab/parallel.hpp"
#include "cornerlab/path_oracle.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/statistics.hpp"

namespace cornerlab {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::edge_distribution, "edge-distribution"},
    {ExperimentKind::l1_stationarity, "l1-stationarity"},
    {ExperimentKind::continuity_probe, "continuity-probe"},
    {ExperimentKind::moment_convergence, "moment-convergence"},
};

bool distributional(ExperimentKind kind) { return kind != ExperimentKind::moment_convergence; }

std::optional<std::string> build_timestamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch == nullptr || *epoch == '\0') return std::nullopt;
  const std::time_t t = static_cast<std::time_t>(std::stoll(epoch));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buffer);
}

ResultTable start_table(const ExperimentConfig& config) {
  config.validate();
  ResultTable table;
  table.experiment = std::string(to_string(config.kind));
  table.config = to_json(config);
  table.config_hash = fnv1a_hex(table.config.dump());
  table.seed = config.seed;
  table.timestamp = build_timestamp();
  return table;
}

void add_row(ResultTable& table, std::string statistic, std::optional<double> parameter, double value,
             std::optional<double> stderr_ = std::nullopt) {
  table.rows.push_back({std::move(statistic), parameter, value, stderr_});
}

// Per-trial query of lambda_j at the points, for independent paths.
std::vector<std::vector<std::vector<double>>> sample_trials(const EntryProcessSpec& entries,
                                                            std::uint64_t run_seed, std::size_t trials,
                                                            double m, std::span<const QueryPoint> points,
                                                            std::size_t lines, unsigned threads) {
  std::vector<std::vector<std::vector<double>>> out(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    const MatrixPath path(entries, trial_seed(run_seed, i));
    out[i] = sample_lines(path, m, points, lines);
  });
  return out;
}

std::vector<double> column(const std::vector<std::vector<std::vector<double>>>& trials, std::size_t point,
                           std::size_t j = 0) {
  std::vector<double> out;
  out.reserve(trials.size());
  for (const auto& t : trials) out.push_back(t[point][j]);
  return out;
}

void add_samples(ResultTable& table, const std::string& series, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) table.samples.push_back({i, series, values[i]});
}

std::string parameter_label(double x) { return format_double(x); }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  throw std::invalid_argument("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  entries.validate();
  if (reference_entries) reference_entries->validate();
  if (trials < 100) throw std::invalid_argument("experiment config: trials must be at least 100");
  if (distributional(kind) && m < 50) throw std::invalid_argument("experiment config: M must be at least 50");
  if (!(m >= 8)) throw std::invalid_argument("experiment config: M must be at least 8");
  if (lines < 1) throw std::invalid_argument("experiment config: lines must be at least 1");
  const ScalingMap map(m);
  auto check_n = [&](double t) {
    if (!(map.n_real(t) >= 3)) throw std::invalid_argument("experiment config: queried N(t) below 3");
    if (map.n_real(t) < static_cast<double>(lines)) {
      throw std::invalid_argument("experiment config: fewer eigenvalues than requested lines");
    }
  };
  check_n(0);
  if (kind == ExperimentKind::l1_stationarity) {
    if (deltas.empty()) throw std::invalid_argument("experiment config: no deltas");
    for (double d : deltas) {
      if (!(d >= 0)) throw std::invalid_argument("experiment config: deltas must be non-negative");
      if (!(map.tau(d) <= 1)) throw std::invalid_argument("experiment config: delta leaves tau in [-1, 1]");
      check_n(d);
    }
  }
  if (kind == ExperimentKind::continuity_probe) {
    if (h_multiples.empty()) throw std::invalid_argument("experiment config: no h multiples");
    for (int h : h_multiples) {
      if (h < 0) throw std::invalid_argument("experiment config: h multiples must be non-negative");
    }
  }
  if (kind == ExperimentKind::moment_convergence) {
    if (moments.empty() && !catalan) throw std::invalid_argument("experiment config: nothing to compare");
    for (const auto& spec : moments) {
      spec.validate();
      for (std::size_t n : spec.sizes) {
        if (n < 3) throw std::invalid_argument("experiment config: queried N below 3");
      }
    }
    if (catalan && catalan->n < 3) throw std::invalid_argument("experiment config: queried N below 3");
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{{"experiment", std::string(to_string(c.kind))},
                   {"entries", to_json(c.entries)},
                   {"M", c.m},
                   {"trials", c.trials},
                   {"seed", c.seed},
                   {"deltas", c.deltas},
                   {"lines", c.lines},
                   {"h_multiples", c.h_multiples},
                   {"output", c.output_dir.string()}};
  if (c.reference_entries) j["reference_entries"] = to_json(*c.reference_entries);
  nlohmann::json moments = nlohmann::json::array();
  for (const auto& spec : c.moments) moments.push_back(to_json(spec));
  j["moments"] = moments;
  if (c.catalan) j["catalan"] = {{"N", c.catalan->n}, {"exponents", c.catalan->exponents}};
  return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment config: expected a JSON object");
  static const char* known[] = {"experiment", "entries", "reference_entries", "M", "trials", "seed", "deltas",
                                "lines", "h_multiples", "moments", "catalan", "output", "$schema"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
        std::end(known)) {
      throw std::invalid_argument("experiment config: unknown field '" + key + "'");
    }
  }
  ExperimentConfig c;
  c.kind = experiment_kind_from_string(j.at("experiment").get<std::string>());
  c.entries = entry_spec_from_json(j.at("entries"));
  if (j.contains("reference_entries")) c.reference_entries = entry_spec_from_json(j.at("reference_entries"));
  c.m = j.value("M", c.m);
  const auto trials = j.value("trials", static_cast<long long>(c.trials));
  if (trials < 0) throw std::invalid_argument("experiment config: trials must be at least 100");
  c.trials = static_cast<std::size_t>(trials);
  c.seed = j.value("seed", c.seed);
  c.deltas = j.value("deltas", c.deltas);
  c.lines = j.value("lines", c.lines);
  c.h_multiples = j.value("h_multiples", c.h_multiples);
  if (j.contains("moments")) {
    for (const auto& spec : j.at("moments")) c.moments.push_back(moment_spec_from_json(spec));
  }
  if (j.contains("catalan")) {
    c.catalan = CatalanCheck{j.at("catalan").at("N").get<std::size_t>(),
                             j.at("catalan").at("exponents").get<std::vector<int>>()};
  }
  c.output_dir = j.value("output", c.output_dir.string());
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return experiment_config_from_json(read_json_file(path));
}

const ResultRow& ResultTable::row(std::string_view statistic, std::optional<double> parameter) const {
  for (const auto& r : rows) {
    if (r.statistic == statistic && (!parameter || (r.parameter && *r.parameter == *parameter))) return r;
  }
  throw std::out_of_range("result table: no row '" + std::string(statistic) + "'");
}

std::string results_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "statistic,parameter,value,stderr\n";
  for (const auto& r : table.rows) {
    out << r.statistic << ',' << (r.parameter ? parameter_label(*r.parameter) : "") << ','
        << format_double(r.value) << ',' << (r.stderr_ ? format_double(*r.stderr_) : "") << '\n';
  }
  return out.str();
}

std::string samples_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "trial,series,value\n";
  for (const auto& s : table.samples) out << s.trial << ',' << s.series << ',' << format_double(s.value) << '\n';
  return out.str();
}

nlohmann::json result_json(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"statistic", r.statistic},
                    {"parameter", r.parameter ? nlohmann::json(*r.parameter) : nlohmann::json()},
                    {"value", r.value},
                    {"stderr", r.stderr_ ? nlohmann::json(*r.stderr_) : nlohmann::json()}});
  }
  return {{"metadata",
           {{"experiment", table.experiment},
            {"config_hash", table.config_hash},
            {"seed", table.seed},
            {"timestamp", table.timestamp ? nlohmann::json(*table.timestamp) : nlohmann::json()},
            {"version", table.version}}},
          {"config", table.config},
          {"rows", rows},
          {"files", {{"results", "results.csv"}, {"samples", "samples.csv"}}}};
}

void write_result_table(const ResultTable& table, const std::filesystem::path& dir) {
  write_text_file(dir / "results.csv", results_csv(table));
  write_text_file(dir / "samples.csv", samples_csv(table));
  write_text_file(dir / "result.json", result_json(table).dump(2) + "\n");
}

std::vector<std::vector<double>> sample_lines(const MatrixPath& path, double m,
                                              std::span<const QueryPoint> points, std::size_t lines) {
  const ScalingMap map(m);
  struct Need {
    std::size_t lower;
    double weight;  // on lower + 1
  };
  std::vector<Need> needs;
  std::map<double, std::vector<std::size_t>> sizes_by_tau;
  for (const auto& p : points) {
    const double n = map.n_real(p.t);
    auto lower = static_cast<std::size_t>(std::floor(n));
    double w = n - static_cast<double>(lower);
    if (w < 1e-9) w = 0;
    if (w > 1 - 1e-9) {
      ++lower;
      w = 0;
    }
    if (lower < std::max<std::size_t>(lines, 1)) throw std::invalid_argument("sample_lines: N(t) below line count");
    needs.push_back({lower, w});
    auto& sizes = sizes_by_tau[map.tau(p.s)];
    sizes.push_back(lower);
    if (w > 0) sizes.push_back(lower + 1);
  }
  std::map<std::pair<double, std::size_t>, std::vector<double>> scaled;
  for (auto& [tau, sizes] : sizes_by_tau) {
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    const HermitianMatrix h = hermitian_snapshot(path, tau, sizes.back());
    for (std::size_t n : sizes) {
      const auto n_index = static_cast<Eigen::Index>(n);
      const SpectrumFrame frame{tau, n, eigenvalues(h.topLeftCorner(n_index, n_index))};
      scaled[{tau, n}] = scale_spectrum(m, frame);
    }
  }
  std::vector<std::vector<double>> out(points.size(), std::vector<double>(lines));
  for (std::size_t q = 0; q < points.size(); ++q) {
    const double tau = map.tau(points[q].s);
    const auto& lo = scaled.at({tau, needs[q].lower});
    for (std::size_t j = 0; j < lines; ++j) out[q][j] = lo[j];
    if (needs[q].weight > 0) {
      const auto& hi = scaled.at({tau, needs[q].lower + 1});
      for (std::size_t j = 0; j < lines; ++j) {
        out[q][j] = (1 - needs[q].weight) * lo[j] + needs[q].weight * hi[j];
      }
    }
  }
  return out;
}

TWTable reference_tw_table(int beta) {
  try {
    return load_reference_table(beta);
  } catch (const std::runtime_error&) {
    const auto grid = tw_default_grid();
    return tw_cdf_painleve(beta, grid);
  }
}

ResultTable run_edge_distribution(const ExperimentConfig& config, unsigned threads) {
  ResultTable table = start_table(config);
  const QueryPoint origin[1] = {{0, 0}};
  const auto trials = sample_trials(config.entries, config.seed, config.trials, config.m, origin, 1, threads);
  const auto lambda = column(trials, 0);
  const auto summary = summarize(lambda);
  const int beta = beta_of(config.entries.beta);
  add_row(table, "mean", std::nullopt, summary.mean, summary.stderr_);
  add_row(table, "variance", std::nullopt, summary.variance);
  add_row(table, "ks_tw" + std::to_string(beta), std::nullopt, ks_distance(lambda, reference_tw_table(beta).cdf()));
  add_samples(table, "lambda1", lambda);

  if (config.reference_entries) {
    const auto ref = sample_trials(*config.reference_entries, derive_key(config.seed, {1}), config.trials, config.m,
                                   origin, 1, threads);
    const auto other = column(ref, 0);
    const auto rs = summarize(other);
    const int ref_beta = beta_of(config.reference_entries->beta);
    add_row(table, "reference_mean", std::nullopt, rs.mean, rs.stderr_);
    add_row(table, "reference_variance", std::nullopt, rs.variance);
    add_row(table, "reference_ks_tw" + std::to_string(ref_beta), std::nullopt,
            ks_distance(other, reference_tw_table(ref_beta).cdf()));
    add_row(table, "ks_two_sample", std::nullopt, ks_two_sample(lambda, other));
    add_samples(table, "lambda1_reference", other);
  }
  return table;
}

ResultTable run_l1_stationarity(const ExperimentConfig& config, unsigned threads) {
  ResultTable table = start_table(config);
  std::vector<QueryPoint> points{{0, 0}};
  for (double d : config.deltas) {
    points.push_back({d, 0});
    points.push_back({0, d});
  }
  const auto trials = sample_trials(config.entries, config.seed, config.trials, config.m, points, 1, threads);
  const auto base = column(trials, 0);
  add_samples(table, "lambda1_base", base);
  const std::size_t n = base.size();
  for (std::size_t i = 0; i < config.deltas.size(); ++i) {
    const double d = config.deltas[i];
    const auto along_s = column(trials, 1 + 2 * i);
    const auto along_t = column(trials, 2 + 2 * i);
    const double cs = pearson(base, along_s);
    const double ct = pearson(base, along_t);
    const double ss = pearson_stderr(cs, n), st = pearson_stderr(ct, n);
    add_row(table, "corr_s", d, cs, ss);
    add_row(table, "corr_t", d, ct, st);
    add_row(table, "corr_difference", d, cs - ct, std::sqrt(ss * ss + st * st));
    add_samples(table, "lambda1_s=" + parameter_label(d), along_s);
    add_samples(table, "lambda1_t=" + parameter_label(d), along_t);
  }
  return table;
}

ResultTable run_continuity_probe(const ExperimentConfig& config, unsigned threads) {
  if (config.entries.kind != EntryKind::resampled_unimodular) {
    throw std::invalid_argument("continuity probe: requires resampled-unimodular entries");
  }
  ResultTable table = start_table(config);
  const ScalingMap map(config.m);
  const auto base_n = static_cast<std::size_t>(std::lround(config.m));
  const double t0 = map.t_of_n(static_cast<double>(base_n));
  std::vector<QueryPoint> points{{0, t0}};
  for (int h : config.h_multiples) points.push_back({0, map.t_of_n(static_cast<double>(base_n + h))});
  const auto trials =
      sample_trials(config.entries, config.seed, config.trials, config.m, points, config.lines, threads);

  std::vector<double> log_h, log_mean;
  for (std::size_t k = 0; k < config.h_multiples.size(); ++k) {
    const double h = config.h_multiples[k] * map.t_step();
    std::vector<double> increments;
    for (const auto& t : trials) {
      double worst = 0;
      for (std::size_t j = 0; j < config.lines; ++j) worst = std::max(worst, std::abs(t[k + 1][j] - t[0][j]));
      increments.push_back(worst);
    }
    const auto s = summarize(increments);
    add_row(table, "mean_increment", h, s.mean, s.stderr_);
    add_samples(table, "increment_h=" + parameter_label(h), increments);
    if (h > 0 && s.mean > 0) {
      log_h.push_back(std::log(h));
      log_mean.push_back(std::log(s.mean));
    }
  }
  if (log_h.size() >= 3) {
    const auto fit = linear_fit(log_h, log_mean);
    add_row(table, "exponent", std::nullopt, fit.slope, fit.slope_stderr);
    add_row(table, "exponent_ci_low", std::nullopt, fit.slope - 1.96 * fit.slope_stderr);
    add_row(table, "exponent_ci_high", std::nullopt, fit.slope + 1.96 * fit.slope_stderr);
  }
  return table;
}

double catalan_benchmark(std::size_t n, int m) {
  if (m % 2 != 0) return 0;
  const int k = m / 2;
  double catalan = 1;
  for (int i = 0; i < k; ++i) catalan = catalan * 2 * (2 * i + 1) / (i + 2);
  return static_cast<double>(n) * catalan / std::pow(4.0, k);
}

ResultTable run_moment_convergence(const ExperimentConfig& config, unsigned threads) {
  ResultTable table = start_table(config);
  for (std::size_t i = 0; i < config.moments.size(); ++i) {
    const auto& spec = config.moments[i];
    const auto samples = moment_samples(spec, config.entries, config.trials, derive_key(config.seed, {2, i}), threads);
    const auto s = summarize(samples);
    const auto index = static_cast<double>(i);
    add_row(table, "mc", index, s.mean, s.stderr_);
    add_samples(table, "moment_" + std::to_string(i), samples);
    try {
      const double exact = exact_moment(spec, config.entries);
      add_row(table, "oracle", index, exact);
      add_row(table, "z", index, s.stderr_ > 0 ? (s.mean - exact) / s.stderr_ : (s.mean == exact ? 0.0 : INFINITY));
    } catch (const OracleOutOfScope&) {
    }
  }
  if (config.catalan) {
    for (int m : config.catalan->exponents) {
      const MomentSpec spec{MomentKind::plain, {m}, {0.0}, {config.catalan->n}};
      const auto samples =
          moment_samples(spec, config.entries, config.trials, derive_key(config.seed, {3, static_cast<std::uint64_t>(m)}), threads);
      const auto s = summarize(samples);
      const double n = static_cast<double>(config.catalan->n);
      const double benchmark = catalan_benchmark(config.catalan->n, m) / n;
      add_row(table, "catalan_mc", m, s.mean / n, s.stderr_ / n);
      add_row(table, "catalan_benchmark", m, benchmark);
      if (benchmark != 0) add_row(table, "catalan_relative_error", m, std::abs(s.mean / n - benchmark) / benchmark);
    }
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& config, unsigned threads) {
  switch (config.kind) {
    case ExperimentKind::edge_distribution: return run_edge_distribution(config, threads);
    case ExperimentKind::l1_stationarity: return run_l1_stationarity(config, threads);
    case ExperimentKind::continuity_probe: return run_continuity_probe(config, threads);
    case ExperimentKind::moment_convergence: return run_moment_convergence(config, threads);
  }
  throw std::invalid_argument("unknown experiment kind");
}

}  // namespace cornerlab
