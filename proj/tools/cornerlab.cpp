#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cornerlab/corner_spectra.hpp"
#include "cornerlab/diagram.hpp"
#include "cornerlab/edge_scaling.hpp"
#include "cornerlab/experiments.hpp"
#include "cornerlab/io.hpp"
#include "cornerlab/path_oracle.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/tracy_widom.hpp"
#include "cornerlab/verification.hpp"

namespace fs = std::filesystem;
using namespace cornerlab;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 0;
};

nlohmann::json require_config(const Globals& g) {
  if (g.config.empty()) throw std::invalid_argument("--config is required for this subcommand");
  return read_json_file(g.config);
}

ExperimentConfig experiment_config(const Globals& g) {
  auto j = require_config(g);
  if (g.seed) j["seed"] = *g.seed;
  if (!g.out.empty()) j["output"] = g.out;
  return experiment_config_from_json(j);
}

void report(const ResultTable& table, const fs::path& dir) {
  write_result_table(table, dir);
  std::cout << results_csv(table);
  std::cerr << "wrote " << (dir / "results.csv").string() << ", samples.csv, result.json\n";
}

// Scaled line ensemble of the first trial on a t-grid around N = M.
void write_ensemble(const ExperimentConfig& config, std::size_t half_width, unsigned threads, const fs::path& dir) {
  const MatrixPath path(config.entries, trial_seed(config.seed, 0));
  const auto base = static_cast<std::size_t>(std::lround(config.m));
  std::vector<std::size_t> sizes;
  for (std::size_t n = base > half_width ? base - half_width : 3; n <= base + half_width; ++n) sizes.push_back(n);
  const double taus[1] = {0.0};
  const auto grid = build_corner_grid(path, taus, sizes, threads);
  const auto ensemble = build_line_ensemble(grid, config.m, std::min(kDefaultLineCount, sizes.front()));
  std::ostringstream out;
  write_ensemble_csv(out, ensemble);
  write_text_file(dir / "ensemble.csv", out.str());
}

int run_simulate(const Globals& g, bool ensemble, std::size_t half_width) {
  const auto config = experiment_config(g);
  const auto table = run_experiment(config, g.threads);
  report(table, config.output_dir);
  if (ensemble) write_ensemble(config, half_width, g.threads, config.output_dir);
  return 0;
}

int run_moments(const Globals& g) {
  const auto config = experiment_config(g);
  if (config.kind != ExperimentKind::moment_convergence) {
    throw std::invalid_argument("moments: config must describe a moment-convergence experiment");
  }
  report(run_moment_convergence(config, g.threads), config.output_dir);
  return 0;
}

int run_oracle(const Globals& g) {
  const auto j = require_config(g);
  const auto entries = entry_spec_from_json(j.at("entries"));
  const auto spec = moment_spec_from_json(j.at("moment"));
  OracleOptions options;
  if (j.value("method", "classes") == "raw") options.method = OracleMethod::raw;
  if (j.value("convention", "sequence") == "cyclic") options.convention = BacktrackConvention::cyclic;
  const double value = exact_moment(spec, entries, options);
  const auto result = oracle_result_json(spec, entries, value);
  std::cout << result.dump(2) << '\n';
  if (!g.out.empty()) write_text_file(fs::path(g.out) / "oracle.json", result.dump(2) + "\n");
  return 0;
}

int run_diagram(const Globals& g) {
  const auto j = require_config(g);
  std::vector<DiagramSpec> diagrams;
  if (j.contains("directory")) diagrams = load_diagram_directory(j.at("directory").get<std::string>());
  for (const auto& file : j.value("diagrams", std::vector<std::string>{})) diagrams.push_back(load_diagram(file));
  if (diagrams.empty()) throw std::invalid_argument("diagram: no diagrams given");
  const auto alpha = j.at("alpha").get<std::vector<double>>();
  const auto s = j.value("s", std::vector<double>(alpha.size(), 0.0));
  const auto t = j.value("t", std::vector<double>(alpha.size(), 0.0));
  const auto method =
      j.value("method", "simplex") == "monte-carlo" ? IntegrationMethod::monte_carlo : IntegrationMethod::simplex_quadrature;
  IntegrationBudget budget;
  budget.samples = j.value("samples", budget.samples);
  budget.order = j.value("order", budget.order);
  budget.seed = g.seed.value_or(j.value("seed", kDefaultSeed));

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& d : diagrams) {
    const auto check = validate_diagram(d);
    nlohmann::json row{{"name", d.name}, {"k", d.k}, {"s", d.s}, {"orientable", d.orientable},
                       {"valid", check.ok}, {"problems", check.problems}};
    if (check.ok && d.k == static_cast<int>(alpha.size())) {
      const auto r = integral_I(d, alpha, s, t, method, budget);
      row["integral"] = {{"value", r.value}, {"error", r.error}, {"dimension", r.dimension}, {"feasible", r.feasible}};
    }
    rows.push_back(row);
  }
  nlohmann::json result{{"alpha", alpha}, {"s", s}, {"t", t}, {"diagrams", rows}};
  if (j.contains("beta")) {
    const auto psi = psi_sharp(diagrams, j.at("beta").get<int>(), alpha, s, t, method, budget);
    result["psi_sharp"] = {{"value", psi.value}, {"error", psi.error}};
  }
  std::cout << result.dump(2) << '\n';
  if (!g.out.empty()) write_text_file(fs::path(g.out) / "diagram.json", result.dump(2) + "\n");
  return 0;
}

int run_tw(const Globals& g, const std::vector<int>& betas, const std::string& method) {
  const fs::path dir = g.out.empty() ? fs::path(CORNERLAB_DATA_DIR) / "tw" : fs::path(g.out);
  const auto grid = tw_default_grid();
  for (int beta : betas) {
    TWTable table;
    if (method == "fredholm") {
      if (beta != 2) throw std::invalid_argument("tw: the Fredholm method covers beta = 2 only");
      table = tw_table_fredholm(grid, kDefaultFredholmNodes, g.threads);
    } else {
      table = tw_cdf_painleve(beta, grid);
    }
    const auto check = validate_tw_table(table);
    for (const auto& p : check.problems) std::cerr << "warning: beta " << beta << " table: " << p << '\n';
    std::ostringstream out;
    write_tw_csv(out, table);
    const auto path = dir / ("tw" + std::to_string(beta) + ".csv");
    write_text_file(path, out.str());
    std::cerr << "wrote " << path.string() << " (" << to_string(table.method) << ")\n";
  }
  return 0;
}

int run_verify(const Globals& g, std::vector<int> ids) {
  const auto constants = load_acceptance_constants(g.config);
  if (ids.empty()) ids = criterion_ids();
  bool all = true;
  for (int id : ids) {
    const auto r = run_criterion(id, constants, g.threads);
    std::cout << format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corner processes of time-dependent Wigner matrices at the spectral edge"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Run seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)");

  auto* simulate = app.add_subcommand("simulate", "Run an edge-distribution, l1-stationarity or continuity experiment");
  bool ensemble = false;
  std::size_t half_width = 40;
  simulate->add_flag("--ensemble", ensemble, "Also write ensemble.csv for the first trial");
  simulate->add_option("--ensemble-half-width", half_width, "Corners M - w .. M + w in ensemble.csv");

  auto* moments = app.add_subcommand("moments", "Monte Carlo moments against the oracle and the Catalan benchmark");
  auto* oracle = app.add_subcommand("oracle", "Exact moment by path enumeration");
  auto* diagram = app.add_subcommand("diagram", "Validate diagrams and evaluate their polytope integrals");

  auto* tw = app.add_subcommand("tw", "Regenerate Tracy-Widom reference tables");
  std::vector<int> betas{1, 2};
  std::string method = "painleve";
  tw->add_option("--beta", betas, "Symmetry classes")->check(CLI::IsMember({1, 2}));
  tw->add_option("--method", method, "painleve or fredholm")->check(CLI::IsMember({"painleve", "fredholm"}));

  auto* verify = app.add_subcommand("verify", "Run acceptance criteria (--config: constants file)");
  std::vector<int> ids;
  verify->add_option("--criterion,-c", ids, "Criteria to run (default: all)");

  for (auto* sub : {simulate, moments, oracle, diagram, tw, verify}) sub->fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(g, ensemble, half_width);
    if (*moments) return run_moments(g);
    if (*oracle) return run_oracle(g);
    if (*diagram) return run_diagram(g);
    if (*tw) return run_tw(g, betas, method);
    if (*verify) return run_verify(g, ids);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
