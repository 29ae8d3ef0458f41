#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cornerlab/corner_spectra.hpp"
#include "cornerlab/edge_scaling.hpp"
#include "cornerlab/entry_process.hpp"

namespace cornerlab {

enum class MomentKind { plain, modified };

std::string_view to_string(MomentKind kind);
MomentKind moment_kind_from_string(std::string_view name);

/// Mixed moment E prod_p tr f_p(H^{(tau_p), (N_p)}) where
///   plain:    f_p(H) = (H / (2 sqrt(N_p)))^{m_p},
///   modified: f_p(H) = P_{m_p}^{(N_p)}(H).
struct MomentSpec {
  MomentKind kind = MomentKind::plain;
  std::vector<int> exponents;
  std::vector<double> taus;
  std::vector<std::size_t> sizes;

  std::size_t k() const { return exponents.size(); }
  void validate() const;
};

nlohmann::json to_json(const MomentSpec& spec);
MomentSpec moment_spec_from_json(const nlohmann::json& j);

/// prod_p tr f_p evaluated on spectra; frames[p] belongs to factor p.
double moment_functional(const MomentSpec& spec, std::span<const SpectrumFrame> frames);

struct MomentReport {
  MomentSpec spec;
  EntryProcessSpec entries;
  double estimate = 0;
  double stderr_ = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const MomentReport& report);

/// Monte Carlo mean of the mixed moment over independent matrix paths with
/// seeds trial_seed(seed, 0 .. trials-1). Reduction is in trial order.
MomentReport mc_mixed_moments(const MomentSpec& spec, const EntryProcessSpec& entries,
                              std::size_t trials, std::uint64_t seed, unsigned threads = 1);

/// The per-trial values behind mc_mixed_moments.
std::vector<double> moment_samples(const MomentSpec& spec, const EntryProcessSpec& entries,
                                   std::size_t trials, std::uint64_t seed, unsigned threads = 1);

struct LaplaceResult {
  double value = 0;
  bool converged = false;
  std::size_t terms_used = 0;
};

inline constexpr double kLaplaceTailGuard = 1e-12;

/// sum_j exp(alpha lambda_j) over descending lambda, stopping once a term
/// falls below kLaplaceTailGuard times the running sum. When the list runs
/// out first the result counts as converged only if `complete` is set.
LaplaceResult laplace_sum(std::span<const double> lambda, double alpha, bool complete);

/// Statistic of a full spectrum: sum_j exp(alpha lambda_j), plus
/// (-1)^parity sum_j exp(alpha lambda~_j) when mirror_parity is given.
LaplaceResult laplace_statistic(const SpectrumFrame& frame, double m, double alpha,
                                std::optional<int> mirror_parity = std::nullopt);

/// Statistic over the j_max stored lines of an ensemble at (s, t).
LaplaceResult laplace_statistic(const ScaledLineEnsemble& ensemble, double alpha, double s, double t);

enum class EdgeRegion { right_edge, left_edge, bulk, tail };

std::string_view to_string(EdgeRegion region);

inline constexpr double kClassifyEpsilon = 0.01;

/// Four-way split of eigenvalues with window w = M^{-1/6 + eps}:
/// right edge |xi - 2 sqrt(N)| <= w, left edge |xi + 2 sqrt(N)| <= w,
/// bulk |xi| <= 2 sqrt(N) - w, tail otherwise. Edge tests come first.
EdgeRegion edge_bulk_classify(double xi, double n, double m, double eps = kClassifyEpsilon);

}  // namespace cornerlab
