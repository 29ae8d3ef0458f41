#include "cornerlab/moments.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "cornerlab/chebyshev.hpp"
#include "cornerlab/parallel.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/statistics.hpp"

namespace cornerlab {

std::string_view to_string(MomentKind kind) {
  return kind == MomentKind::plain ? "plain" : "modified";
}

MomentKind moment_kind_from_string(std::string_view name) {
  if (name == "plain") return MomentKind::plain;
  if (name == "modified") return MomentKind::modified;
  throw std::invalid_argument("unknown moment kind: " + std::string(name));
}

void MomentSpec::validate() const {
  if (exponents.empty()) throw std::invalid_argument("moment spec: k must be at least 1");
  if (taus.size() != exponents.size() || sizes.size() != exponents.size()) {
    throw std::invalid_argument("moment spec: exponents, taus and sizes differ in length");
  }
  for (std::size_t p = 0; p < k(); ++p) {
    if (exponents[p] < 1) throw std::invalid_argument("moment spec: exponents must be at least 1");
    if (!(std::abs(taus[p]) <= 1)) throw std::invalid_argument("moment spec: |tau| must be at most 1");
    if (sizes[p] < 1) throw std::invalid_argument("moment spec: sizes must be positive");
    if (kind == MomentKind::modified && sizes[p] < 3) {
      throw std::invalid_argument("moment spec: modified moments need N >= 3");
    }
  }
}

nlohmann::json to_json(const MomentSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"exponents", spec.exponents},
          {"taus", spec.taus},
          {"sizes", spec.sizes}};
}

MomentSpec moment_spec_from_json(const nlohmann::json& j) {
  MomentSpec spec;
  spec.kind = moment_kind_from_string(j.at("kind").get<std::string>());
  spec.exponents = j.at("exponents").get<std::vector<int>>();
  spec.taus = j.at("taus").get<std::vector<double>>();
  spec.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  spec.validate();
  return spec;
}

double moment_functional(const MomentSpec& spec, std::span<const SpectrumFrame> frames) {
  if (frames.size() != spec.k()) throw std::invalid_argument("moment_functional: one frame per factor");
  double product = 1;
  for (std::size_t p = 0; p < spec.k(); ++p) {
    const auto& frame = frames[p];
    double trace = 0;
    if (spec.kind == MomentKind::plain) {
      const double scale = 2 * std::sqrt(static_cast<double>(frame.n));
      for (double xi : frame.eigenvalues) trace += std::pow(xi / scale, spec.exponents[p]);
    } else {
      trace = trace_p_spectral(frame, spec.exponents[p]);
    }
    product *= trace;
  }
  return product;
}

std::vector<double> moment_samples(const MomentSpec& spec, const EntryProcessSpec& entries,
                                   std::size_t trials, std::uint64_t seed, unsigned threads) {
  spec.validate();
  entries.validate();
  // Largest corner needed at each distinct time.
  std::map<double, std::size_t> largest;
  for (std::size_t p = 0; p < spec.k(); ++p) {
    auto& n = largest[spec.taus[p]];
    n = std::max(n, spec.sizes[p]);
  }
  std::vector<double> samples(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const MatrixPath path(entries, trial_seed(seed, t));
    std::map<double, HermitianMatrix> snapshots;
    for (const auto& [tau, n] : largest) snapshots.emplace(tau, hermitian_snapshot(path, tau, n));
    std::vector<SpectrumFrame> frames;
    frames.reserve(spec.k());
    for (std::size_t p = 0; p < spec.k(); ++p) {
      const auto size = static_cast<Eigen::Index>(spec.sizes[p]);
      frames.push_back({spec.taus[p], spec.sizes[p],
                        eigenvalues(snapshots.at(spec.taus[p]).topLeftCorner(size, size))});
    }
    samples[t] = moment_functional(spec, frames);
  });
  return samples;
}

MomentReport mc_mixed_moments(const MomentSpec& spec, const EntryProcessSpec& entries,
                              std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (trials < 100) throw std::invalid_argument("mc_mixed_moments: at least 100 trials required");
  const auto samples = moment_samples(spec, entries, trials, seed, threads);
  const auto summary = summarize(samples);
  return {spec, entries, summary.mean, summary.stderr_, trials, seed};
}

nlohmann::json to_json(const MomentReport& report) {
  return {{"spec", to_json(report.spec)},
          {"entries", to_json(report.entries)},
          {"estimate", report.estimate},
          {"stderr", report.stderr_},
          {"trials", report.trials},
          {"seed", report.seed}};
}

LaplaceResult laplace_sum(std::span<const double> lambda, double alpha, bool complete) {
  if (!(alpha > 0)) throw std::invalid_argument("laplace statistic: alpha must be positive");
  LaplaceResult out;
  for (double l : lambda) {
    const double term = std::exp(alpha * l);
    if (out.terms_used > 0 && term < kLaplaceTailGuard * out.value) {
      out.converged = true;
      return out;
    }
    out.value += term;
    ++out.terms_used;
  }
  out.converged = complete;
  return out;
}

LaplaceResult laplace_statistic(const SpectrumFrame& frame, double m, double alpha,
                                std::optional<int> mirror_parity) {
  const auto lambda = scale_spectrum(m, frame);
  auto out = laplace_sum(lambda, alpha, true);
  if (mirror_parity) {
    const auto mirrored = scale_mirrored_spectrum(m, frame);
    const auto extra = laplace_sum(mirrored, alpha, true);
    const double sign = *mirror_parity % 2 == 0 ? 1.0 : -1.0;
    out.value += sign * extra.value;
    out.terms_used += extra.terms_used;
    out.converged = out.converged && extra.converged;
  }
  return out;
}

LaplaceResult laplace_statistic(const ScaledLineEnsemble& ensemble, double alpha, double s, double t) {
  std::vector<double> lambda(ensemble.j_max);
  for (std::size_t j = 1; j <= ensemble.j_max; ++j) lambda[j - 1] = evaluate_line(ensemble, j, s, t);
  return laplace_sum(lambda, alpha, false);
}

std::string_view to_string(EdgeRegion region) {
  switch (region) {
    case EdgeRegion::right_edge: return "right-edge";
    case EdgeRegion::left_edge: return "left-edge";
    case EdgeRegion::bulk: return "bulk";
    case EdgeRegion::tail: return "tail";
  }
  return "tail";
}

EdgeRegion edge_bulk_classify(double xi, double n, double m, double eps) {
  const double window = std::pow(m, -1.0 / 6 + eps);
  const double edge = 2 * std::sqrt(n);
  if (std::abs(xi - edge) <= window) return EdgeRegion::right_edge;
  if (std::abs(xi + edge) <= window) return EdgeRegion::left_edge;
  if (std::abs(xi) <= edge - window) return EdgeRegion::bulk;
  return EdgeRegion::tail;
}

}  // namespace cornerlab
