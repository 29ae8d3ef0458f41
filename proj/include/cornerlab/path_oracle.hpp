#pragma once

// Exact evaluation of mixed moments by summing the expectation of every
// k-tuple of closed paths.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cornerlab/entry_process.hpp"
#include "cornerlab/moments.hpp"
#include "cornerlab/paths.hpp"

namespace cornerlab {

/// k closed paths; path p uses vertices 1 .. bounds[p].
struct PathTuple {
  std::vector<Path> paths;
  std::vector<std::size_t> bounds;

  void validate() const;
};

using Edge = std::pair<std::size_t, std::size_t>;

struct EdgeMultiplicity {
  std::map<Edge, std::size_t> unordered;  // key (min, max)
  std::map<Edge, std::size_t> oriented;   // key (from, to)
};

EdgeMultiplicity edge_multiplicity(const PathTuple& tuple);

/// Every unordered edge (loops included) is traversed an even number of times.
bool is_even_tuple(const PathTuple& tuple);

/// Raised when the oracle cannot produce an exact value.
class OracleOutOfScope : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest number of factors one entry may carry in a tuple.
inline constexpr std::size_t kMaxEdgeMultiplicity = 16;

enum class OracleMethod {
  raw,      // every tuple of vertex sequences
  classes,  // one representative per relabeling class, weighted by its size
};

struct OracleOptions {
  OracleMethod method = OracleMethod::classes;
  bool skip_odd_tuples = false;
  BacktrackConvention convention = BacktrackConvention::sequence;
};

/// E prod over the tuple's steps of H^{(tau_p)}(u_{p,i}, u_{p,i+1}).
double tuple_expectation(const PathTuple& tuple, std::span<const double> taus,
                         const EntryProcessSpec& entries);

/// E prod_p tr (H^{(tau_p),(N_p)} / (2 sqrt(N_p)))^{m_p} as a sum over all
/// k-tuples of closed paths.
double exact_mixed_moment(const MomentSpec& spec, const EntryProcessSpec& entries,
                          const OracleOptions& options = {});

/// E prod_p tr P_{n_p}^{(N_p)}(H^{(tau_p),(N_p)}) as a sum over k-tuples of
/// closed loopless non-backtracking paths. Needs unimodular entries.
double exact_modified_moment(const MomentSpec& spec, const EntryProcessSpec& entries,
                             const OracleOptions& options = {});

/// Dispatches on spec.kind.
double exact_moment(const MomentSpec& spec, const EntryProcessSpec& entries,
                    const OracleOptions& options = {});

nlohmann::json oracle_result_json(const MomentSpec& spec, const EntryProcessSpec& entries,
                                  double value);

}  // namespace cornerlab
