#pragma once

// Closed vertex paths on {1, ..., N}. A path of length m is stored as its
// m + 1 vertices u_0 ... u_m with u_m = u_0.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cornerlab {

using Path = std::vector<std::size_t>;
using PathVisitor = std::function<void(std::span<const std::size_t>)>;

inline constexpr double kEnumerationGuard = 1e7;

/// How "no backtracking" treats the closure point of u_0 ... u_n.
///   sequence: u_j != u_{j+2} for 0 <= j <= n - 2 (this includes
///             u_{n-2} != u_n = u_0 but not u_{n-1} != u_1);
///   cyclic:   additionally u_{n-1} != u_1.
/// The trace identity for P_n holds with the sequence convention.
enum class BacktrackConvention { sequence, cyclic };

/// All N^m closed paths of length m, loops allowed. Throws std::length_error
/// when N^m exceeds the enumeration guard.
void enumerate_closed_paths(std::size_t n_vertices, std::size_t length, const PathVisitor& visit);
std::vector<Path> closed_paths(std::size_t n_vertices, std::size_t length);

/// Closed paths of length n with u_j != u_{j+1} and no backtracking. Throws
/// std::length_error when (N - 1)^n exceeds the enumeration guard.
void enumerate_nb_loopless(std::size_t n_vertices, std::size_t length, const PathVisitor& visit,
                           BacktrackConvention convention = BacktrackConvention::sequence);
std::vector<Path> nb_loopless_paths(std::size_t n_vertices, std::size_t length,
                                    BacktrackConvention convention = BacktrackConvention::sequence);

/// Whether a closed vertex sequence is loopless and non-backtracking.
bool is_nb_loopless(std::span<const std::size_t> path,
                    BacktrackConvention convention = BacktrackConvention::sequence);

}  // namespace cornerlab
