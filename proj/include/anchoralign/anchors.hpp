#pragma once

// High-degree anchor extraction, rank matching, degree-separation diagnostics
// and the pruned two-extreme anchor alignment.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "anchoralign/graph.hpp"
#include "anchoralign/models.hpp"

namespace anchoralign {

enum class Side { a, b };

/// How equal degrees are ordered when ranking vertices.
enum class TieBreak {
  /// Ascending vertex id. Deterministic but label dependent.
  vertex_id,
  /// Larger sum of neighbour degrees first, then ascending id. Invariant under
  /// relabelling, so isomorphic graphs rank their vertices consistently unless
  /// both keys tie.
  neighbor_degree_sum,
};

/// Vertices ranked by degree, descending, under the given tie-break.
std::vector<Vertex> degree_ranking(const Graph& g, TieBreak tie_break = TieBreak::vertex_id);

struct AnchorList {
  std::vector<Vertex> ordered;
  Side side = Side::a;

  std::size_t size() const { return ordered.size(); }
  Vertex operator[](std::size_t i) const { return ordered[i]; }
};

/// First h vertices of the degree ranking. Throws std::invalid_argument
/// unless 1 <= h <= n.
AnchorList top_h(const Graph& g, std::size_t h, Side side = Side::a,
                 TieBreak tie_break = TieBreak::vertex_id);

/// Matches the i-th anchor of gb to the i-th anchor of ga; everything else is
/// unmatched.
Alignment anchor_align(const Graph& ga, const Graph& gb, std::size_t h,
                       TieBreak tie_break = TieBreak::vertex_id);

/// Anchor pairs (a vertex, b vertex) of an alignment, ordered by descending
/// G_b degree so that the pair order is a valid anchor order on both sides.
struct AnchorPairs {
  std::vector<Vertex> a;
  std::vector<Vertex> b;
  std::size_t size() const { return a.size(); }
};
AnchorPairs anchor_pairs(const Alignment& alignment, const Graph& gb);

struct SeparationReport {
  /// gaps[i] = delta_{i+1} - delta_{i+2} (1-based degrees), i < h.
  std::vector<std::size_t> gaps;
  std::size_t min_gap = 0;
  /// Every consecutive gap among the top h + 1 degrees is at least 3.
  bool sep3_ok = false;
};

/// Throws std::invalid_argument unless 1 <= h and h + 1 <= n.
SeparationReport separation_report(const Graph& g, std::size_t h);

struct RobustConfig {
  /// Vertices taken from each end of each degree ranking; 0 picks ceil(1.5 h)
  /// clamped to n / 4.
  std::size_t candidates_per_extreme = 0;
  /// Pruning never goes below this many pairs; 0 picks h.
  std::size_t prune_floor = 0;
  /// Agreement density at which pruning may stop; values <= 0 pick
  /// 0.9 (p11 + p00) when `p` is set, else 0.9 times the agreement density of
  /// the top-decile candidates' first alignment.
  double density_threshold = 0.0;
  /// Pruning also requires min degree >= ratio * mean degree.
  double min_degree_ratio = 0.9;
  std::size_t max_iters = 10;
  /// Extra attempts with randomly perturbed candidate degrees, run while the
  /// best pruned density is below the threshold. The attempt with the highest
  /// density among those reaching prune_floor pairs wins.
  std::size_t restarts = 16;
  /// Seed of the perturbation stream; results are a function of it.
  std::uint64_t seed = 0;
  std::optional<ProbVector> p;
  TieBreak tie_break = TieBreak::neighbor_degree_sum;
  unsigned threads = 0;
};

/// Graph on aligned pairs: pairs i and j are adjacent iff {a[i], a[j]} in G_a
/// has the same edge indicator as {b[i], b[j]} in G_b.
Graph agreement_graph(const Graph& ga, const Graph& gb, const AnchorPairs& pairs);

/// Repeatedly deletes a minimum-degree vertex (lowest index among ties) while
/// more than `floor` vertices remain and the graph is not yet both at least
/// `density_threshold` dense and min-degree balanced. Returns surviving
/// indices in ascending order.
std::vector<std::size_t> prune_agreement(const Graph& agreement, std::size_t floor,
                                         double density_threshold, double min_degree_ratio);

/// Edge density of a graph; 1 for fewer than two vertices.
double edge_density(const Graph& g);

struct RobustResult {
  Alignment alignment;
  /// Density of the pruned agreement graph of the returned pairs.
  double density = 0.0;
  /// Threshold the density was compared against.
  double threshold = 0.0;
  /// Iterations of the winning attempt; attempts made in total.
  std::size_t iterations = 0;
  std::size_t attempts = 0;
};

/// Two-extreme candidate pools, degree alignment, consistent signature
/// alignment inside the pools and agreement-graph pruning, repeated until the
/// pruned density stops increasing. Attempts after the first rank the pools
/// by degrees thinned as d - Bin(d, loss rate), with random order among equal
/// values. Throws std::invalid_argument if an explicit
/// candidates_per_extreme violates 4c <= n.
RobustResult robust_anchor_align(const Graph& ga, const Graph& gb, std::size_t h,
                                 const RobustConfig& cfg = {});

}  // namespace anchoralign
