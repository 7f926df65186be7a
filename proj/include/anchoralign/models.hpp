#pragma once

// Correlated random-graph models and the alignment type used to carry both
// planted and estimated vertex correspondences.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "anchoralign/graph.hpp"

namespace anchoralign {

/// Joint distribution of the edge indicators of one vertex pair in the two
/// graphs: (1,1), (1,0), (0,1), (0,0).
class ProbVector {
 public:
  /// Throws std::invalid_argument unless all entries are in [0,1] and they sum
  /// to 1 within 1e-12.
  ProbVector(double p11, double p10, double p01, double p00);

  /// p11 fixed, p10 = p01 = n^-exponent, p00 the remainder.
  static ProbVector from_noise_exponent(double n, double p11, double exponent);
  static ProbVector from_subsampling(double r, double sa, double sb);
  static ProbVector from_perturbation(double r, double delta);

  double p11() const { return p11_; }
  double p10() const { return p10_; }
  double p01() const { return p01_; }
  double p00() const { return p00_; }

  /// P[edge in G_a] = p11 + p10.
  double edge_a() const { return p11_ + p10_; }
  /// P[edge in G_b] = p11 + p01.
  double edge_b() const { return p11_ + p01_; }
  /// P[no edge in G_a] = p01 + p00.
  double nonedge_a() const { return p01_ + p00_; }
  /// P[no edge in G_b] = p10 + p00.
  double nonedge_b() const { return p10_ + p00_; }

  bool operator==(const ProbVector&) const = default;

 private:
  double p11_, p10_, p01_, p00_;
};

inline constexpr Vertex kUnmatched = std::numeric_limits<Vertex>::max();

/// Map from the vertices of G_b to the vertices of G_a; entries may be
/// kUnmatched. Alignments produced by the naive argmin matcher can map two
/// G_b vertices to the same G_a vertex; every other producer is injective.
class Alignment {
 public:
  Alignment() = default;
  explicit Alignment(std::size_t n) : map_(n, kUnmatched) {}
  explicit Alignment(std::vector<Vertex> map) : map_(std::move(map)) {}

  static Alignment identity(std::size_t n);

  std::size_t size() const { return map_.size(); }
  Vertex operator[](Vertex b) const { return map_[b]; }
  void set(Vertex b, Vertex a) { map_[b] = a; }
  bool matched(Vertex b) const { return map_[b] != kUnmatched; }
  std::size_t matched_count() const;
  bool is_injective() const;
  bool is_total() const { return matched_count() == size(); }
  const std::vector<Vertex>& map() const { return map_; }
  /// Matched (b, a) pairs in ascending b.
  std::vector<std::pair<Vertex, Vertex>> pairs() const;

  /// Number of G_b vertices whose image agrees with `truth`.
  std::size_t agreements(const Alignment& truth) const;
  /// agreements(truth) / truth.size().
  double accuracy(const Alignment& truth) const;

  bool operator==(const Alignment&) const = default;

 private:
  std::vector<Vertex> map_;
};

/// Two graphs on the same number of vertices plus the planted correspondence
/// (truth[b] is the G_a vertex that G_b vertex b copies).
struct CorrelatedPair {
  Graph ga;
  Graph gb;
  Alignment truth;
};

/// Every vertex pair independently draws its class from `p`. Pairs are visited
/// in (u, v) lexicographic order with one uniform draw per pair against the
/// cumulative order (p11, p10, p01, p00); when p11+p10+p01 < 0.05 the runs of
/// (0,0) pairs are skipped geometrically instead.
CorrelatedPair sample_correlated_er(std::size_t n, const ProbVector& p, std::uint64_t seed);

/// Parent ER(n, r); each parent edge kept in G_a w.p. sa and in G_b w.p. sb.
CorrelatedPair sample_subsampling(std::size_t n, double r, double sa, double sb,
                                  std::uint64_t seed);

/// Base ER(n, r); each graph flips every pair independently w.p. delta.
CorrelatedPair sample_perturbation(std::size_t n, double r, double delta, std::uint64_t seed);

/// Pair of bipartite graphs with `left` rows and `right` columns whose
/// left-right pairs are i.i.d. with distribution `p`.
std::pair<BiGraph, BiGraph> sample_correlated_bigraph(std::size_t left, std::size_t right,
                                                      const ProbVector& p, std::uint64_t seed);

/// Relabels G_b by a uniform random permutation and rewrites `truth` so it
/// still points every (new) G_b vertex at its G_a counterpart.
CorrelatedPair scramble(const CorrelatedPair& pair, std::uint64_t seed);

/// Each edge of `g` kept in each copy independently with probability s.
CorrelatedPair subsample_graph(const Graph& g, double s, std::uint64_t seed);

}  // namespace anchoralign
