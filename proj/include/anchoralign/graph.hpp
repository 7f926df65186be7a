#pragma once

// Immutable simple graphs and bipartite graphs stored as packed adjacency
// bit rows, plus the degree-ordering and induced-subgraph helpers built on them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace anchoralign {

using Vertex = std::uint32_t;
using Word = std::uint64_t;

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

/// Row-major bit matrix. Each row is padded to whole words and the padding
/// bits are always zero, so word-wise XOR/popcount over rows is exact.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return words_per_row_; }

  bool test(std::size_t r, std::size_t c) const {
    return (words_[r * words_per_row_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c) {
    words_[r * words_per_row_ + c / kWordBits] |= Word{1} << (c % kWordBits);
  }
  void reset(std::size_t r, std::size_t c) {
    words_[r * words_per_row_ + c / kWordBits] &= ~(Word{1} << (c % kWordBits));
  }
  void flip(std::size_t r, std::size_t c) {
    words_[r * words_per_row_ + c / kWordBits] ^= Word{1} << (c % kWordBits);
  }

  std::span<const Word> row(std::size_t r) const {
    return {words_.data() + r * words_per_row_, words_per_row_};
  }
  std::span<Word> row(std::size_t r) {
    return {words_.data() + r * words_per_row_, words_per_row_};
  }

  std::size_t row_popcount(std::size_t r) const;

  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<Word> words_;
};

class GraphBuilder;

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;
  /// Builds from an edge list; throws std::invalid_argument on self-loops or
  /// out-of-range endpoints. Duplicate edges collapse.
  Graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

  /// Validates symmetry and the empty diagonal of an externally built matrix.
  static Graph from_adjacency(BitMatrix adjacency);

  std::size_t size() const { return adjacency_.rows(); }
  bool has_edge(Vertex u, Vertex v) const { return adjacency_.test(u, v); }
  std::size_t degree(Vertex v) const { return degrees_[v]; }
  /// n - 1 - degree(v).
  std::size_t complement_degree(Vertex v) const { return size() - 1 - degrees_[v]; }
  std::span<const std::size_t> degrees() const { return degrees_; }
  std::size_t max_degree() const;
  std::size_t edge_count() const;

  std::span<const Word> row(Vertex v) const { return adjacency_.row(v); }
  const BitMatrix& adjacency() const { return adjacency_; }

  std::vector<Vertex> neighbors(Vertex v) const;
  /// Every edge once as (u, v) with u < v, sorted lexicographically.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  bool operator==(const Graph& other) const { return adjacency_ == other.adjacency_; }

 private:
  friend class GraphBuilder;
  explicit Graph(BitMatrix adjacency);

  BitMatrix adjacency_;
  std::vector<std::size_t> degrees_;
};

/// Mutable staging area for samplers; `build()` freezes it into a Graph.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n) : adjacency_(n, n) {}

  std::size_t size() const { return adjacency_.rows(); }
  void add_edge(Vertex u, Vertex v) {
    adjacency_.set(u, v);
    adjacency_.set(v, u);
  }
  void remove_edge(Vertex u, Vertex v) {
    adjacency_.reset(u, v);
    adjacency_.reset(v, u);
  }
  void toggle_edge(Vertex u, Vertex v) {
    adjacency_.flip(u, v);
    adjacency_.flip(v, u);
  }
  bool has_edge(Vertex u, Vertex v) const { return adjacency_.test(u, v); }

  Graph build() &&;

 private:
  BitMatrix adjacency_;
};

/// Bipartite graph with `left_size()` left vertices and `right_size()` right
/// positions; row u holds the right-side neighbourhood of left vertex u.
class BiGraph {
 public:
  BiGraph() = default;
  explicit BiGraph(BitMatrix rows) : rows_(std::move(rows)) {}
  BiGraph(std::size_t left, std::size_t right) : rows_(left, right) {}

  std::size_t left_size() const { return rows_.rows(); }
  std::size_t right_size() const { return rows_.cols(); }
  bool has_edge(std::size_t u, std::size_t j) const { return rows_.test(u, j); }
  void add_edge(std::size_t u, std::size_t j) { rows_.set(u, j); }
  std::span<const Word> row(std::size_t u) const { return rows_.row(u); }
  std::size_t row_degree(std::size_t u) const { return rows_.row_popcount(u); }
  std::size_t edge_count() const;

  bool operator==(const BiGraph&) const = default;

 private:
  BitMatrix rows_;
};

struct DegreeEntry {
  Vertex vertex;
  std::size_t degree;
  bool operator==(const DegreeEntry&) const = default;
};

/// Vertices by degree, descending; equal degrees ordered by ascending id.
class DegreeSequence {
 public:
  explicit DegreeSequence(std::vector<DegreeEntry> ordered) : ordered_(std::move(ordered)) {}

  std::size_t size() const { return ordered_.size(); }
  const DegreeEntry& operator[](std::size_t i) const { return ordered_[i]; }
  std::span<const DegreeEntry> entries() const { return ordered_; }
  auto begin() const { return ordered_.begin(); }
  auto end() const { return ordered_.end(); }

 private:
  std::vector<DegreeEntry> ordered_;
};

DegreeSequence degree_sequence(const Graph& g);

/// Subgraph on `keep` (treated as a set), relabelled 0..|keep|-1 in ascending
/// order of the original ids.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep);

/// Bit (i, j) is set iff {left_sorted[i], anchors[j]} is an edge, where
/// left_sorted is `left` in ascending id order.
BiGraph induced_bigraph(const Graph& g, std::span<const Vertex> left,
                        std::span<const Vertex> anchors);

}  // namespace anchoralign
