#include "anchoralign/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace anchoralign {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_per_row_(words_for(cols)),
      words_(rows * words_for(cols), 0) {}

std::size_t BitMatrix::row_popcount(std::size_t r) const {
  std::size_t total = 0;
  for (Word w : row(r)) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

Graph::Graph(BitMatrix adjacency) : adjacency_(std::move(adjacency)) {
  degrees_.resize(adjacency_.rows());
  for (std::size_t v = 0; v < degrees_.size(); ++v) degrees_[v] = adjacency_.row_popcount(v);
}

Graph::Graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
  GraphBuilder builder(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::invalid_argument("edge endpoint out of range: " + std::to_string(u) + " " +
                                  std::to_string(v));
    }
    if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    builder.add_edge(u, v);
  }
  *this = std::move(builder).build();
}

Graph Graph::from_adjacency(BitMatrix adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw std::invalid_argument("adjacency matrix must be square");
  }
  const std::size_t n = adjacency.rows();
  for (std::size_t u = 0; u < n; ++u) {
    if (adjacency.test(u, u)) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    for (std::size_t v = u + 1; v < n; ++v) {
      if (adjacency.test(u, v) != adjacency.test(v, u)) {
        throw std::invalid_argument("adjacency matrix is not symmetric");
      }
    }
  }
  return Graph(std::move(adjacency));
}

Graph GraphBuilder::build() && { return Graph(std::move(adjacency_)); }

std::size_t Graph::max_degree() const {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

std::size_t Graph::edge_count() const {
  return std::accumulate(degrees_.begin(), degrees_.end(), std::size_t{0}) / 2;
}

std::vector<Vertex> Graph::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  out.reserve(degrees_[v]);
  auto words = row(v);
  for (std::size_t w = 0; w < words.size(); ++w) {
    Word bits = words[w];
    while (bits != 0) {
      out.push_back(static_cast<Vertex>(w * kWordBits + std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < size(); ++u) {
    for (Vertex v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::size_t BiGraph::edge_count() const {
  std::size_t total = 0;
  for (std::size_t u = 0; u < left_size(); ++u) total += row_degree(u);
  return total;
}

DegreeSequence degree_sequence(const Graph& g) {
  std::vector<DegreeEntry> entries(g.size());
  for (Vertex v = 0; v < g.size(); ++v) entries[v] = {v, g.degree(v)};
  // Stable sort on a vertex-ordered input keeps ascending ids within ties.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const DegreeEntry& a, const DegreeEntry& b) { return a.degree > b.degree; });
  return DegreeSequence(std::move(entries));
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  std::vector<Vertex> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (!kept.empty() && kept.back() >= g.size()) {
    throw std::invalid_argument("vertex id out of range: " + std::to_string(kept.back()));
  }
  GraphBuilder builder(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      if (g.has_edge(kept[i], kept[j])) {
        builder.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
      }
    }
  }
  return std::move(builder).build();
}

BiGraph induced_bigraph(const Graph& g, std::span<const Vertex> left,
                        std::span<const Vertex> anchors) {
  std::vector<bool> is_anchor(g.size(), false);
  for (Vertex w : anchors) {
    if (w >= g.size()) throw std::invalid_argument("anchor out of range: " + std::to_string(w));
    if (is_anchor[w]) throw std::invalid_argument("duplicate anchor: " + std::to_string(w));
    is_anchor[w] = true;
  }
  std::vector<Vertex> rows(left.begin(), left.end());
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  for (Vertex u : rows) {
    if (u >= g.size()) throw std::invalid_argument("vertex out of range: " + std::to_string(u));
    if (is_anchor[u]) {
      throw std::invalid_argument("left vertex " + std::to_string(u) + " is also an anchor");
    }
  }
  BiGraph out(rows.size(), anchors.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      if (g.has_edge(rows[i], anchors[j])) out.add_edge(i, j);
    }
  }
  return out;
}

}  // namespace anchoralign
