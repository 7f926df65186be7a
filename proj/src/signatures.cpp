#include "anchoralign/signatures.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace anchoralign {

namespace {

constexpr std::uint32_t kNoRow = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kFar = std::numeric_limits<std::uint32_t>::max();

std::uint32_t distance(const Word* a, const Word* b, std::size_t words) {
  std::uint32_t d = 0;
  for (std::size_t w = 0; w < words; ++w) d += static_cast<std::uint32_t>(std::popcount(a[w] ^ b[w]));
  return d;
}

void require_same_length(const SignatureTable& ta, const SignatureTable& tb) {
  if (ta.length() != tb.length()) {
    throw std::invalid_argument("signature length mismatch: " + std::to_string(ta.length()) +
                                " vs " + std::to_string(tb.length()));
  }
}

// Partial minima for tb rows [begin, end): full column minima for those rows,
// and per-ta-row minima restricted to them.
struct Partial {
  std::vector<std::uint32_t> a_to_b;
  std::vector<std::uint32_t> a_dist;
};

template <std::size_t Words>
void scan_block(const SignatureTable& ta, const SignatureTable& tb, std::size_t begin,
                std::size_t end, std::size_t words, NearestMatches& out, Partial& part) {
  const std::size_t na = ta.size();
  const Word* a_base = ta.size() ? ta.row(0).data() : nullptr;
  for (std::size_t j = begin; j < end; ++j) {
    const Word* b = tb.row(j).data();
    std::uint32_t best = kFar;
    std::uint32_t best_row = kNoRow;
    for (std::size_t i = 0; i < na; ++i) {
      const Word* a = a_base + i * words;
      std::uint32_t d;
      if constexpr (Words == 1) {
        d = static_cast<std::uint32_t>(std::popcount(a[0] ^ b[0]));
      } else {
        d = distance(a, b, words);
      }
      if (d < best) {
        best = d;
        best_row = static_cast<std::uint32_t>(i);
      }
      // Rows j are visited in ascending order, so strict '<' keeps the lowest.
      if (d < part.a_dist[i]) {
        part.a_dist[i] = d;
        part.a_to_b[i] = static_cast<std::uint32_t>(j);
      }
    }
    out.b_to_a[j] = best_row;
    out.b_dist[j] = best;
  }
}

}  // namespace

Signature::Signature(std::size_t length, std::span<const Word> words)
    : length_(length), words_(words.begin(), words.end()) {
  if (words_.size() != words_for(length)) throw std::invalid_argument("signature word count mismatch");
}

Signature Signature::from_string(std::string_view text) {
  Signature s(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      s.set(i);
    } else if (text[i] != '0') {
      throw std::invalid_argument("signature text must contain only '0' and '1'");
    }
  }
  return s;
}

std::size_t hamming(const Signature& a, const Signature& b) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("signature length mismatch: " + std::to_string(a.length()) +
                                " vs " + std::to_string(b.length()));
  }
  return hamming(a.words(), b.words());
}

std::size_t hamming(std::span<const Word> a, std::span<const Word> b) {
  if (a.size() != b.size()) throw std::invalid_argument("signature word count mismatch");
  return distance(a.data(), b.data(), a.size());
}

SignatureTable::SignatureTable(std::size_t graph_size, std::size_t length,
                               std::vector<Vertex> index)
    : graph_size_(graph_size), length_(length), words_per_row_(words_for(length)),
      index_(std::move(index)), words_(index_.size() * words_per_row_, 0) {}

SignatureTable signatures_for(const Graph& g, std::span<const Vertex> vertices,
                              std::span<const Vertex> anchors) {
  std::vector<bool> seen(g.size(), false);
  for (Vertex w : anchors) {
    if (w >= g.size()) throw std::invalid_argument("anchor out of range: " + std::to_string(w));
    if (seen[w]) throw std::invalid_argument("duplicate anchor: " + std::to_string(w));
    seen[w] = true;
  }
  std::vector<Vertex> rows(vertices.begin(), vertices.end());
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  if (!rows.empty() && rows.back() >= g.size()) {
    throw std::invalid_argument("vertex out of range: " + std::to_string(rows.back()));
  }
  SignatureTable table(g.size(), anchors.size(), std::move(rows));
  for (std::size_t r = 0; r < table.size(); ++r) {
    const Vertex u = table.vertex(r);
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      if (g.has_edge(u, anchors[j])) table.set(r, j);
    }
  }
  return table;
}

SignatureTable signatures_of(const Graph& g, std::span<const Vertex> anchors) {
  std::vector<bool> is_anchor(g.size(), false);
  for (Vertex w : anchors) {
    if (w < g.size()) is_anchor[w] = true;
  }
  std::vector<Vertex> rest;
  rest.reserve(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!is_anchor[v]) rest.push_back(v);
  }
  return signatures_for(g, rest, anchors);
}

NearestMatches nearest_matches(const SignatureTable& ta, const SignatureTable& tb,
                               unsigned threads) {
  require_same_length(ta, tb);
  const std::size_t na = ta.size();
  const std::size_t nb = tb.size();
  NearestMatches out;
  out.a_to_b.assign(na, kNoRow);
  out.a_dist.assign(na, kFar);
  out.b_to_a.assign(nb, kNoRow);
  out.b_dist.assign(nb, kFar);
  if (na == 0 || nb == 0) return out;

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, (nb + 63) / 64);
  const std::size_t words = ta.words_per_row();
  std::vector<Partial> parts(workers, Partial{std::vector<std::uint32_t>(na, kNoRow),
                                              std::vector<std::uint32_t>(na, kFar)});
  auto run = [&](std::size_t w) {
    const std::size_t begin = nb * w / workers;
    const std::size_t end = nb * (w + 1) / workers;
    if (words == 1) {
      scan_block<1>(ta, tb, begin, end, words, out, parts[w]);
    } else {
      scan_block<0>(ta, tb, begin, end, words, out, parts[w]);
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  // Worker blocks cover ascending tb ranges; merging in block order with a
  // strict comparison keeps the lowest tb row among equal distances.
  for (const Partial& part : parts) {
    for (std::size_t i = 0; i < na; ++i) {
      if (part.a_dist[i] < out.a_dist[i]) {
        out.a_dist[i] = part.a_dist[i];
        out.a_to_b[i] = part.a_to_b[i];
      }
    }
  }
  return out;
}

Alignment naive_bipartite_align(const SignatureTable& ta, const SignatureTable& tb,
                                unsigned threads) {
  const NearestMatches nearest = nearest_matches(ta, tb, threads);
  Alignment out(tb.graph_size());
  for (std::size_t j = 0; j < tb.size(); ++j) {
    if (nearest.b_to_a[j] != kNoRow) out.set(tb.vertex(j), ta.vertex(nearest.b_to_a[j]));
  }
  return out;
}

std::vector<RowPair> consistent_pairs(const NearestMatches& nearest) {
  const std::size_t na = nearest.a_to_b.size();
  const std::size_t nb = nearest.b_to_a.size();
  std::vector<std::uint32_t> claims_on_b(nb, 0);
  std::vector<std::uint32_t> claims_on_a(na, 0);
  for (std::uint32_t j : nearest.a_to_b) {
    if (j != kNoRow) ++claims_on_b[j];
  }
  for (std::uint32_t i : nearest.b_to_a) {
    if (i != kNoRow) ++claims_on_a[i];
  }
  // Claims from anyone other than the candidate partner veto the pair.
  auto accepted = [&](std::uint32_t i, std::uint32_t j) {
    const std::uint32_t own_b = nearest.a_to_b[i] == j ? 1 : 0;
    const std::uint32_t own_a = nearest.b_to_a[j] == i ? 1 : 0;
    return claims_on_b[j] == own_b && claims_on_a[i] == own_a;
  };
  std::vector<RowPair> out;
  for (std::uint32_t j = 0; j < nb; ++j) {
    const std::uint32_t i = nearest.b_to_a[j];
    if (i != kNoRow && accepted(i, j)) out.push_back({i, j, nearest.b_dist[j]});
  }
  for (std::uint32_t i = 0; i < na; ++i) {
    const std::uint32_t j = nearest.a_to_b[i];
    if (j == kNoRow || nearest.b_to_a[j] == i) continue;
    if (accepted(i, j)) out.push_back({i, j, nearest.a_dist[i]});
  }
  std::sort(out.begin(), out.end(),
            [](const RowPair& x, const RowPair& y) { return x.b_row < y.b_row; });
  return out;
}

Alignment consistent_bipartite_align(const SignatureTable& ta, const SignatureTable& tb,
                                     unsigned threads) {
  const NearestMatches nearest = nearest_matches(ta, tb, threads);
  Alignment out(tb.graph_size());
  for (const RowPair& pair : consistent_pairs(nearest)) {
    out.set(tb.vertex(pair.b_row), ta.vertex(pair.a_row));
  }
  return out;
}

}  // namespace anchoralign
