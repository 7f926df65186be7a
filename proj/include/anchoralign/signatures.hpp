#pragma once

// Anchor signatures and Hamming-distance matching between two signature
// tables: the naive argmin matcher and the consistent (mutually unrivalled)
// matcher.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "anchoralign/graph.hpp"
#include "anchoralign/models.hpp"

namespace anchoralign {

/// Packed bit vector of fixed length; padding bits are zero.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::size_t length) : length_(length), words_(words_for(length), 0) {}
  Signature(std::size_t length, std::span<const Word> words);
  /// Parses a string of '0'/'1' characters, bit i = text[i].
  static Signature from_string(std::string_view text);

  std::size_t length() const { return length_; }
  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  std::span<const Word> words() const { return words_; }

  bool operator==(const Signature&) const = default;

 private:
  std::size_t length_ = 0;
  std::vector<Word> words_;
};

/// Number of differing positions. Throws std::invalid_argument on a length
/// mismatch.
std::size_t hamming(const Signature& a, const Signature& b);
std::size_t hamming(std::span<const Word> a, std::span<const Word> b);

/// One signature row per listed vertex, rows in ascending vertex order.
/// `graph_size()` is the vertex count of the source graph, which sizes any
/// Alignment produced from the table.
class SignatureTable {
 public:
  SignatureTable() = default;
  SignatureTable(std::size_t graph_size, std::size_t length, std::vector<Vertex> index);

  std::size_t size() const { return index_.size(); }
  std::size_t length() const { return length_; }
  std::size_t graph_size() const { return graph_size_; }
  std::size_t words_per_row() const { return words_per_row_; }
  std::span<const Vertex> index() const { return index_; }
  Vertex vertex(std::size_t row) const { return index_[row]; }

  std::span<const Word> row(std::size_t r) const {
    return {words_.data() + r * words_per_row_, words_per_row_};
  }
  Signature signature(std::size_t r) const { return Signature(length_, row(r)); }
  bool test(std::size_t r, std::size_t bit) const {
    return (words_[r * words_per_row_ + bit / kWordBits] >> (bit % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t bit) {
    words_[r * words_per_row_ + bit / kWordBits] |= Word{1} << (bit % kWordBits);
  }

 private:
  std::size_t graph_size_ = 0;
  std::size_t length_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<Vertex> index_;
  std::vector<Word> words_;
};

/// Signatures of every non-anchor vertex against the ordered anchor list.
/// Throws std::invalid_argument on duplicate or out-of-range anchors.
SignatureTable signatures_of(const Graph& g, std::span<const Vertex> anchors);

/// Signatures of an arbitrary vertex set (sorted and deduplicated); the set
/// may contain anchors, whose own bit is then zero.
SignatureTable signatures_for(const Graph& g, std::span<const Vertex> vertices,
                              std::span<const Vertex> anchors);

/// Row and column minima of the distance matrix D[i][j] = hamming(ta row i,
/// tb row j). Indices are table rows; ties go to the lowest row.
struct NearestMatches {
  std::vector<std::uint32_t> a_to_b;
  std::vector<std::uint32_t> a_dist;
  std::vector<std::uint32_t> b_to_a;
  std::vector<std::uint32_t> b_dist;
};

/// `threads == 0` uses the hardware concurrency. The result does not depend on
/// the thread count.
NearestMatches nearest_matches(const SignatureTable& ta, const SignatureTable& tb,
                               unsigned threads = 0);

/// Every tb vertex mapped to its nearest ta vertex; may be non-injective.
/// Either table may be empty, in which case nothing is matched.
Alignment naive_bipartite_align(const SignatureTable& ta, const SignatureTable& tb,
                                unsigned threads = 0);

/// (u, v) is matched iff v is u's nearest row or u is v's nearest row, no
/// other ta row has v as its nearest, and no other tb row has u as its nearest.
/// Always injective.
Alignment consistent_bipartite_align(const SignatureTable& ta, const SignatureTable& tb,
                                     unsigned threads = 0);

/// Consistent pairs as (ta row, tb row, distance), ascending in tb row.
struct RowPair {
  std::uint32_t a_row;
  std::uint32_t b_row;
  std::uint32_t distance;
};
std::vector<RowPair> consistent_pairs(const NearestMatches& nearest);

}  // namespace anchoralign
