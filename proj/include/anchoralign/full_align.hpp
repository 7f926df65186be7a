#pragma once

// End-to-end alignment: anchor phase followed by signature matching.

#include <cstddef>

#include "anchoralign/anchors.hpp"
#include "anchoralign/graph.hpp"
#include "anchoralign/models.hpp"

namespace anchoralign {

enum class Variant {
  /// Rank-matched top-h anchors, then argmin signature matching.
  naive,
  /// Pruned two-extreme anchors, then consistent matching rounds over the
  /// still unmatched vertices, then argmin matching of the residue.
  consistent_iterative,
};

struct AlignConfig {
  Variant variant = Variant::consistent_iterative;
  /// Used by the naive variant's anchor ranking.
  TieBreak tie_break = TieBreak::neighbor_degree_sum;
  RobustConfig robust;
  std::size_t max_rounds = 5;
  /// Matched pairs promoted to anchors after each round, smallest normalised
  /// distance first; 0 picks 2h.
  std::size_t refresh = 0;
  /// Argmin-match whatever the consistent rounds leave unmatched.
  bool residue_fallback = true;
  unsigned threads = 0;
};

struct AlignResult {
  /// Map from G_b to G_a.
  Alignment alignment;
  /// The anchor pairs used by the first matching round.
  Alignment anchors;
  std::size_t consistent_rounds = 0;
  double anchor_ms = 0.0;
  double match_ms = 0.0;
};

/// Throws std::invalid_argument if the graphs differ in size or h is out of
/// range for them.
AlignResult full_align(const Graph& ga, const Graph& gb, std::size_t h,
                       const AlignConfig& cfg = {});

}  // namespace anchoralign
