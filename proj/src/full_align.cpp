#include "anchoralign/full_align.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

#include "anchoralign/signatures.hpp"

namespace anchoralign {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct Unmatched {
  std::vector<Vertex> a;
  std::vector<Vertex> b;
};

Unmatched unmatched_sets(const Alignment& m, std::size_t n) {
  std::vector<bool> used_a(n, false);
  Unmatched out;
  for (Vertex b = 0; b < n; ++b) {
    if (m.matched(b)) {
      used_a[m[b]] = true;
    } else {
      out.b.push_back(b);
    }
  }
  for (Vertex a = 0; a < n; ++a) {
    if (!used_a[a]) out.a.push_back(a);
  }
  return out;
}

AlignResult naive_variant(const Graph& ga, const Graph& gb, std::size_t h,
                          const AlignConfig& cfg) {
  AlignResult result;
  const auto t0 = Clock::now();
  const AnchorList wa = top_h(ga, h, Side::a, cfg.tie_break);
  const AnchorList wb = top_h(gb, h, Side::b, cfg.tie_break);
  result.anchors = Alignment(gb.size());
  for (std::size_t i = 0; i < h; ++i) result.anchors.set(wb[i], wa[i]);
  result.anchor_ms = elapsed_ms(t0);

  const auto t1 = Clock::now();
  result.alignment = naive_bipartite_align(signatures_of(ga, wa.ordered),
                                           signatures_of(gb, wb.ordered), cfg.threads);
  for (std::size_t i = 0; i < h; ++i) result.alignment.set(wb[i], wa[i]);
  result.match_ms = elapsed_ms(t1);
  return result;
}

struct ScoredPair {
  Vertex a;
  Vertex b;
  double distance;
};

AlignResult iterative_variant(const Graph& ga, const Graph& gb, std::size_t h,
                              const AlignConfig& cfg) {
  const std::size_t n = ga.size();
  AlignResult result;
  const auto t0 = Clock::now();
  RobustResult robust = robust_anchor_align(ga, gb, h, cfg.robust);
  if (robust.alignment.matched_count() == 0) {
    robust.alignment = anchor_align(ga, gb, h, cfg.robust.tie_break);
  }
  result.anchors = robust.alignment;
  result.anchor_ms = elapsed_ms(t0);

  const auto t1 = Clock::now();
  const AnchorPairs base = anchor_pairs(result.anchors, gb);
  const std::size_t refresh = cfg.refresh == 0 ? 2 * h : cfg.refresh;
  Alignment out = result.anchors;
  AnchorPairs anchors = base;
  std::vector<ScoredPair> promoted;
  for (std::size_t round = 0; round < cfg.max_rounds; ++round) {
    const Unmatched rest = unmatched_sets(out, n);
    if (rest.b.empty() || rest.a.empty() || anchors.size() == 0) break;
    const SignatureTable ta = signatures_for(ga, rest.a, anchors.a);
    const SignatureTable tb = signatures_for(gb, rest.b, anchors.b);
    const std::vector<RowPair> pairs = consistent_pairs(nearest_matches(ta, tb, cfg.threads));
    if (pairs.empty()) break;
    ++result.consistent_rounds;
    const double length = static_cast<double>(anchors.size());
    for (const RowPair& rp : pairs) {
      out.set(tb.vertex(rp.b_row), ta.vertex(rp.a_row));
      promoted.push_back({ta.vertex(rp.a_row), tb.vertex(rp.b_row), rp.distance / length});
    }
    // Next round's anchors: the base pairs plus the most confident matches.
    std::stable_sort(promoted.begin(), promoted.end(),
                     [](const ScoredPair& x, const ScoredPair& y) { return x.distance < y.distance; });
    anchors = base;
    for (std::size_t i = 0; i < std::min(refresh, promoted.size()); ++i) {
      anchors.a.push_back(promoted[i].a);
      anchors.b.push_back(promoted[i].b);
    }
  }

  if (cfg.residue_fallback) {
    const Unmatched rest = unmatched_sets(out, n);
    if (!rest.b.empty() && !rest.a.empty()) {
      const Alignment residue = naive_bipartite_align(signatures_for(ga, rest.a, anchors.a),
                                                      signatures_for(gb, rest.b, anchors.b),
                                                      cfg.threads);
      for (Vertex b : rest.b) out.set(b, residue[b]);
    }
  }
  result.alignment = std::move(out);
  result.match_ms = elapsed_ms(t1);
  return result;
}

}  // namespace

AlignResult full_align(const Graph& ga, const Graph& gb, std::size_t h, const AlignConfig& cfg) {
  if (ga.size() != gb.size()) {
    throw std::invalid_argument("graphs differ in vertex count: " + std::to_string(ga.size()) +
                                " vs " + std::to_string(gb.size()));
  }
  if (h < 1 || h > ga.size()) {
    throw std::invalid_argument("h = " + std::to_string(h) + " out of range [1, " +
                                std::to_string(ga.size()) + "]");
  }
  return cfg.variant == Variant::naive ? naive_variant(ga, gb, h, cfg)
                                       : iterative_variant(ga, gb, h, cfg);
}

}  // namespace anchoralign
