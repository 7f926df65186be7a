#include "anchoralign/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "anchoralign/rng.hpp"
#include "anchoralign/signatures.hpp"

namespace anchoralign {

namespace {

void check_same_size(const Graph& ga, const Graph& gb) {
  if (ga.size() != gb.size()) {
    throw std::invalid_argument("graphs differ in vertex count: " + std::to_string(ga.size()) +
                                " vs " + std::to_string(gb.size()));
  }
}

void check_h(std::size_t h, std::size_t n) {
  if (h < 1 || h > n) {
    throw std::invalid_argument("h = " + std::to_string(h) + " out of range [1, " +
                                std::to_string(n) + "]");
  }
}

// Density of the agreement graph restricted to `keep`.
double density_of(const Graph& g, std::span<const std::size_t> keep) {
  if (keep.size() < 2) return 1.0;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = i + 1; j < keep.size(); ++j) {
      edges += g.has_edge(static_cast<Vertex>(keep[i]), static_cast<Vertex>(keep[j]));
    }
  }
  const double pairs = 0.5 * static_cast<double>(keep.size()) * static_cast<double>(keep.size() - 1);
  return static_cast<double>(edges) / pairs;
}

// Index-by-index pairing of two rank lists, skipping already accepted vertices.
void pair_by_rank(std::span<const Vertex> ranked_a, std::span<const Vertex> ranked_b,
                  const std::vector<bool>& taken_a, const std::vector<bool>& taken_b,
                  AnchorPairs& out) {
  std::vector<Vertex> free_a;
  std::vector<Vertex> free_b;
  for (Vertex v : ranked_a) {
    if (!taken_a[v]) free_a.push_back(v);
  }
  for (Vertex v : ranked_b) {
    if (!taken_b[v]) free_b.push_back(v);
  }
  const std::size_t k = std::min(free_a.size(), free_b.size());
  for (std::size_t i = 0; i < k; ++i) {
    out.a.push_back(free_a[i]);
    out.b.push_back(free_b[i]);
  }
}

// Reorders `list` by degree thinned as d - Bin(d, loss), descending when
// `descending`, with uniformly random order among equal thinned degrees.
void perturbed_order(const Graph& g, double loss, bool descending, Rng& rng,
                     std::vector<Vertex>& list) {
  std::vector<std::pair<std::int64_t, std::uint64_t>> key(g.size());
  for (Vertex v : list) {
    const std::size_t d = g.degree(v);
    std::size_t lost = 0;
    if (loss >= 0.05) {
      for (std::size_t i = 0; i < d; ++i) lost += rng.bernoulli(loss) ? 1 : 0;
    } else if (loss > 0.0) {
      for (std::uint64_t i = rng.geometric_skip(loss); i < d;) {
        ++lost;
        const std::uint64_t skip = rng.geometric_skip(loss);
        if (skip >= d) break;
        i += skip + 1;
      }
    }
    const auto thinned = static_cast<std::int64_t>(d - lost);
    key[v] = {descending ? -thinned : thinned, rng.next()};
  }
  std::sort(list.begin(), list.end(), [&](Vertex x, Vertex y) { return key[x] < key[y]; });
}

AnchorPairs select(const AnchorPairs& pairs, std::span<const std::size_t> keep) {
  AnchorPairs out;
  for (std::size_t i : keep) {
    out.a.push_back(pairs.a[i]);
    out.b.push_back(pairs.b[i]);
  }
  return out;
}

}  // namespace

std::vector<Vertex> degree_ranking(const Graph& g, TieBreak tie_break) {
  std::vector<Vertex> order(g.size());
  std::iota(order.begin(), order.end(), Vertex{0});
  if (tie_break == TieBreak::vertex_id) {
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex x, Vertex y) { return g.degree(x) > g.degree(y); });
    return order;
  }
  std::vector<std::size_t> neighbor_sum(g.size(), 0);
  for (Vertex v = 0; v < g.size(); ++v) {
    for (Vertex u : g.neighbors(v)) neighbor_sum[v] += g.degree(u);
  }
  std::sort(order.begin(), order.end(), [&](Vertex x, Vertex y) {
    if (g.degree(x) != g.degree(y)) return g.degree(x) > g.degree(y);
    if (neighbor_sum[x] != neighbor_sum[y]) return neighbor_sum[x] > neighbor_sum[y];
    return x < y;
  });
  return order;
}

AnchorList top_h(const Graph& g, std::size_t h, Side side, TieBreak tie_break) {
  check_h(h, g.size());
  std::vector<Vertex> ranking = degree_ranking(g, tie_break);
  ranking.resize(h);
  return {std::move(ranking), side};
}

Alignment anchor_align(const Graph& ga, const Graph& gb, std::size_t h, TieBreak tie_break) {
  check_same_size(ga, gb);
  const AnchorList wa = top_h(ga, h, Side::a, tie_break);
  const AnchorList wb = top_h(gb, h, Side::b, tie_break);
  Alignment out(gb.size());
  for (std::size_t i = 0; i < h; ++i) out.set(wb[i], wa[i]);
  return out;
}

AnchorPairs anchor_pairs(const Alignment& alignment, const Graph& gb) {
  std::vector<std::pair<Vertex, Vertex>> pairs = alignment.pairs();
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
    return gb.degree(x.first) > gb.degree(y.first);
  });
  AnchorPairs out;
  for (auto [b, a] : pairs) {
    out.a.push_back(a);
    out.b.push_back(b);
  }
  return out;
}

SeparationReport separation_report(const Graph& g, std::size_t h) {
  if (h < 1 || h + 1 > g.size()) {
    throw std::invalid_argument("h = " + std::to_string(h) + " needs 1 <= h < n = " +
                                std::to_string(g.size()));
  }
  const DegreeSequence seq = degree_sequence(g);
  SeparationReport report;
  report.gaps.resize(h);
  for (std::size_t i = 0; i < h; ++i) report.gaps[i] = seq[i].degree - seq[i + 1].degree;
  report.min_gap = *std::min_element(report.gaps.begin(), report.gaps.end());
  report.sep3_ok = report.min_gap >= 3;
  return report;
}

Graph agreement_graph(const Graph& ga, const Graph& gb, const AnchorPairs& pairs) {
  const std::size_t m = pairs.size();
  GraphBuilder out(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (ga.has_edge(pairs.a[i], pairs.a[j]) == gb.has_edge(pairs.b[i], pairs.b[j])) {
        out.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
      }
    }
  }
  return std::move(out).build();
}

double edge_density(const Graph& g) {
  if (g.size() < 2) return 1.0;
  const double n = static_cast<double>(g.size());
  return static_cast<double>(g.edge_count()) / (0.5 * n * (n - 1.0));
}

std::vector<std::size_t> prune_agreement(const Graph& agreement, std::size_t floor,
                                         double density_threshold, double min_degree_ratio) {
  const std::size_t m = agreement.size();
  std::vector<bool> alive(m, true);
  std::vector<std::size_t> degree(agreement.degrees().begin(), agreement.degrees().end());
  std::size_t remaining = m;
  std::size_t edges = agreement.edge_count();
  while (remaining > floor && remaining > 0) {
    std::size_t victim = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (alive[i] && (victim == m || degree[i] < degree[victim])) victim = i;
    }
    const double r = static_cast<double>(remaining);
    const double density = remaining < 2 ? 1.0 : static_cast<double>(edges) / (0.5 * r * (r - 1.0));
    const double mean_degree = 2.0 * static_cast<double>(edges) / r;
    const bool balanced = static_cast<double>(degree[victim]) >= min_degree_ratio * mean_degree;
    if (density >= density_threshold && balanced) break;
    alive[victim] = false;
    --remaining;
    edges -= degree[victim];
    for (Vertex u : agreement.neighbors(static_cast<Vertex>(victim))) {
      if (alive[u]) --degree[u];
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m; ++i) {
    if (alive[i]) keep.push_back(i);
  }
  return keep;
}

RobustResult robust_anchor_align(const Graph& ga, const Graph& gb, std::size_t h,
                                 const RobustConfig& cfg) {
  check_same_size(ga, gb);
  const std::size_t n = ga.size();
  check_h(h, n);
  std::size_t c = cfg.candidates_per_extreme;
  if (c != 0 && 4 * c > n) {
    throw std::invalid_argument("candidates_per_extreme = " + std::to_string(c) +
                                " violates 4c <= n = " + std::to_string(n));
  }
  if (c == 0) c = std::min<std::size_t>((3 * h + 1) / 2, n / 4);
  RobustResult result{Alignment(n), 0.0, 0.0, 0, 0};
  if (c == 0) return result;

  const std::size_t floor = cfg.prune_floor == 0 ? h : cfg.prune_floor;
  const std::size_t seed_floor = std::max<std::size_t>(4, floor / 4);
  const std::vector<Vertex> rank_a = degree_ranking(ga, cfg.tie_break);
  const std::vector<Vertex> rank_b = degree_ranking(gb, cfg.tie_break);
  const std::vector<Vertex> top_a(rank_a.begin(), rank_a.begin() + c);
  const std::vector<Vertex> top_b(rank_b.begin(), rank_b.begin() + c);
  // Bottom lists run from the lowest degree upwards.
  const std::vector<Vertex> bottom_a(rank_a.rbegin(), rank_a.rbegin() + c);
  const std::vector<Vertex> bottom_b(rank_b.rbegin(), rank_b.rbegin() + c);
  std::vector<Vertex> pool_a = top_a;
  pool_a.insert(pool_a.end(), bottom_a.begin(), bottom_a.end());
  std::vector<Vertex> pool_b = top_b;
  pool_b.insert(pool_b.end(), bottom_b.begin(), bottom_b.end());

  double threshold = cfg.density_threshold;
  if (threshold <= 0.0 && cfg.p) threshold = 0.9 * (cfg.p->p11() + cfg.p->p00());
  if (threshold <= 0.0) {
    AnchorPairs decile;
    const std::size_t k = std::max<std::size_t>(2, (c + 9) / 10);
    for (std::size_t i = 0; i < std::min(k, c); ++i) {
      decile.a.push_back(top_a[i]);
      decile.b.push_back(top_b[i]);
    }
    threshold = 0.9 * edge_density(agreement_graph(ga, gb, decile));
  }
  result.threshold = threshold;

  // Per-edge loss rates of the thinning; without p, about half an edge per
  // vertex at the mean degree.
  auto fallback_rate = [n](const Graph& g) {
    const double mean = n == 0 ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / n;
    return mean > 0.0 ? std::min(0.5, 0.5 / mean) : 0.0;
  };
  const double loss_a = cfg.p && cfg.p->edge_a() > 0.0 ? cfg.p->p10() / cfg.p->edge_a()
                                                       : (cfg.p ? 0.0 : fallback_rate(ga));
  const double loss_b = cfg.p && cfg.p->edge_b() > 0.0 ? cfg.p->p01() / cfg.p->edge_b()
                                                       : (cfg.p ? 0.0 : fallback_rate(gb));

  struct Attempt {
    AnchorPairs accepted;
    double density = -1.0;
    std::size_t iterations = 0;
  };

  auto run_attempt = [&](Rng* rng) {
    Attempt out;
    std::vector<Vertex> ta_order = top_a, tb_order = top_b;
    std::vector<Vertex> ba_order = bottom_a, bb_order = bottom_b;
    std::vector<bool> taken_a(n, false);
    std::vector<bool> taken_b(n, false);
    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
      if (rng != nullptr) {
        perturbed_order(ga, loss_a, true, *rng, ta_order);
        perturbed_order(gb, loss_b, true, *rng, tb_order);
        perturbed_order(ga, loss_a, false, *rng, ba_order);
        perturbed_order(gb, loss_b, false, *rng, bb_order);
      }
      AnchorPairs anchors = out.accepted;
      pair_by_rank(ta_order, tb_order, taken_a, taken_b, anchors);
      pair_by_rank(ba_order, bb_order, taken_a, taken_b, anchors);
      // Rank pairing is mostly wrong under noise; the correct pairs agree with
      // each other and survive pruning, so only they feed the signatures.
      anchors = select(anchors, prune_agreement(agreement_graph(ga, gb, anchors), seed_floor,
                                                threshold, cfg.min_degree_ratio));

      const SignatureTable ta = signatures_for(ga, pool_a, anchors.a);
      const SignatureTable tb = signatures_for(gb, pool_b, anchors.b);
      AnchorPairs aligned;
      for (const RowPair& rp : consistent_pairs(nearest_matches(ta, tb, cfg.threads))) {
        aligned.a.push_back(ta.vertex(rp.a_row));
        aligned.b.push_back(tb.vertex(rp.b_row));
      }
      if (aligned.size() == 0) break;

      const Graph agreement = agreement_graph(ga, gb, aligned);
      const std::vector<std::size_t> keep =
          prune_agreement(agreement, floor, threshold, cfg.min_degree_ratio);
      const double density = density_of(agreement, keep);
      if (iter > 0 && density <= out.density) break;

      out.density = density;
      out.accepted = select(aligned, keep);
      std::fill(taken_a.begin(), taken_a.end(), false);
      std::fill(taken_b.begin(), taken_b.end(), false);
      for (std::size_t i = 0; i < out.accepted.size(); ++i) {
        taken_a[out.accepted.a[i]] = true;
        taken_b[out.accepted.b[i]] = true;
      }
      out.iterations = iter + 1;
    }
    return out;
  };

  // Attempts that keep at least `floor` pairs beat those that do not; then
  // higher density wins, earlier attempts on ties.
  auto better = [&](const Attempt& x, const Attempt& y) {
    const bool fx = x.accepted.size() >= floor;
    const bool fy = y.accepted.size() >= floor;
    if (fx != fy) return fx;
    return x.density > y.density;
  };

  Attempt best = run_attempt(nullptr);
  result.attempts = 1;
  Rng rng(derive_seed(cfg.seed, {0x616e63686f72ULL}));
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    if (best.accepted.size() >= floor && best.density >= threshold) break;
    Attempt next = run_attempt(&rng);
    ++result.attempts;
    if (better(next, best)) best = std::move(next);
  }

  for (std::size_t i = 0; i < best.accepted.size(); ++i) {
    result.alignment.set(best.accepted.b[i], best.accepted.a[i]);
  }
  result.density = best.density < 0.0 ? 0.0 : best.density;
  result.iterations = best.iterations;
  return result;
}

}  // namespace anchoralign
