#include "anchoralign/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "anchoralign/rng.hpp"

namespace anchoralign {

namespace {

// Below this per-pair hit probability, pair visits use geometric skipping.
constexpr double kSparseThreshold = 0.05;

void check_probability(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0,1], got " + std::to_string(x));
  }
}

// Visits pairs u < v of an n-vertex graph in lexicographic order, calling
// fn(u, v) on each pair selected independently with probability q.
template <class Fn>
void visit_random_pairs(std::size_t n, double q, Rng& rng, Fn&& fn) {
  if (n < 2 || q <= 0.0) return;
  if (q >= kSparseThreshold) {
    for (Vertex u = 0; u + 1 < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (rng.uniform() < q) fn(u, v);
      }
    }
    return;
  }
  std::size_t u = 0;
  std::size_t v = 1;
  while (true) {
    std::uint64_t skip = rng.geometric_skip(q);
    while (skip > 0) {
      const std::size_t remaining = n - v;
      if (skip < remaining) {
        v += skip;
        skip = 0;
      } else {
        skip -= remaining;
        if (++u >= n - 1) return;
        v = u + 1;
      }
    }
    fn(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (++v >= n) {
      if (++u >= n - 1) return;
      v = u + 1;
    }
  }
}

GraphBuilder sample_er(std::size_t n, double r, Rng& rng) {
  GraphBuilder g(n);
  visit_random_pairs(n, r, rng, [&](Vertex u, Vertex v) { g.add_edge(u, v); });
  return g;
}

enum class PairClass { both, only_a, only_b, neither };

struct ClassThresholds {
  double c11, c10, c01;
  PairClass classify(double x) const {
    if (x < c11) return PairClass::both;
    if (x < c10) return PairClass::only_a;
    if (x < c01) return PairClass::only_b;
    return PairClass::neither;
  }
};

ClassThresholds thresholds(const ProbVector& p) {
  return {p.p11(), p.p11() + p.p10(), p.p11() + p.p10() + p.p01()};
}

}  // namespace

ProbVector::ProbVector(double p11, double p10, double p01, double p00)
    : p11_(p11), p10_(p10), p01_(p01), p00_(p00) {
  check_probability(p11, "p11");
  check_probability(p10, "p10");
  check_probability(p01, "p01");
  check_probability(p00, "p00");
  const double total = p11 + p10 + p01 + p00;
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("probabilities must sum to 1, got " + std::to_string(total));
  }
}

ProbVector ProbVector::from_noise_exponent(double n, double p11, double exponent) {
  const double noise = std::pow(n, -exponent);
  return ProbVector(p11, noise, noise, 1.0 - p11 - 2.0 * noise);
}

ProbVector ProbVector::from_subsampling(double r, double sa, double sb) {
  check_probability(r, "r");
  check_probability(sa, "sa");
  check_probability(sb, "sb");
  const double p11 = r * sa * sb;
  const double p10 = r * sa * (1.0 - sb);
  const double p01 = r * (1.0 - sa) * sb;
  return ProbVector(p11, p10, p01, 1.0 - p11 - p10 - p01);
}

ProbVector ProbVector::from_perturbation(double r, double delta) {
  check_probability(r, "r");
  check_probability(delta, "delta");
  const double p11 = r * (1.0 - 2.0 * delta) + delta * delta;
  const double p10 = delta - delta * delta;
  return ProbVector(p11, p10, p10, 1.0 - p11 - 2.0 * p10);
}

Alignment Alignment::identity(std::size_t n) {
  std::vector<Vertex> map(n);
  std::iota(map.begin(), map.end(), Vertex{0});
  return Alignment(std::move(map));
}

std::size_t Alignment::matched_count() const {
  std::size_t count = 0;
  for (Vertex a : map_) count += a != kUnmatched;
  return count;
}

bool Alignment::is_injective() const {
  std::vector<Vertex> images;
  images.reserve(map_.size());
  for (Vertex a : map_) {
    if (a != kUnmatched) images.push_back(a);
  }
  std::sort(images.begin(), images.end());
  return std::adjacent_find(images.begin(), images.end()) == images.end();
}

std::vector<std::pair<Vertex, Vertex>> Alignment::pairs() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex b = 0; b < map_.size(); ++b) {
    if (map_[b] != kUnmatched) out.emplace_back(b, map_[b]);
  }
  return out;
}

std::size_t Alignment::agreements(const Alignment& truth) const {
  if (truth.size() != size()) throw std::invalid_argument("alignment size mismatch");
  std::size_t count = 0;
  for (std::size_t b = 0; b < map_.size(); ++b) {
    count += map_[b] != kUnmatched && map_[b] == truth.map_[b];
  }
  return count;
}

double Alignment::accuracy(const Alignment& truth) const {
  if (truth.size() == 0) return 0.0;
  return static_cast<double>(agreements(truth)) / static_cast<double>(truth.size());
}

CorrelatedPair sample_correlated_er(std::size_t n, const ProbVector& p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  Rng rng(seed);
  GraphBuilder ga(n);
  GraphBuilder gb(n);
  const ClassThresholds cuts = thresholds(p);
  auto place = [&](Vertex u, Vertex v, PairClass c) {
    if (c == PairClass::both || c == PairClass::only_a) ga.add_edge(u, v);
    if (c == PairClass::both || c == PairClass::only_b) gb.add_edge(u, v);
  };
  const double hit = cuts.c01;
  if (hit >= kSparseThreshold) {
    for (Vertex u = 0; u + 1 < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) place(u, v, cuts.classify(rng.uniform()));
    }
  } else {
    visit_random_pairs(n, hit, rng, [&](Vertex u, Vertex v) {
      place(u, v, cuts.classify(rng.uniform() * hit));
    });
  }
  return {std::move(ga).build(), std::move(gb).build(), Alignment::identity(n)};
}

CorrelatedPair sample_subsampling(std::size_t n, double r, double sa, double sb,
                                  std::uint64_t seed) {
  check_probability(r, "r");
  check_probability(sa, "sa");
  check_probability(sb, "sb");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  Rng rng(seed);
  const Graph parent = sample_er(n, r, rng).build();
  GraphBuilder ga(n);
  GraphBuilder gb(n);
  for (auto [u, v] : parent.edges()) {
    if (rng.bernoulli(sa)) ga.add_edge(u, v);
    if (rng.bernoulli(sb)) gb.add_edge(u, v);
  }
  return {std::move(ga).build(), std::move(gb).build(), Alignment::identity(n)};
}

CorrelatedPair sample_perturbation(std::size_t n, double r, double delta, std::uint64_t seed) {
  check_probability(r, "r");
  check_probability(delta, "delta");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  Rng rng(seed);
  const GraphBuilder base = sample_er(n, r, rng);
  GraphBuilder ga = base;
  GraphBuilder gb = base;
  visit_random_pairs(n, delta, rng, [&](Vertex u, Vertex v) { ga.toggle_edge(u, v); });
  visit_random_pairs(n, delta, rng, [&](Vertex u, Vertex v) { gb.toggle_edge(u, v); });
  return {std::move(ga).build(), std::move(gb).build(), Alignment::identity(n)};
}

std::pair<BiGraph, BiGraph> sample_correlated_bigraph(std::size_t left, std::size_t right,
                                                      const ProbVector& p, std::uint64_t seed) {
  if (left < 1 || right < 1) throw std::invalid_argument("bipartite sides must be non-empty");
  Rng rng(seed);
  BiGraph ba(left, right);
  BiGraph bb(left, right);
  const ClassThresholds cuts = thresholds(p);
  for (std::size_t u = 0; u < left; ++u) {
    for (std::size_t j = 0; j < right; ++j) {
      const PairClass c = cuts.classify(rng.uniform());
      if (c == PairClass::both || c == PairClass::only_a) ba.add_edge(u, j);
      if (c == PairClass::both || c == PairClass::only_b) bb.add_edge(u, j);
    }
  }
  return {std::move(ba), std::move(bb)};
}

CorrelatedPair scramble(const CorrelatedPair& pair, std::uint64_t seed) {
  const std::size_t n = pair.gb.size();
  Rng rng(seed);
  // Fisher-Yates; relabel[old] = new.
  std::vector<Vertex> relabel(n);
  std::iota(relabel.begin(), relabel.end(), Vertex{0});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(relabel[i - 1], relabel[j]);
  }
  GraphBuilder gb(n);
  for (auto [u, v] : pair.gb.edges()) gb.add_edge(relabel[u], relabel[v]);
  Alignment truth(n);
  for (Vertex old = 0; old < n; ++old) truth.set(relabel[old], pair.truth[old]);
  return {pair.ga, std::move(gb).build(), std::move(truth)};
}

CorrelatedPair subsample_graph(const Graph& g, double s, std::uint64_t seed) {
  check_probability(s, "s");
  Rng rng(seed);
  GraphBuilder ga(g.size());
  GraphBuilder gb(g.size());
  for (auto [u, v] : g.edges()) {
    if (rng.bernoulli(s)) ga.add_edge(u, v);
    if (rng.bernoulli(s)) gb.add_edge(u, v);
  }
  return {std::move(ga).build(), std::move(gb).build(), Alignment::identity(g.size())};
}

}  // namespace anchoralign
