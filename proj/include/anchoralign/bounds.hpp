#pragma once

// Closed-form error and threshold calculators for the two-phase aligner,
// the achievability-region classifier and the degree-gap generating
// functions. Natural logarithms throughout.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "anchoralign/models.hpp"

namespace anchoralign {

/// Per-anchor probabilities that a wrong pair's signature distance moves up
/// (q0) or down (q1) relative to the correct pair.
struct SignatureDrift {
  double q0;
  double q1;
};
SignatureDrift signature_drift(const ProbVector& p);

/// sqrt(q0) - sqrt(q1); negative for anti-correlated p.
double rho(const ProbVector& p);

/// Bound on the probability that a vertex pair's signatures are misaligned:
/// 2 exp(-h rho^2).
double misalignment_bound(const ProbVector& p, std::size_t h);

/// ceil((2 ln n + slack) / rho^2). Throws std::invalid_argument if rho <= 0.
std::size_t h_threshold(double n, const ProbVector& p, double slack);
std::size_t h_threshold(double n, double rho_value, double slack);

/// ceil(2 ln n / rho^2) clamped to [8, n / 4] (to [1, n] for tiny n).
/// Throws std::invalid_argument if rho <= 0.
std::size_t default_anchor_count(std::size_t n, const ProbVector& p);

struct PhiEps {
  double phi;
  double eps;
};

/// phi = d_u p10/p1* + dbar_v p01/p0*, eps = p01/p0* + p10/p1*. Throws
/// std::invalid_argument if p1* or p0* is zero.
PhiEps phi_eps(const ProbVector& p, double d_u, double dbar_v);

/// (1 - eps)^-1 (k + 4 max(eta, sqrt(phi eta))): a degree gap at least this
/// large keeps the two vertices ordered with gap > k in G_b except with
/// probability e^-eta. Throws std::invalid_argument if eps >= 1 or eta <= 0.
double min_gap_for_tail(const ProbVector& p, double d_u, double dbar_v, double k, double eta);

struct AnchorFailureReport {
  /// Number of leading gaps that must satisfy the condition.
  std::size_t s = 0;
  /// The per-gap requirement, with phi built from the maximum degree and n.
  double required_gap = 0.0;
  /// 1-based indices i <= s where delta_i - delta_{i+1} falls short.
  std::vector<std::size_t> violated;
  /// Upper bound on P[anchor lists differ or a top-h gap in G_b is <= k],
  /// meaningful only when `violated` is empty.
  double failure_bound = 1.0;
  bool condition_holds() const { return violated.empty(); }
};

/// `degrees` is G_a's degree sequence in non-increasing order and must have at
/// least s + 1 entries. Throws std::invalid_argument when s > n, eta <= 0 or
/// the sequence is too short.
AnchorFailureReport anchor_failure_bound(std::size_t n, const ProbVector& p, std::size_t h,
                                         double eta, double k,
                                         std::span<const std::size_t> degrees);

/// p_edge n (1 + eps): the high-probability cap on the maximum degree.
double max_degree_bound(double n, double p_edge, double eps);

/// (c / h^2) sqrt(n p (1 - p) / ln n). Throws std::invalid_argument unless
/// 0 < p_edge < 1, 1 <= h < n and n > 1.
double bollobas_gap(double n, double p_edge, double h, double c);

struct RegionCheck {
  double value;
  double limit;
  bool pass;
};

struct TheoremRegionReport {
  /// p11 >= c1 ln^1.4 n / n^0.2.
  RegionCheck edge_density;
  /// p01 + p10 <= c2 p11^5 / ln^6 n.
  RegionCheck noise_level;
  /// max{(ln h)^2, n (p01+p10) ln h} against (n p11 / (h^4 ln n)) (p11 / p1*),
  /// reported as the ratio of the two; passes when the ratio is <= 1.
  RegionCheck anchor_condition;
  std::size_t h = 0;
  bool all_pass() const { return edge_density.pass && noise_level.pass && anchor_condition.pass; }
};

/// Finite-n surrogates of the asymptotic recovery conditions. `h == 0` uses
/// the default anchor count when rho > 0, else ceil(ln n / p11) + 1.
TheoremRegionReport theorem_region_check(std::size_t n, const ProbVector& p, std::size_t h = 0,
                                         double c1 = 1.0, double c2 = 1.0);

/// Point of the symmetric-noise plane: x = log p01 / log n, y = log p11 / log n.
struct RegionPoint {
  double x;
  double y;
  static RegionPoint from(double n, const ProbVector& p);
};

enum class Region { A, B, C, D, outside };

std::string_view region_name(Region r);

/// Innermost of the nested achievability regions containing the point.
Region fig1_region(RegionPoint point);
bool in_region_a(RegionPoint pt);
bool in_region_b(RegionPoint pt);
bool in_region_c(RegionPoint pt);
bool in_region_d(RegionPoint pt);

/// Generating function E[z^beta] of the G_b degree gap beta between u and v
/// whose G_a degrees, excluding their mutual pair, are d_u and d_v. Throws
/// std::invalid_argument if z <= 0, n < 2, a degree exceeds n - 2 or a
/// marginal is zero.
double pgf_beta(const ProbVector& p, std::size_t d_u, std::size_t d_v, std::size_t n, double z);

/// [1 + q0 (z - 1) + q1 (1/z - 1)]^h. Throws std::invalid_argument if z <= 0
/// or the bracket is not positive.
double pgf_gamma(const ProbVector& p, std::size_t h, double z);

}  // namespace anchoralign
