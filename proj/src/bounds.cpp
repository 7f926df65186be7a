#include "anchoralign/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace anchoralign {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

SignatureDrift signature_drift(const ProbVector& p) {
  return {p.p00() * p.edge_a() + p.p11() * p.nonedge_a(),
          p.p10() * p.nonedge_a() + p.p01() * p.edge_a()};
}

double rho(const ProbVector& p) {
  const SignatureDrift q = signature_drift(p);
  return std::sqrt(q.q0) - std::sqrt(q.q1);
}

double misalignment_bound(const ProbVector& p, std::size_t h) {
  const double r = rho(p);
  return 2.0 * std::exp(-static_cast<double>(h) * r * r);
}

std::size_t h_threshold(double n, double rho_value, double slack) {
  require(rho_value > 0.0, "h_threshold needs rho > 0, got " + std::to_string(rho_value));
  require(n >= 1.0, "h_threshold needs n >= 1");
  return static_cast<std::size_t>(
      std::ceil((2.0 * std::log(n) + slack) / (rho_value * rho_value)));
}

std::size_t h_threshold(double n, const ProbVector& p, double slack) {
  return h_threshold(n, rho(p), slack);
}

std::size_t default_anchor_count(std::size_t n, const ProbVector& p) {
  const std::size_t raw = h_threshold(static_cast<double>(n), p, 0.0);
  const std::size_t hi = std::max<std::size_t>(1, n / 4);
  const std::size_t lo = std::min<std::size_t>(8, hi);
  return std::clamp(raw, lo, hi);
}

PhiEps phi_eps(const ProbVector& p, double d_u, double dbar_v) {
  require(p.edge_a() > 0.0, "phi_eps needs p1* > 0");
  require(p.nonedge_a() > 0.0, "phi_eps needs p0* > 0");
  const double loss = p.p10() / p.edge_a();
  const double gain = p.p01() / p.nonedge_a();
  return {d_u * loss + dbar_v * gain, gain + loss};
}

double min_gap_for_tail(const ProbVector& p, double d_u, double dbar_v, double k, double eta) {
  require(eta > 0.0, "eta must be positive");
  const PhiEps pe = phi_eps(p, d_u, dbar_v);
  require(pe.eps < 1.0, "min_gap_for_tail needs eps < 1, got " + std::to_string(pe.eps));
  return (k + 4.0 * std::max(eta, std::sqrt(pe.phi * eta))) / (1.0 - pe.eps);
}

AnchorFailureReport anchor_failure_bound(std::size_t n, const ProbVector& p, std::size_t h,
                                         double eta, double k,
                                         std::span<const std::size_t> degrees) {
  require(eta > 0.0, "eta must be positive");
  require(h >= 1 && h <= n, "h out of range");
  AnchorFailureReport report;
  const double nd = static_cast<double>(n);
  const double hd = static_cast<double>(h);
  report.s = static_cast<std::size_t>(std::ceil(hd + std::log(nd / hd) / eta + 1.0));
  require(report.s <= n, "s = " + std::to_string(report.s) + " exceeds n = " + std::to_string(n));
  require(degrees.size() >= report.s + 1,
          "degree sequence needs at least s + 1 = " + std::to_string(report.s + 1) + " entries");
  // Largest degree stands in for d_u and n for the complementary degree.
  const double max_degree = static_cast<double>(degrees.front());
  report.required_gap = min_gap_for_tail(p, max_degree, nd, k, eta);
  for (std::size_t i = 0; i < report.s; ++i) {
    require(degrees[i] >= degrees[i + 1], "degree sequence must be non-increasing");
    const double gap = static_cast<double>(degrees[i] - degrees[i + 1]);
    if (gap < report.required_gap) report.violated.push_back(i + 1);
  }
  const double x = std::exp(-eta);
  report.failure_bound = 1.0 - (1.0 - (2.0 * hd + 1.0) * x) / (1.0 - x);
  return report;
}

double max_degree_bound(double n, double p_edge, double eps) { return p_edge * n * (1.0 + eps); }

double bollobas_gap(double n, double p_edge, double h, double c) {
  require(p_edge > 0.0 && p_edge < 1.0, "bollobas_gap needs 0 < p < 1");
  require(n > 1.0, "bollobas_gap needs n > 1");
  require(h >= 1.0 && h < n, "bollobas_gap needs 1 <= h < n");
  return c / (h * h) * std::sqrt(n * p_edge * (1.0 - p_edge) / std::log(n));
}

TheoremRegionReport theorem_region_check(std::size_t n, const ProbVector& p, std::size_t h,
                                         double c1, double c2) {
  const double nd = static_cast<double>(n);
  const double ln_n = std::log(nd);
  const double noise = p.p01() + p.p10();
  TheoremRegionReport report;

  const double density_floor = c1 * std::pow(ln_n, 1.4) / std::pow(nd, 0.2);
  report.edge_density = {p.p11(), density_floor, p.p11() >= density_floor};
  const double noise_cap = c2 * std::pow(p.p11(), 5.0) / std::pow(ln_n, 6.0);
  report.noise_level = {noise, noise_cap, noise <= noise_cap};

  if (h == 0) {
    if (rho(p) > 0.0 && n >= 4) {
      h = default_anchor_count(n, p);
    } else if (p.p11() > 0.0) {
      h = static_cast<std::size_t>(std::ceil(ln_n / p.p11())) + 1;
    } else {
      h = 1;
    }
  }
  report.h = h;
  const double hd = static_cast<double>(h);
  const double ln_h = std::log(hd);
  const double lhs = std::max(ln_h * ln_h, nd * noise * ln_h);
  const double rhs = p.edge_a() > 0.0
                         ? nd * p.p11() / (std::pow(hd, 4.0) * ln_n) * (p.p11() / p.edge_a())
                         : 0.0;
  const double ratio = rhs > 0.0 ? lhs / rhs : INFINITY;
  report.anchor_condition = {ratio, 1.0, ratio <= 1.0};
  return report;
}

RegionPoint RegionPoint::from(double n, const ProbVector& p) {
  const double ln_n = std::log(n);
  return {std::log(p.p01()) / ln_n, std::log(p.p11()) / ln_n};
}

std::string_view region_name(Region r) {
  switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::D: return "D";
    case Region::outside: return "outside";
  }
  return "outside";
}

bool in_region_a(RegionPoint pt) { return pt.x <= -2.0 && pt.y >= -0.2; }

bool in_region_b(RegionPoint pt) {
  return pt.x >= -2.0 && (9.0 / 7.0) * pt.x <= pt.y - 17.0 / 7.0;
}

bool in_region_c(RegionPoint pt) { return pt.y >= -0.2 && pt.x <= 5.0 * pt.y; }

bool in_region_d(RegionPoint pt) { return pt.y >= -1.0 && 2.0 * pt.x <= pt.y; }

Region fig1_region(RegionPoint pt) {
  if (!(pt.x <= 0.0 && pt.y <= 0.0)) return Region::outside;
  if (in_region_a(pt)) return Region::A;
  if (in_region_b(pt)) return Region::B;
  if (in_region_c(pt)) return Region::C;
  if (in_region_d(pt)) return Region::D;
  return Region::outside;
}

double pgf_beta(const ProbVector& p, std::size_t d_u, std::size_t d_v, std::size_t n, double z) {
  require(z > 0.0, "pgf_beta needs z > 0");
  require(n >= 2, "pgf_beta needs n >= 2");
  require(d_u <= n - 2 && d_v <= n - 2, "degrees must not exceed n - 2");
  require(p.edge_a() > 0.0 && p.nonedge_a() > 0.0, "pgf_beta needs positive marginals");
  const double loss = p.p10() / p.edge_a();
  const double gain = p.p01() / p.nonedge_a();
  const double du = static_cast<double>(d_u);
  const double dv = static_cast<double>(d_v);
  const double rest = static_cast<double>(n - 2);
  const double alpha = du - dv;
  return std::pow(z, alpha) * std::pow(1.0 + loss * (1.0 / z - 1.0), du) *
         std::pow(1.0 + loss * (z - 1.0), dv) * std::pow(1.0 + gain * (z - 1.0), rest - du) *
         std::pow(1.0 + gain * (1.0 / z - 1.0), rest - dv);
}

double pgf_gamma(const ProbVector& p, std::size_t h, double z) {
  require(z > 0.0, "pgf_gamma needs z > 0");
  const SignatureDrift q = signature_drift(p);
  const double bracket = 1.0 + q.q0 * (z - 1.0) + q.q1 * (1.0 / z - 1.0);
  require(bracket > 0.0, "pgf_gamma bracket is not positive");
  return std::pow(bracket, static_cast<double>(h));
}

}  // namespace anchoralign
