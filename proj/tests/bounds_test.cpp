#include <gtest/gtest.h>

#include <array>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <stdexcept>

#include "anchoralign/anchors.hpp"
#include "anchoralign/bounds.hpp"
#include "anchoralign/models.hpp"
#include "test_support.hpp"

namespace anchoralign {
namespace {

// Kahan-compensated accumulator for the enumeration oracles.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double binom_pmf(unsigned n, unsigned k, double q) {
  return boost::math::binomial_coefficient<double>(n, k) * std::pow(q, k) * std::pow(1 - q, n - k);
}

// E[z^beta] by enumerating losses and gains at u and v.
double beta_oracle(const ProbVector& p, unsigned du, unsigned dv, unsigned n, double z) {
  const double a = p.p10() / p.edge_a(), b = p.p01() / p.nonedge_a();
  const unsigned rest = n - 2;
  CompensatedSum total;
  for (unsigned lu = 0; lu <= du; ++lu) {
    for (unsigned gu = 0; gu <= rest - du; ++gu) {
      for (unsigned lv = 0; lv <= dv; ++lv) {
        for (unsigned gv = 0; gv <= rest - dv; ++gv) {
          const double pr = binom_pmf(du, lu, a) * binom_pmf(rest - du, gu, b) *
                            binom_pmf(dv, lv, a) * binom_pmf(rest - dv, gv, b);
          const int beta = (static_cast<int>(du) - static_cast<int>(lu) + static_cast<int>(gu)) -
                           (static_cast<int>(dv) - static_cast<int>(lv) + static_cast<int>(gv));
          total.add(pr * std::pow(z, beta));
        }
      }
    }
  }
  return total.sum;
}

// E[z^gamma] over all 3^h per-anchor outcomes.
double gamma_oracle(const ProbVector& p, unsigned h, double z) {
  const SignatureDrift q = signature_drift(p);
  const std::array<double, 3> prob{q.q1, 1.0 - q.q0 - q.q1, q.q0};
  std::size_t combos = 1;
  for (unsigned i = 0; i < h; ++i) combos *= 3;
  CompensatedSum total;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t code = c;
    double pr = 1.0;
    int gamma = 0;
    for (unsigned i = 0; i < h; ++i) {
      const std::size_t step = code % 3;
      code /= 3;
      pr *= prob[step];
      gamma += static_cast<int>(step) - 1;
    }
    total.add(pr * std::pow(z, gamma));
  }
  return total.sum;
}

TEST(Rho, ClosedFormExamples) {
  EXPECT_NEAR(rho(ProbVector(0.5, 0, 0, 0.5)), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(rho(ProbVector(0.25, 0.25, 0.25, 0.25)), 0.0, 1e-15);
}

TEST(Rho, MatchesMultiprecisionEvaluation) {
  using Big = boost::multiprecision::cpp_dec_float_50;
  const Big p11("0.01"), p10("0.001"), p01("0.001"), p00("0.988");
  const Big oracle = boost::multiprecision::sqrt(p00 * (p11 + p10) + p11 * (p01 + p00)) -
                     boost::multiprecision::sqrt(p10 * (p01 + p00) + p01 * (p11 + p10));
  EXPECT_NEAR(rho(ProbVector(0.01, 0.001, 0.001, 0.988)), oracle.convert_to<double>(), 1e-14);
  EXPECT_NEAR(oracle.convert_to<double>(), 0.11245359203661858, 1e-15);
}

TEST(Rho, PropertiesOnRandomVectors) {
  Rng rng(14);
  for (int t = 0; t < 500; ++t) {
    std::array<double, 4> w{};
    double s = 0;
    for (double& x : w) s += (x = rng.uniform());
    const ProbVector p(w[0] / s, w[1] / s, w[2] / s, 1.0 - (w[0] + w[1] + w[2]) / s);
    const SignatureDrift q = signature_drift(p);
    EXPECT_LE(q.q0 + q.q1, 1.0 + 1e-12);
    EXPECT_NEAR(rho(p) * rho(p), std::pow(std::sqrt(q.q0) - std::sqrt(q.q1), 2), 1e-12);
    // Complementing both graphs swaps edges with non-edges and leaves rho fixed.
    const ProbVector complemented(p.p00(), p.p01(), p.p10(), p.p11());
    EXPECT_NEAR(rho(p), rho(complemented), 1e-12);
  }
}

TEST(MisalignmentBound, Formula) {
  const ProbVector p(0.3, 0.05, 0.05, 0.6);
  EXPECT_NEAR(misalignment_bound(p, 64), 2 * std::exp(-64 * rho(p) * rho(p)), 1e-15);
}

TEST(HThreshold, Examples) {
  EXPECT_EQ(h_threshold(std::exp(10.0), 1.0, 0.0), 20U);
  const double e = std::pow(2.0, -10);
  const ProbVector p(0.25, e, e, 0.75 - 2 * e);
  EXPECT_EQ(h_threshold(1000, p, 4.0), 53U);  // 52.755...
  const std::size_t base = h_threshold(5000, p, 0.0);
  for (double slack : {0.5, 1.0, 3.0, 10.0}) {
    const std::size_t t = h_threshold(5000, p, slack);
    EXPECT_GE(t, base);
    EXPECT_LE(t, base + static_cast<std::size_t>(std::ceil(slack / (rho(p) * rho(p)))));
  }
  EXPECT_THROW(h_threshold(100, ProbVector(0.25, 0.25, 0.25, 0.25), 0.0), std::invalid_argument);
}

TEST(DefaultAnchorCount, Clamped) {
  const ProbVector noiseless(0.25, 0, 0, 0.75);
  EXPECT_EQ(default_anchor_count(1024, noiseless),
            static_cast<std::size_t>(std::ceil(2 * std::log(1024.0) / std::pow(rho(noiseless), 2))));
  EXPECT_EQ(default_anchor_count(16, ProbVector(0.5, 0, 0, 0.5)), 4U);
  EXPECT_EQ(default_anchor_count(1 << 20, ProbVector(0.5, 0, 0, 0.5)), 56U);
  EXPECT_EQ(default_anchor_count(64, ProbVector(0.02, 0.01, 0.01, 0.96)), 16U);
}

TEST(PhiEps, Examples) {
  const PhiEps zero = phi_eps(ProbVector(0.3, 0, 0, 0.7), 12, 40);
  EXPECT_DOUBLE_EQ(zero.phi, 0.0);
  EXPECT_DOUBLE_EQ(zero.eps, 0.0);
  EXPECT_DOUBLE_EQ(phi_eps(ProbVector(0.3, 0.1, 0.1, 0.5), 0, 0).phi, 0.0);
  const PhiEps pe = phi_eps(ProbVector(0.02, 0.002, 0.002, 0.976), 40, 950);
  EXPECT_NEAR(pe.phi, 5.579103922662205, 1e-12);
  EXPECT_NEAR(pe.eps, 0.09295408068414203, 1e-14);
  EXPECT_THROW(phi_eps(ProbVector(0, 0, 0.5, 0.5), 1, 1), std::invalid_argument);
}

TEST(MinGapForTail, Examples) {
  EXPECT_DOUBLE_EQ(min_gap_for_tail(ProbVector(0.3, 0, 0, 0.7), 10, 10, 0, 1.0), 4.0);
  const ProbVector p(0.02, 0.002, 0.002, 0.976);
  const double g0 = min_gap_for_tail(p, 40, 950, 0, std::log(100.0));
  const double g2 = min_gap_for_tail(p, 40, 950, 2, std::log(100.0));
  EXPECT_NEAR(g2 - g0, 2 / (1 - phi_eps(p, 40, 950).eps), 1e-12);
  EXPECT_NEAR(g2, 24.557958341166275, 1e-11);
  EXPECT_THROW(min_gap_for_tail(ProbVector(0.1, 0.4, 0.4, 0.1), 1, 1, 0, 1), std::invalid_argument);
  EXPECT_THROW(min_gap_for_tail(p, 1, 1, 0, 0.0), std::invalid_argument);
}

TEST(AnchorFailureBound, LimitAndViolations) {
  const ProbVector p(0.25, 0.001, 0.001, 0.748);
  std::vector<std::size_t> spread;
  for (std::size_t i = 0; i < 200; ++i) spread.push_back(100000 - 1000 * i);
  const AnchorFailureReport big = anchor_failure_bound(1000, p, 4, 60.0, 0, spread);
  EXPECT_TRUE(big.condition_holds());
  EXPECT_LT(big.failure_bound, 1e-20);

  std::vector<std::size_t> flat = spread;
  flat[1] = flat[0];
  const AnchorFailureReport bad = anchor_failure_bound(1000, p, 4, 3.0, 0, flat);
  ASSERT_FALSE(bad.violated.empty());
  EXPECT_EQ(bad.violated.front(), 1U);

  const double x = std::exp(-3.0);
  EXPECT_NEAR(bad.failure_bound, 2 * 4 * x / (1 - x), 1e-12);
  EXPECT_THROW(anchor_failure_bound(10, p, 9, 0.01, 0, spread), std::invalid_argument);
}

TEST(AnchorFailureBound, GapRecount) {
  const Graph g = sample_correlated_er(4096, ProbVector(0.25, 0, 0, 0.75), 13).ga;
  std::vector<std::size_t> d = testing::brute_degrees(g);
  std::sort(d.rbegin(), d.rend());
  const double eta = std::log(16.0) + 4.0;
  const ProbVector p = ProbVector::from_noise_exponent(4096, 0.25, 1.1);
  const AnchorFailureReport r = anchor_failure_bound(4096, p, 16, eta, 2, d);
  EXPECT_EQ(r.s, static_cast<std::size_t>(std::ceil(16 + std::log(4096.0 / 16) / eta + 1)));
  const double need = min_gap_for_tail(p, static_cast<double>(d[0]), 4096, 2, eta);
  EXPECT_DOUBLE_EQ(r.required_gap, need);
  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i < r.s; ++i) {
    if (static_cast<double>(d[i] - d[i + 1]) < need) expected.push_back(i + 1);
  }
  EXPECT_EQ(r.violated, expected);
}

TEST(MaxDegreeBound, ArithmeticAndMonteCarlo) {
  EXPECT_DOUBLE_EQ(max_degree_bound(1000, 0.0, 0.3), 0.0);
  EXPECT_NEAR(max_degree_bound(1000, 0.1, 0.2), 120.0, 1e-12);
  // The maximum of ER(2000, 0.05) sits near np + 4 sd = 1.38 np, inside 1.5 np.
  int exceed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = sample_correlated_er(2000, ProbVector(0.05, 0, 0, 0.95), seed).ga;
    if (static_cast<double>(g.max_degree()) > max_degree_bound(2000, 0.05, 0.5)) ++exceed;
  }
  EXPECT_LE(exceed, 5);
}

TEST(BollobasGap, Examples) {
  EXPECT_DOUBLE_EQ(bollobas_gap(4096, 0.25, 16, 0.0), 0.0);
  EXPECT_NEAR(bollobas_gap(4096, 0.25, 32, 0.1) * 4, bollobas_gap(4096, 0.25, 16, 0.1), 1e-15);
  EXPECT_NEAR(bollobas_gap(4096, 0.25, 16, 0.1), 0.003753507527457656, 1e-15);
  EXPECT_THROW(bollobas_gap(4096, 1.0, 16, 0.1), std::invalid_argument);
}

TEST(TheoremRegion, Extremes) {
  const TheoremRegionReport full = theorem_region_check(std::size_t{1} << 60, ProbVector(1, 0, 0, 0), 8);
  EXPECT_TRUE(full.edge_density.pass);
  EXPECT_TRUE(full.noise_level.pass);
  EXPECT_TRUE(full.anchor_condition.pass);
  EXPECT_TRUE(full.all_pass());
  EXPECT_FALSE(theorem_region_check(1000, ProbVector(0, 0.1, 0.1, 0.8)).edge_density.pass);
}

TEST(TheoremRegion, TableTwoCellRecorded) {
  // Table 2 reports 99.98% at log2 n = 14, noise exponent 0.9; the finite-n
  // surrogates with unit constants do not certify that cell.
  const double n = 16384;
  const ProbVector p = ProbVector::from_noise_exponent(n, 0.25, 0.9);
  const TheoremRegionReport r = theorem_region_check(16384, p);
  const double ln_n = std::log(n);
  EXPECT_NEAR(r.edge_density.limit, std::pow(ln_n, 1.4) / std::pow(n, 0.2), 1e-12);
  EXPECT_FALSE(r.edge_density.pass);
  EXPECT_NEAR(r.noise_level.value, 2 * std::pow(n, -0.9), 1e-15);
  EXPECT_FALSE(r.noise_level.pass);
  EXPECT_EQ(r.h, default_anchor_count(16384, p));
  EXPECT_TRUE(std::isfinite(r.anchor_condition.value));
  EXPECT_FALSE(r.all_pass());
}

TEST(Fig1Region, Examples) {
  EXPECT_EQ(fig1_region({-2.5, -0.1}), Region::A);
  EXPECT_EQ(fig1_region({-0.5, -0.9}), Region::D);
  EXPECT_EQ(fig1_region({-0.1, -0.9}), Region::outside);
  EXPECT_EQ(fig1_region({0.0, -2.0}), Region::outside);
  EXPECT_EQ(fig1_region({-1.95, -0.05}), Region::B);
  EXPECT_EQ(fig1_region({-1.0, -0.1}), Region::C);
  EXPECT_EQ(fig1_region({0.5, -0.1}), Region::outside);
  EXPECT_EQ(region_name(Region::C), "C");
}

TEST(Fig1Region, NestingOnGrid) {
  for (double x = -3.0; x <= 0.0; x += 0.01) {
    for (double y = -1.5; y <= 0.0; y += 0.01) {
      const RegionPoint pt{x, y};
      if (in_region_a(pt)) EXPECT_TRUE(in_region_c(pt)) << x << "," << y;
      if (in_region_b(pt) && pt.y <= 0) EXPECT_TRUE(in_region_c(pt)) << x << "," << y;
      if (in_region_c(pt)) EXPECT_TRUE(in_region_d(pt)) << x << "," << y;
    }
  }
}

TEST(Fig1Region, PointFromProbabilities) {
  const double n = 1024;
  const RegionPoint pt = RegionPoint::from(n, ProbVector::from_noise_exponent(n, 0.25, 1.1));
  EXPECT_NEAR(pt.x, -1.1, 1e-12);
  EXPECT_NEAR(pt.y, -0.2, 1e-12);
}

TEST(Pgf, NormalisationAndNoiselessCollapse) {
  const ProbVector p(0.3, 0.1, 0.1, 0.5);
  EXPECT_NEAR(pgf_beta(p, 3, 2, 8, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(pgf_gamma(p, 7, 1.0), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(pgf_gamma(p, 0, 0.4), 1.0);
  const ProbVector clean(0.3, 0, 0, 0.7);
  EXPECT_NEAR(pgf_beta(clean, 5, 2, 10, 0.6), std::pow(0.6, 3), 1e-15);
  EXPECT_THROW(pgf_beta(p, 1, 1, 8, 0.0), std::invalid_argument);
  EXPECT_THROW(pgf_gamma(p, 1, -1.0), std::invalid_argument);
}

TEST(Pgf, GammaMatchesTrinomialEnumeration) {
  for (const ProbVector& p : {ProbVector(0.3, 0.1, 0.1, 0.5), ProbVector(0.2, 0.02, 0.05, 0.73)}) {
    for (unsigned h = 0; h <= 6; ++h) {
      for (double z : {0.2, 0.5, 0.8, 1.0}) {
        EXPECT_NEAR(pgf_gamma(p, h, z), gamma_oracle(p, h, z), 1e-9) << h << " " << z;
      }
    }
  }
}

TEST(Pgf, BetaMatchesBinomialEnumeration) {
  const ProbVector p(0.2, 0.05, 0.03, 0.72);
  for (unsigned du = 0; du <= 6; ++du) {
    for (unsigned dv = 0; dv <= 6; ++dv) {
      for (double z : {0.3, 0.7, 1.0}) {
        EXPECT_NEAR(pgf_beta(p, du, dv, 8, z), beta_oracle(p, du, dv, 8, z), 1e-9);
      }
    }
  }
}

TEST(Pgf, ChernoffBoundCoversMonteCarlo) {
  // gamma = d(sig_a(v), sig_b(u)) - d(sig_a(u), sig_b(u)) for two left vertices.
  const ProbVector p(0.3, 0.05, 0.05, 0.6);
  const std::size_t h = 24;
  const int trials = 20000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    const auto [a, b] = sample_correlated_bigraph(2, h, p, 1000 + t);
    int gamma = 0;
    for (std::size_t j = 0; j < h; ++j) {
      gamma += (a.has_edge(1, j) != b.has_edge(0, j)) - (a.has_edge(0, j) != b.has_edge(0, j));
    }
    hits += gamma <= 0;
  }
  double best = 1.0;
  for (double z = 0.01; z <= 1.0; z += 0.01) best = std::min(best, pgf_gamma(p, h, z));
  const double freq = static_cast<double>(hits) / trials;
  EXPECT_GE(best, freq - 3 * std::sqrt(freq * (1 - freq) / trials));
}

}  // namespace
}  // namespace anchoralign
