#include <gtest/gtest.h>

#include <cmath>

#include "jsearch/coupling.hpp"
#include "jsearch/spectral.hpp"

using namespace jsearch;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Measured once: |gamma* - eps^2/3 - 7 eps^4/6| / eps^6 -> 4.8334 as eps -> 0
// (4.8436 at eps = 0.1). Frozen with 2x slack.
constexpr double kSeriesConstantBound = 2.0 * 4.8436;
}  // namespace

TEST(ScaledParams, Domain) {
  EXPECT_THROW(ScaledParams::from_eps(0.0, 3), DomainError);
  EXPECT_THROW(ScaledParams::from_eps(-0.1, 3), DomainError);
  EXPECT_THROW(ScaledParams::from_eps(1.0 / std::sqrt(5.0) + 1e-9, 3), DomainError);
  EXPECT_NO_THROW(ScaledParams::from_eps(0.44, 3));
  EXPECT_THROW(ScaledParams::from_eps(0.1, 0), DomainError);
}

TEST(REll, Examples) {
  const auto sp0 = ScaledParams::from_eps(1e-300, 4);
  for (int l = 0; l <= 4; ++l) EXPECT_DOUBLE_EQ(r_ell(sp0, l), 4 - l);
  for (double e : {0.05, 0.3, 0.7}) {
    const auto sp = ScaledParams::from_eps(e, 1);
    EXPECT_NEAR(r_ell(sp, 0) - r_ell(sp, 1), 1.0, 1e-15);
  }
  const auto sp = ScaledParams::from_graph(GraphParams::make(100, 3));
  EXPECT_NEAR(r_ell(sp, 0), 2.91, 1e-15);
  EXPECT_THROW(r_ell(sp, 4), DomainError);
}

TEST(REll, ConsistentWithEigenvalues) {
  for (std::int64_t n = 2; n <= 400; n += 7) {
    for (int k = 1; k <= 8 && 2 * k <= n; ++k) {
      const auto p = GraphParams::make(n, k);
      const auto sp = ScaledParams::from_graph(p);
      for (int l = 0; l <= k; ++l) {
        ASSERT_NEAR(r_ell(sp, l), eigenvalue(p, l) / static_cast<double>(n), 1e-14);
      }
    }
  }
}

TEST(PEllScaled, Examples) {
  for (double e : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(p_ell_scaled(ScaledParams::from_eps(e, 1), 1), std::sqrt(1 - e * e), 1e-15);
  }
  EXPECT_NEAR(p_ell_scaled(ScaledParams::from_eps(1e-8, 5), 5), 1.0, 1e-14);
  const auto p = GraphParams::make(6, 3);
  for (int l = 0; l <= 3; ++l) {
    EXPECT_LE(rel(p_ell_scaled(ScaledParams::from_graph(p), l), overlap(p, l)), 1e-13);
  }
}

TEST(PEllScaled, MatchesSpectralOverlapEverywhere) {
  for (std::int64_t n = 2; n <= 400; ++n) {
    for (int k = 1; k <= 8 && 2 * k <= n; ++k) {
      const auto p = GraphParams::make(n, k);
      const auto sp = ScaledParams::from_graph(p);
      for (int l = 0; l <= k; ++l) {
        ASSERT_LE(rel(p_ell_scaled(sp, l), overlap(p, l)), 1e-13) << n << " " << k << " " << l;
      }
    }
  }
}

TEST(PEllScaled, LeadingOrder) {
  // p_l / (sqrt(k!/l!) eps^(k-l)) -> 1 with an O(eps^2) correction.
  const int k = 4;
  for (int l = 0; l <= k; ++l) {
    double fact = 1.0;
    for (int j = l + 1; j <= k; ++j) fact *= j;
    double prev = INFINITY;
    for (double e = 0.1; e > 1e-3; e /= 2) {
      const double ratio = p_ell_scaled(ScaledParams::from_eps(e, k), l) /
                           (std::sqrt(fact) * std::pow(e, k - l));
      const double dev = std::abs(ratio - 1.0);
      EXPECT_LT(dev, prev);
      EXPECT_LT(dev, 10.0 * e * e);
      prev = dev;
    }
  }
}

TEST(EtaStar, Examples) {
  for (double e : {0.1, 0.4, 0.9}) {
    EXPECT_LE(rel(eta_star(ScaledParams::from_eps(e, 1)), 1.0 / (1.0 - e * e)), 1e-15);
  }
  for (int k = 1; k <= 6; ++k) EXPECT_NEAR(eta_star(ScaledParams::from_eps(1e-9, k)), k, 1e-12);
  const auto sp = ScaledParams::from_eps(0.1, 3);
  EXPECT_LE(rel(eta_star(sp), 0.01 / gamma_closed_form(sp)), 1e-13);
}

TEST(EtaStar, ApproachesKQuadratically) {
  for (int k = 1; k <= 5; ++k) {
    double prev_c = 0.0;
    for (double e = 0.1; e > 1e-3; e /= 2) {
      const double c = std::abs(eta_star(ScaledParams::from_eps(e, k)) - k) / (e * e);
      EXPECT_LT(c, 40.0) << "k=" << k;
      if (prev_c > 0.0) {
        EXPECT_NEAR(c / prev_c, 1.0, 0.1);
      }
      prev_c = c;
    }
  }
}

TEST(GammaStar, KOneClosedForm) {
  for (std::int64_t n : {2, 3, 10, 100, 12345, 1000000}) {
    const double nd = static_cast<double>(n);
    EXPECT_LE(rel(gamma_star(GraphParams::make(n, 1)), (nd - 1) / (nd * nd)), 1e-15);
  }
}

TEST(GammaStar, KThreeAtN100MatchesClosedForm) {
  const double g = gamma_star(GraphParams::make(100, 3));
  const double x = 0.01;
  const double expect = x * (1 - 3 * x) * (2 + x + 16 * x * x - 52 * x * x * x + 24 * x * x * x * x) /
                        (6 * (1 - x) * (1 - x) * (1 - 2 * x) * (1 - 2 * x));
  EXPECT_LE(rel(g, expect), 1e-12);
  EXPECT_LE(rel(gamma_closed_form(ScaledParams::from_eps(0.1, 3)), expect), 1e-15);
}

TEST(GammaStar, KThreeSeriesResidualIsSixthOrder) {
  double prev = 0.0;
  for (double e = 0.1; e > 2e-3; e /= 2) {
    const double x = e * e;
    const double res = std::abs(gamma_star(ScaledParams::from_eps(e, 3)) - x / 3 - 7 * x * x / 6);
    EXPECT_LE(res / (x * x * x), kSeriesConstantBound);
    if (prev > 0.0) {
      EXPECT_GE(prev / res, 50.0);
      EXPECT_LE(prev / res, 80.0);
    }
    prev = res;
  }
}

TEST(GammaClosedForm, MatchesExactSumOnGrid) {
  for (int k = 3; k <= 5; ++k) {
    const double emax = 1.0 / std::sqrt(2.0 * k - 1.0);
    for (int i = 1; i <= 100; ++i) {
      const double e = emax * i / 101.0;
      const auto sp = ScaledParams::from_eps(e, k);
      ASSERT_LE(rel(gamma_closed_form(sp), gamma_star(sp)), 1e-12) << "k=" << k << " eps=" << e;
    }
  }
}

TEST(GammaClosedForm, UnsupportedK) {
  EXPECT_THROW(gamma_closed_form(ScaledParams::from_eps(0.1, 2)), UnsupportedError);
  EXPECT_THROW(gamma_closed_form(ScaledParams::from_eps(0.1, 6)), UnsupportedError);
}

TEST(GammaStar, Positive) {
  for (std::int64_t n : {2, 9, 50, 100000}) {
    for (int k = 1; k <= 4 && 2 * k <= n; ++k) EXPECT_GT(gamma_star(GraphParams::make(n, k)), 0.0);
  }
}
