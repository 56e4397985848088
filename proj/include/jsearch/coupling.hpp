#ifndef JSEARCH_COUPLING_HPP
#define JSEARCH_COUPLING_HPP

// Rescaled spectral quantities and the critical hopping rate.
//
// With eps = 1/sqrt(n):
//   r_l(eps)   = eps^2 lambda_l = (k-l)(1-(k+l)eps^2) - l eps^2
//   p_l(eps)   = eps^(k-l) sqrt( k!(1-(2l-1)eps^2) / (l! prod_{j=l-1}^{k-1} (1-j eps^2)) )
//   eta*(eps)  = ( sum_{l=1}^k p_l^2 / (r_0 - r_l) )^-1
//   gamma*     = eps^2 / eta*
// All of these are real-analytic for (2k-1) eps^2 < 1.

#include <cmath>
#include <string>

#include "jsearch/errors.hpp"
#include "jsearch/johnson.hpp"

namespace jsearch {

/// (eps, k) with eps in (0, 1/sqrt(2k-1)). Stores eps^2 so that the graph
/// route (eps^2 = 1/n) carries no square-root rounding.
class ScaledParams {
 public:
  static ScaledParams from_eps(double eps, int k) {
    if (k < 1) throw DomainError("k must be >= 1");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const long double e2 = static_cast<long double>(eps) * eps;
    if (!((2 * k - 1) * e2 < 1.0L)) {
      throw DomainError("eps = " + std::to_string(eps) + " outside (0, 1/sqrt(2k-1)) for k = " +
                        std::to_string(k));
    }
    return ScaledParams(eps, e2, k);
  }

  /// eps = 1/sqrt(n).
  static ScaledParams from_graph(const GraphParams& g) {
    const long double e2 = 1.0L / static_cast<long double>(g.n());
    return ScaledParams(static_cast<double>(std::sqrt(e2)), e2, g.k());
  }

  double eps() const noexcept { return eps_; }
  long double eps2() const noexcept { return eps2_; }
  int k() const noexcept { return k_; }

 private:
  ScaledParams(double eps, long double e2, int k) : eps_(eps), eps2_(e2), k_(k) {}
  double eps_;
  long double eps2_;
  int k_;
};

namespace detail {

inline void require_level(const ScaledParams& sp, int ell) {
  if (ell < 0 || ell > sp.k()) {
    throw DomainError("level " + std::to_string(ell) + " outside [0," + std::to_string(sp.k()) + "]");
  }
}

inline long double r_ell_ld(const ScaledParams& sp, int ell) {
  const long double e2 = sp.eps2();
  const int k = sp.k();
  return (k - ell) * (1.0L - (k + ell) * e2) - ell * e2;
}

inline long double p_ell_sq_ld(const ScaledParams& sp, int ell) {
  const long double e2 = sp.eps2();
  const int k = sp.k();
  long double num = 1.0L - (2 * ell - 1) * e2;
  for (int j = ell + 1; j <= k; ++j) num *= j;  // k!/l!
  long double den = 1.0L;
  for (int j = ell - 1; j <= k - 1; ++j) den *= 1.0L - j * e2;
  long double pw = 1.0L;
  for (int j = 0; j < k - ell; ++j) pw *= e2;
  return pw * num / den;
}

// sum_{l=1}^k p_l^2 / (r_0 - r_l), compensated.
inline long double inverse_eta_star_ld(const ScaledParams& sp) {
  const long double r0 = r_ell_ld(sp, 0);
  long double sum = 0.0L, comp = 0.0L;
  for (int ell = 1; ell <= sp.k(); ++ell) {
    const long double term = p_ell_sq_ld(sp, ell) / (r0 - r_ell_ld(sp, ell));
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace detail

inline double r_ell(const ScaledParams& sp, int ell) {
  detail::require_level(sp, ell);
  return static_cast<double>(detail::r_ell_ld(sp, ell));
}

/// p_l(eps) from the product form; equals overlap(n,k,l) at eps = 1/sqrt(n).
inline double p_ell_scaled(const ScaledParams& sp, int ell) {
  detail::require_level(sp, ell);
  return static_cast<double>(std::sqrt(detail::p_ell_sq_ld(sp, ell)));
}

/// eta*(eps); tends to k as eps -> 0.
inline double eta_star(const ScaledParams& sp) {
  return static_cast<double>(1.0L / detail::inverse_eta_star_ld(sp));
}

/// gamma* = eps^2 / eta*(eps) for an arbitrary admissible eps.
inline double gamma_star(const ScaledParams& sp) {
  return static_cast<double>(sp.eps2() * detail::inverse_eta_star_ld(sp));
}

/// Critical hopping rate for J(n,k), eps = 1/sqrt(n).
inline double gamma_star(const GraphParams& params) {
  return gamma_star(ScaledParams::from_graph(params));
}

/// Published rational closed forms of gamma* for k = 3, 4, 5.
inline double gamma_closed_form(const ScaledParams& sp) {
  const long double x = sp.eps2();
  auto sq = [](long double v) { return v * v; };
  switch (sp.k()) {
    case 3: {
      const long double poly = 2 + x + 16 * x * x - 52 * x * x * x + 24 * x * x * x * x;
      return static_cast<double>(x * (1 - 3 * x) * poly / (6 * sq(1 - x) * sq(1 - 2 * x)));
    }
    case 4: {
      const long double x2 = x * x, x3 = x2 * x;
      const long double poly = 3 - 11 * x + 33 * x2 + 47 * x3 - 660 * x2 * x2 + 1116 * x2 * x3 -
                               432 * x3 * x3;
      return static_cast<double>(x * (1 - 4 * x) * poly /
                                 (12 * sq(1 - x) * sq(1 - 2 * x) * sq(1 - 3 * x)));
    }
    case 5: {
      const long double x2 = x * x, x3 = x2 * x, x4 = x2 * x2;
      const long double poly = 12 - 117 * x + 532 * x2 - 1107 * x3 + 2508 * x4 - 22588 * x4 * x +
                               80448 * x3 * x3 - 99648 * x4 * x3 + 34560 * x4 * x4;
      return static_cast<double>(x * (1 - 5 * x) * poly /
                                 (60 * sq(1 - x) * sq(1 - 2 * x) * sq(1 - 3 * x) * sq(1 - 4 * x)));
    }
    default:
      throw UnsupportedError("no closed form for gamma* with k = " + std::to_string(sp.k()) +
                             " (available for k = 3, 4, 5)");
  }
}

}  // namespace jsearch

#endif  // JSEARCH_COUPLING_HPP
