#ifndef JSEARCH_SPECTRAL_HPP
#define JSEARCH_SPECTRAL_HPP

// Closed-form spectrum of J(n,k) and the (k+1)-dimensional reduced model.
//
// The adjacency operator has k+1 distinct eigenvalues
//   lambda_l = (k-l)(n-k-l) - l,        multiplicity m_l = C(n,l) - C(n,l-1),
// and the marked vertex has weight p_l^2 = <w|P_l|w> = m_l / N in the l-th
// eigenspace. The vectors |lambda_l> = P_l|w> / p_l span the subspace that the
// search Hamiltonian leaves invariant; in that basis
//   A = diag(lambda_0, ..., lambda_k),   |w><w| = p p^T,
// so H = -gamma*diag(lambda) - p p^T, the initial state |s> is e_0 and the
// marked state is p.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "jsearch/errors.hpp"
#include "jsearch/johnson.hpp"

namespace jsearch {

namespace detail {
inline void require_level(const GraphParams& params, int ell) {
  if (ell < 0 || ell > params.k()) {
    throw DomainError("level " + std::to_string(ell) + " outside [0," + std::to_string(params.k()) + "]");
  }
}
}  // namespace detail

/// lambda_l = (k-l)(n-k-l) - l.
inline double eigenvalue(const GraphParams& params, int ell) {
  detail::require_level(params, ell);
  const std::int64_t n = params.n(), k = params.k();
  return static_cast<double>((k - ell) * (n - k - ell) - ell);
}

/// m_l = C(n,l) - C(n,l-1), exact.
inline std::uint64_t multiplicity(const GraphParams& params, int ell) {
  detail::require_level(params, ell);
  // C(n,l) <= C(n,k) for l <= k <= n/2, so neither term overflows.
  return *binomial(params.n(), ell) - *binomial(params.n(), ell - 1);
}

/// p_l = ||P_l |w>|| = sqrt(m_l / N).
inline double overlap(const GraphParams& params, int ell) {
  const auto m = static_cast<long double>(multiplicity(params, ell));
  const auto N = static_cast<long double>(params.vertex_count());
  return static_cast<double>(std::sqrt(m / N));
}

/// p_l^2 from the factorial expression k!(n-k)!(n-2l+1) / (l!(n-l+1)!),
/// evaluated as (k!/l!) (n-2l+1) / prod_{j=n-k+1}^{n-l+1} j. Kept as an
/// independent route to overlap()^2.
inline long double overlap_sq_factorial_form(const GraphParams& params, int ell) {
  detail::require_level(params, ell);
  const std::int64_t n = params.n(), k = params.k();
  long double num = static_cast<long double>(n - 2 * ell + 1);
  for (std::int64_t j = ell + 1; j <= k; ++j) num *= static_cast<long double>(j);
  long double den = 1.0L;
  for (std::int64_t j = n - k + 1; j <= n - ell + 1; ++j) den *= static_cast<long double>(j);
  return num / den;
}

struct SpectralData {
  GraphParams params;
  std::vector<double> lambdas;          // strictly decreasing
  std::vector<std::uint64_t> mults;     // sums to N
  std::vector<double> overlaps;         // p_l > 0, sum of squares 1
};

inline SpectralData spectral_data(const GraphParams& params) {
  SpectralData d{params, {}, {}, {}};
  const int k = params.k();
  for (int ell = 0; ell <= k; ++ell) {
    d.lambdas.push_back(eigenvalue(params, ell));
    d.mults.push_back(multiplicity(params, ell));
    d.overlaps.push_back(overlap(params, ell));
  }
  for (int ell = 1; ell <= k; ++ell) {
    if (!(d.lambdas[ell - 1] > d.lambdas[ell])) {
      throw DomainError("eigenvalues of J(" + std::to_string(params.n()) + "," + std::to_string(k) +
                        ") not strictly decreasing at level " + std::to_string(ell));
    }
  }
  return d;
}

/// -gamma*diag(lambda) - p p^T in the {|lambda_l>} basis.
struct ReducedHamiltonian {
  GraphParams params;
  double gamma;
  SymMatrix matrix;
};

inline ReducedHamiltonian reduced_hamiltonian(const GraphParams& params, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const auto spec = spectral_data(params);
  const auto dim = static_cast<std::size_t>(params.k()) + 1;
  SymMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      double v = -spec.overlaps[i] * spec.overlaps[j];
      if (i == j) v -= gamma * spec.lambdas[i];
      h.set(i, j, v);
    }
  }
  return {params, gamma, std::move(h)};
}

/// |s> = |lambda_0> = e_0.
inline std::vector<double> reduced_initial_state(const GraphParams& params) {
  std::vector<double> e0(static_cast<std::size_t>(params.k()) + 1, 0.0);
  e0[0] = 1.0;
  return e0;
}

/// |w> = sum_l p_l |lambda_l>.
inline std::vector<double> reduced_marked_state(const GraphParams& params) {
  return spectral_data(params).overlaps;
}

}  // namespace jsearch

#endif  // JSEARCH_SPECTRAL_HPP
