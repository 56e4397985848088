#ifndef JSEARCH_DYNAMICS_HPP
#define JSEARCH_DYNAMICS_HPP

// Exact time evolution psi(t) = exp(-iHt) psi(0) through a symmetric
// eigendecomposition H = V diag(E) V^T, and the success probability
// |<w|psi(t)>|^2 of the search walk.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jsearch/coupling.hpp"
#include "jsearch/errors.hpp"
#include "jsearch/johnson.hpp"
#include "jsearch/spectral.hpp"

namespace jsearch {

/// Eigenpairs of a symmetric matrix: values ascending, vectors stored
/// column-major (column j is the eigenvector for values[j]).
struct EigDecomp {
  std::vector<double> values;
  std::vector<double> vectors;

  std::size_t dim() const noexcept { return values.size(); }
  double vec(std::size_t row, std::size_t col) const noexcept { return vectors[col * dim() + row]; }
  std::span<const double> column(std::size_t col) const noexcept {
    return std::span<const double>(vectors).subspan(col * dim(), dim());
  }
};

struct JacobiOptions {
  double rel_tol = 1e-14;  // stop once off(M) <= rel_tol * ||M||_F
  int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver.
///
/// Rotations are applied in row-cyclic order until the off-diagonal
/// Frobenius norm drops below rel_tol * ||M||_F; one more sweep is then run
/// so that near-degenerate pairs are fully decoupled.
inline EigDecomp sym_eig(const SymMatrix& m, const JacobiOptions& opts = {}) {
  const std::size_t n = m.dim();
  std::vector<double> a(m.data().begin(), m.data().end());
  std::vector<double> v(n * n, 0.0);  // column-major, like EigDecomp
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double fro2 = 0.0;
  for (double x : a) fro2 += x * x;
  const double target = opts.rel_tol * std::sqrt(fro2);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += A(i, j) * A(i, j);
    return std::sqrt(s);
  };

  auto sweep = [&] {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = A(r, p), arq = A(r, q);
          A(r, p) = c * arp - s * arq;
          A(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = A(p, r), aqr = A(q, r);
          A(p, r) = c * apr - s * aqr;
          A(q, r) = s * apr + c * aqr;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v[p * n + r], vrq = v[q * n + r];
          v[p * n + r] = c * vrp - s * vrq;
          v[q * n + r] = s * vrp + c * vrq;
        }
      }
    }
  };

  int sweeps = 0;
  double off = off_norm();
  while (off > target) {
    if (sweeps == opts.max_sweeps) {
      std::ostringstream msg;
      msg << "Jacobi eigensolver did not converge in " << opts.max_sweeps
          << " sweeps (dim " << n << ", off-diagonal norm " << off << ", target " << target << ")";
      throw NumericalError(msg.str());
    }
    sweep();
    ++sweeps;
    off = off_norm();
  }
  if (sweeps > 0) sweep();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return A(x, x) < A(y, y); });
  EigDecomp dec;
  dec.values.resize(n);
  dec.vectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    dec.values[j] = A(order[j], order[j]);
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(order[j] * n), n,
                dec.vectors.begin() + static_cast<std::ptrdiff_t>(j * n));
  }
  return dec;
}

/// A pure state as complex amplitudes.
struct ComplexState {
  std::vector<std::complex<double>> amplitudes;

  static ComplexState from_real(std::span<const double> v) {
    return {std::vector<std::complex<double>>(v.begin(), v.end())};
  }

  std::size_t dim() const noexcept { return amplitudes.size(); }

  double norm() const noexcept {
    double s = 0.0;
    for (auto z : amplitudes) s += std::norm(z);
    return std::sqrt(s);
  }
};

/// psi(t) = V diag(exp(-i E_j t)) V^T psi0.
namespace detail {

// exp(-i e t). For long runs e*t reaches ~1e8 rad, where a plain product
// loses ~1e-8 rad; the product is kept exact with fma and reduced against a
// two-part 2*pi.
inline std::complex<double> phase_factor(double e, double t) {
  constexpr double kTwoPiHi = 6.283185307179586;
  constexpr double kTwoPiLo = 2.4492935982947064e-16;
  const double hi = e * t;
  const double lo = std::fma(e, t, -hi);
  const double q = std::nearbyint(hi / kTwoPiHi);
  const double r = std::fma(-q, kTwoPiHi, hi) + (lo - q * kTwoPiLo);
  return std::polar(1.0, -r);
}

}  // namespace detail

inline ComplexState evolve(const EigDecomp& dec, const ComplexState& psi0, double t) {
  const std::size_t n = dec.dim();
  if (psi0.dim() != n) {
    throw DomainError("state dimension " + std::to_string(psi0.dim()) +
                      " does not match Hamiltonian dimension " + std::to_string(n));
  }
  std::vector<std::complex<double>> coeff(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> c{};
    for (std::size_t r = 0; r < n; ++r) c += dec.vec(r, j) * psi0.amplitudes[r];
    coeff[j] = c * detail::phase_factor(dec.values[j], t);
  }
  ComplexState out{std::vector<std::complex<double>>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < n; ++r) out.amplitudes[r] += dec.vec(r, j) * coeff[j];
  }
  return out;
}

/// <psi|H|psi> for real symmetric H.
inline double expectation(const SymMatrix& h, const ComplexState& psi) {
  const std::size_t n = h.dim();
  std::complex<double> acc{};
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> row{};
    for (std::size_t j = 0; j < n; ++j) row += h(i, j) * psi.amplitudes[j];
    acc += std::conj(psi.amplitudes[i]) * row;
  }
  return acc.real();
}

namespace detail {

inline double clamp_probability(double p) {
  constexpr double kWarnExcess = 1e-10;
  if (p > 1.0 + kWarnExcess || p < -kWarnExcess) {
    std::clog << "jsearch: warning: probability " << p << " outside [0,1] by more than "
              << kWarnExcess << ", clamping\n";
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace detail

/// Success probability |<w|exp(-iHt)|s>|^2 with H the reduced search
/// Hamiltonian. One eigendecomposition serves any number of time samples:
/// the amplitude is sum_j c_j exp(-i (E_j - E_0) t) up to a global phase,
/// with c_j = <w|v_j><v_j|s>.
class ReducedEvolution {
 public:
  ReducedEvolution(const GraphParams& params, double gamma)
      : params_(params), gamma_(gamma), hamiltonian_(reduced_hamiltonian(params, gamma)) {
    dec_ = sym_eig(hamiltonian_.matrix);
    const auto w = reduced_marked_state(params);
    weights_.resize(dec_.dim());
    for (std::size_t j = 0; j < dec_.dim(); ++j) {
      double wv = 0.0;
      for (std::size_t r = 0; r < dec_.dim(); ++r) wv += w[r] * dec_.vec(r, j);
      weights_[j] = wv * dec_.vec(0, j);
    }
  }

  double probability(double t) const {
    std::complex<double> amp{};
    const double e0 = dec_.values[0];
    for (std::size_t j = 0; j < dec_.dim(); ++j) {
      amp += weights_[j] * detail::phase_factor(dec_.values[j] - e0, t);
    }
    return detail::clamp_probability(std::norm(amp));
  }

  const GraphParams& params() const noexcept { return params_; }
  double gamma() const noexcept { return gamma_; }
  const ReducedHamiltonian& hamiltonian() const noexcept { return hamiltonian_; }
  const EigDecomp& decomposition() const noexcept { return dec_; }
  /// c_j = <w|v_j><v_j|s>.
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  GraphParams params_;
  double gamma_;
  ReducedHamiltonian hamiltonian_;
  EigDecomp dec_;
  std::vector<double> weights_;
};

inline double success_probability(const GraphParams& params, double gamma, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  return ReducedEvolution(params, gamma).probability(t);
}

/// t_run = pi n^(k/2) / (2 sqrt(k!)).
inline double run_time(const GraphParams& params) {
  long double kfact = 1.0L;
  for (int j = 2; j <= params.k(); ++j) kfact *= j;
  const long double nk2 = std::pow(static_cast<long double>(params.n()), params.k() / 2.0L);
  return static_cast<double>(std::numbers::pi_v<long double> * nk2 / (2.0L * std::sqrt(kfact)));
}

struct ScanResult {
  GraphParams params;
  double gamma;
  std::vector<double> times;
  std::vector<double> probs;
};

namespace detail {

inline std::vector<double> uniform_grid(double t0, double t1, std::size_t m) {
  if (!(t0 >= 0.0) || !(t1 > t0)) throw DomainError("time grid requires 0 <= t0 < t1");
  if (m < 2) throw DomainError("time grid requires at least 2 samples");
  std::vector<double> ts(m);
  const double step = (t1 - t0) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) ts[i] = t0 + step * static_cast<double>(i);
  ts.back() = t1;
  return ts;
}

}  // namespace detail

/// Success probability on m uniformly spaced times in [t0, t1] (both ends
/// included).
inline ScanResult scan(const ReducedEvolution& evo, double t0, double t1, std::size_t m) {
  ScanResult r{evo.params(), evo.gamma(), detail::uniform_grid(t0, t1, m), {}};
  r.probs.reserve(m);
  for (double t : r.times) r.probs.push_back(evo.probability(t));
  return r;
}

inline ScanResult scan(const GraphParams& params, double gamma, double t0, double t1, std::size_t m) {
  return scan(ReducedEvolution(params, gamma), t0, t1, m);
}

struct Peak {
  double time;
  double probability;
};

inline constexpr std::size_t kPeakCoarseSamples = 2001;
inline constexpr double kPeakRelTimeTol = 1e-6;

/// Coarse scan of [t0, t1] followed by golden-section refinement around the
/// coarse argmax. Throws BracketError when the argmax sits on an endpoint.
inline Peak find_peak(const ReducedEvolution& evo, double t0, double t1,
                      std::size_t coarse = kPeakCoarseSamples) {
  const auto s = scan(evo, t0, t1, coarse);
  const auto it = std::max_element(s.probs.begin(), s.probs.end());
  const auto i = static_cast<std::size_t>(it - s.probs.begin());
  if (i == 0 || i + 1 == s.probs.size()) {
    std::ostringstream msg;
    msg << "no interior maximum of the success probability in [" << t0 << ", " << t1 << "]";
    throw BracketError(msg.str());
  }
  const Peak coarse_best{s.times[i], *it};

  constexpr double kInvPhi = 0.6180339887498948482;
  double a = s.times[i - 1], b = s.times[i + 1];
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = evo.probability(x1), f2 = evo.probability(x2);
  while (b - a > kPeakRelTimeTol * 0.5 * (a + b)) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = evo.probability(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = evo.probability(x1);
    }
  }
  const Peak refined = f1 >= f2 ? Peak{x1, f1} : Peak{x2, f2};
  return refined.probability >= coarse_best.probability ? refined : coarse_best;
}

inline Peak find_peak(const GraphParams& params, double gamma, double t0, double t1) {
  return find_peak(ReducedEvolution(params, gamma), t0, t1);
}

}  // namespace jsearch

#endif  // JSEARCH_DYNAMICS_HPP
