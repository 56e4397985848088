#ifndef JSEARCH_VALIDATION_HPP
#define JSEARCH_VALIDATION_HPP

// Checks that tie the reduced model to the full graph and to the asymptotic
// behaviour of the search.
//
// The perturbative statements about the two lowest eigenvectors xi+- of the
// reduced Hamiltonian are tested through their spectral consequences:
//   gap E1 - E0            ~ 2 sqrt(k!) eps^k      (gap_ratio -> 1)
//   (E1 - E0) * t_run      -> pi                   (phase -> pi)
//   |<s|v0>|^2, |<w|v0>|^2 -> 1/2                  (s = (xi+ - xi-)/2, w = (xi+ + xi-)/2)
//   p_succ(t_run)          -> 1

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "jsearch/coupling.hpp"
#include "jsearch/dynamics.hpp"
#include "jsearch/errors.hpp"
#include "jsearch/johnson.hpp"
#include "jsearch/spectral.hpp"

namespace jsearch {

inline constexpr double kClusterThreshold = 1e-6;
inline constexpr double kSpectrumTol = 1e-8;
inline constexpr double kInvarianceTol = 1e-12;
inline constexpr double kOracleTol = 1e-9;
inline constexpr double kTransitivityTol = 1e-10;
inline constexpr double kConjugationTol = 1e-10;
inline constexpr std::size_t kOracleTimes = 64;

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct ValidationReport {
  std::string instance;
  std::vector<CheckResult> checks;

  bool all_passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  void add(std::string name, double residual, double tolerance) {
    checks.push_back({std::move(name), residual <= tolerance, residual, tolerance});
  }
};

inline std::string describe(const GraphParams& p) {
  return "J(" + std::to_string(p.n()) + "," + std::to_string(p.k()) + ")";
}

/// Groups ascending eigenvalues whose consecutive spacing is <= threshold.
/// Returns [begin, end) index ranges.
inline std::vector<std::pair<std::size_t, std::size_t>> cluster_eigenvalues(
    std::span<const double> ascending, double threshold = kClusterThreshold) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= ascending.size(); ++i) {
    if (i == ascending.size() || ascending[i] - ascending[i - 1] > threshold) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

/// The search walk evolved in the full N-dimensional vertex space from the
/// uniform superposition |s>.
class FullEvolution {
 public:
  FullEvolution(const GraphParams& params, double gamma, VertexId w,
                std::uint64_t cap = kDefaultFullSpaceCap)
      : params_(params), w_(w), hamiltonian_(full_hamiltonian(params, gamma, w, cap)) {
    dec_ = sym_eig(hamiltonian_);
    const auto N = hamiltonian_.dim();
    psi0_.amplitudes.assign(N, 1.0 / std::sqrt(static_cast<double>(N)));
  }

  ComplexState state(double t) const { return evolve(dec_, psi0_, t); }

  double probability(double t) const {
    return detail::clamp_probability(std::norm(state(t).amplitudes[static_cast<std::size_t>(w_.value)]));
  }

  const SymMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const EigDecomp& decomposition() const noexcept { return dec_; }

 private:
  GraphParams params_;
  VertexId w_;
  SymMatrix hamiltonian_;
  EigDecomp dec_;
  ComplexState psi0_;
};

/// kOracleTimes uniform samples of [0, 2 t_run].
inline std::vector<double> oracle_times(const GraphParams& params, std::size_t m = kOracleTimes) {
  return detail::uniform_grid(0.0, 2.0 * run_time(params), m);
}

/// Success-probability curve of the full model at the given times.
inline std::vector<double> full_probability_curve(const GraphParams& params, double gamma, VertexId w,
                                                  std::span<const double> times,
                                                  std::uint64_t cap = kDefaultFullSpaceCap) {
  FullEvolution full(params, gamma, w, cap);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(full.probability(t));
  return out;
}

/// max_t |p_full(t) - p_reduced(t)|.
inline double compare_full_reduced(const GraphParams& params, double gamma, VertexId w,
                                   std::span<const double> times,
                                   std::uint64_t cap = kDefaultFullSpaceCap) {
  detail::require_vertex(w, params);
  detail::require_cap(params, cap);
  const auto full = full_probability_curve(params, gamma, w, times, cap);
  const ReducedEvolution reduced(params, gamma);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    worst = std::max(worst, std::abs(full[i] - reduced.probability(times[i])));
  }
  return worst;
}

/// Dense adjacency spectrum against the closed-form eigenvalues and
/// multiplicities.
inline ValidationReport check_spectrum(const GraphParams& params,
                                       std::uint64_t cap = kDefaultFullSpaceCap) {
  const auto a = adjacency_matrix(params, cap);
  const auto dec = sym_eig(a);
  const auto spec = spectral_data(params);
  const int k = params.k();

  ValidationReport rep{describe(params), {}};
  // Closed-form levels in ascending order: lambda_k < ... < lambda_0.
  double min_spacing = INFINITY;
  for (int ell = 0; ell < k; ++ell) {
    min_spacing = std::min(min_spacing, spec.lambdas[ell] - spec.lambdas[ell + 1]);
  }
  if (k > 0 && !(min_spacing > kClusterThreshold)) {
    throw NumericalError("closed-form eigenvalues of " + describe(params) +
                         " closer than the clustering threshold");
  }

  const auto clusters = cluster_eigenvalues(dec.values);
  double value_residual = 0.0;
  double mult_residual = 0.0;
  if (clusters.size() != static_cast<std::size_t>(k) + 1) {
    mult_residual = INFINITY;
    value_residual = INFINITY;
  } else {
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const auto ell = static_cast<std::size_t>(k) - c;
      const auto [b, e] = clusters[c];
      for (std::size_t j = b; j < e; ++j) {
        value_residual = std::max(value_residual, std::abs(dec.values[j] - spec.lambdas[ell]));
      }
      const auto count = static_cast<double>(e - b);
      mult_residual += std::abs(count - static_cast<double>(spec.mults[ell]));
    }
  }
  rep.add("eigenvalues", value_residual, kSpectrumTol);
  rep.add("multiplicities", mult_residual, 0.0);
  return rep;
}

/// max_l ||(I - Pi) A |nu_l>|| with Pi the projector onto span{|nu_l>}.
inline double check_partition_invariance(const GraphParams& params, VertexId w,
                                         std::uint64_t cap = kDefaultFullSpaceCap) {
  const auto part = distance_partition(params, w, cap);
  const auto a = adjacency_matrix(params, cap);
  const auto N = a.dim();
  std::vector<std::size_t> cls(N);
  for (std::size_t ell = 0; ell < part.classes.size(); ++ell) {
    for (auto v : part.classes[ell]) cls[static_cast<std::size_t>(v.value)] = ell;
  }
  double worst = 0.0;
  std::vector<double> y(N), proj(part.classes.size());
  for (const auto& members : part.classes) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(members.size()));
    std::fill(y.begin(), y.end(), 0.0);
    for (auto v : members) {
      const auto c = static_cast<std::size_t>(v.value);
      for (std::size_t r = 0; r < N; ++r) y[r] += a(r, c) * amp;
    }
    // <nu_m|y> for every class, then subtract the projection.
    std::fill(proj.begin(), proj.end(), 0.0);
    for (std::size_t r = 0; r < N; ++r) proj[cls[r]] += y[r];
    double res = 0.0;
    for (std::size_t r = 0; r < N; ++r) {
      const double sz = static_cast<double>(part.classes[cls[r]].size());
      const double d = y[r] - proj[cls[r]] / sz;
      res += d * d;
    }
    worst = std::max(worst, std::sqrt(res));
  }
  return worst;
}

/// Builds the orthonormal basis {P_l|w> / p_l} from the dense spectrum of A,
/// conjugates the full Hamiltonian into it, and reports
///   - max |<w|P_l|w> - p_l^2|
///   - max entrywise |B^T H B - H_red|.
inline ValidationReport check_reduced_conjugation(const GraphParams& params, double gamma, VertexId w,
                                                  std::uint64_t cap = kDefaultFullSpaceCap) {
  const auto a = adjacency_matrix(params, cap);
  const auto dec = sym_eig(a);
  const auto clusters = cluster_eigenvalues(dec.values);
  const int k = params.k();
  ValidationReport rep{describe(params), {}};
  if (clusters.size() != static_cast<std::size_t>(k) + 1) {
    rep.add("projector_overlaps", INFINITY, kConjugationTol);
    rep.add("reduced_conjugation", INFINITY, kConjugationTol);
    return rep;
  }
  const auto N = a.dim();
  const auto wi = static_cast<std::size_t>(w.value);
  const auto spec = spectral_data(params);
  std::vector<std::vector<double>> basis(static_cast<std::size_t>(k) + 1, std::vector<double>(N, 0.0));
  double overlap_res = 0.0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto ell = static_cast<std::size_t>(k) - c;
    auto& b = basis[ell];
    for (std::size_t j = clusters[c].first; j < clusters[c].second; ++j) {
      const double coef = dec.vec(wi, j);
      for (std::size_t r = 0; r < N; ++r) b[r] += coef * dec.vec(r, j);
    }
    // <w|P_l|w> = (P_l|w>)_w.
    overlap_res = std::max(overlap_res, std::abs(b[wi] - spec.overlaps[ell] * spec.overlaps[ell]));
    double nrm = 0.0;
    for (double x : b) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : b) x /= nrm;
  }
  const auto h = full_hamiltonian(params, gamma, w, cap);
  const auto red = reduced_hamiltonian(params, gamma);
  double conj_res = 0.0;
  std::vector<double> hb(N);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (std::size_t r = 0; r < N; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < N; ++c) s += h(r, c) * basis[j][c];
      hb[r] = s;
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      double s = 0.0;
      for (std::size_t r = 0; r < N; ++r) s += basis[i][r] * hb[r];
      conj_res = std::max(conj_res, std::abs(s - red.matrix(i, j)));
    }
  }
  rep.add("projector_overlaps", overlap_res, kConjugationTol);
  rep.add("reduced_conjugation", conj_res, kConjugationTol);
  return rep;
}

/// One record of a convergence study at gamma = gamma*.
struct SweepRow {
  std::int64_t n = 0;
  int k = 0;
  std::uint64_t N = 0;
  double gamma_star = 0.0;
  double t_run = 0.0;
  double p_at_trun = 0.0;
  double t_peak = 0.0;
  double p_peak = 0.0;
  double gap = 0.0;
  double gap_ratio = 0.0;  // gap * n^(k/2) / (2 sqrt(k!))
  double phase = 0.0;      // gap * t_run
  double s_overlap_sq = 0.0;
  double w_overlap_sq = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

inline constexpr double kDegenerateGap = 1e-14;

inline SweepRow asymptotics_row(const GraphParams& params) {
  const double gamma = gamma_star(params);
  const ReducedEvolution evo(params, gamma);
  const auto& dec = evo.decomposition();
  const double gap = dec.values[1] - dec.values[0];
  if (!(gap > kDegenerateGap)) {
    throw NumericalError("two lowest eigenvalues of the reduced Hamiltonian of " + describe(params) +
                         " are degenerate (gap " + std::to_string(gap) + ")");
  }
  SweepRow row;
  row.n = params.n();
  row.k = params.k();
  row.N = params.vertex_count();
  row.gamma_star = gamma;
  row.t_run = run_time(params);
  row.p_at_trun = evo.probability(row.t_run);
  const auto peak = find_peak(evo, 0.0, 2.0 * row.t_run);
  row.t_peak = peak.time;
  row.p_peak = peak.probability;
  row.gap = gap;
  row.phase = gap * row.t_run;
  row.gap_ratio = row.phase / std::numbers::pi;
  const auto w = reduced_marked_state(params);
  double wv = 0.0;
  for (std::size_t r = 0; r < dec.dim(); ++r) wv += w[r] * dec.vec(r, 0);
  row.s_overlap_sq = dec.vec(0, 0) * dec.vec(0, 0);
  row.w_overlap_sq = wv * wv;
  return row;
}

/// asymptotics_row for every n, computed on up to `threads` workers. Rows
/// are returned in input order whatever the degree of parallelism.
inline std::vector<SweepRow> convergence_sweep(int k, std::span<const std::int64_t> n_list,
                                               unsigned threads = 1) {
  if (n_list.empty()) throw DomainError("n list is empty");
  std::vector<GraphParams> params;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw DomainError("n list must be strictly ascending");
    params.push_back(GraphParams::make(n_list[i], k));
  }
  std::vector<SweepRow> rows(params.size());
  std::vector<std::exception_ptr> errors(params.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < params.size(); i = next++) {
      try {
        rows[i] = asymptotics_row(params[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(params.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace jsearch

#endif  // JSEARCH_VALIDATION_HPP
