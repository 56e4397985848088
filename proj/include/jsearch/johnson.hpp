#ifndef JSEARCH_JOHNSON_HPP
#define JSEARCH_JOHNSON_HPP

// Exact combinatorial construction of the Johnson graph J(n,k) in the full
// C(n,k)-dimensional vertex space: colex ranking of k-subsets, adjacency,
// distance classes around a marked vertex, and the search Hamiltonian
// H = -gamma*A - |w><w|.

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jsearch/errors.hpp"

namespace jsearch {

/// Largest full-space dimension N for which dense matrices are built.
inline constexpr std::uint64_t kDefaultFullSpaceCap = 3003;

/// Exact binomial coefficient, or nullopt when it does not fit in 64 bits.
/// Negative arguments and k > n give 0.
inline std::optional<std::uint64_t> binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // After step i, r == C(n-k+i, i), so the division is exact.
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > UINT64_MAX) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

/// binomial() that throws DomainError on overflow.
inline std::uint64_t binomial_or_throw(std::int64_t n, std::int64_t k) {
  auto b = binomial(n, k);
  if (!b) {
    throw DomainError("C(" + std::to_string(n) + "," + std::to_string(k) +
                      ") overflows 64-bit integers");
  }
  return *b;
}

/// The pair (n,k) defining J(n,k). Construct through make(), which enforces
/// k >= 1, n >= 2k and that N = C(n,k) fits in 64 bits.
class GraphParams {
 public:
  static GraphParams make(std::int64_t n, std::int64_t k) {
    if (k < 1) throw DomainError("k must be >= 1, got " + std::to_string(k));
    if (n < 2 * k) {
      throw DomainError("n must be >= 2k (n=" + std::to_string(n) +
                        ", k=" + std::to_string(k) + ")");
    }
    return GraphParams(n, static_cast<int>(k), binomial_or_throw(n, k));
  }

  std::int64_t n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  /// Number of vertices C(n,k).
  std::uint64_t vertex_count() const noexcept { return count_; }

  friend bool operator==(const GraphParams&, const GraphParams&) = default;

 private:
  GraphParams(std::int64_t n, int k, std::uint64_t count) : n_(n), k_(k), count_(count) {}
  std::int64_t n_;
  int k_;
  std::uint64_t count_;
};

/// Colex rank of a vertex, in [0, N).
struct VertexId {
  std::uint64_t value = 0;

  constexpr VertexId() = default;
  constexpr explicit VertexId(std::uint64_t v) : value(v) {}
  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

/// A subset of {1,...,n} stored as a bitmask (bit p-1 <=> element p).
class VertexSet {
 public:
  VertexSet() = default;

  /// Builds the mask from 1-based elements. Duplicates and elements outside
  /// [1, n] are rejected.
  static VertexSet from_elements(std::span<const std::int64_t> elems, std::int64_t n) {
    if (n < 1) throw DomainError("ground set size must be positive");
    VertexSet s(n);
    for (auto e : elems) {
      if (e < 1 || e > n) {
        throw DomainError("element " + std::to_string(e) + " outside [1," + std::to_string(n) + "]");
      }
      if (s.contains(e)) throw DomainError("duplicate element " + std::to_string(e));
      s.insert(e);
    }
    return s;
  }

  static VertexSet from_elements(std::initializer_list<std::int64_t> elems, std::int64_t n) {
    return from_elements(std::span<const std::int64_t>(elems.begin(), elems.size()), n);
  }

  std::int64_t universe() const noexcept { return n_; }

  bool contains(std::int64_t e) const noexcept {
    if (e < 1 || e > n_) return false;
    auto pos = static_cast<std::uint64_t>(e - 1);
    return (words_[pos / 64] >> (pos % 64)) & 1u;
  }

  void insert(std::int64_t e) {
    auto pos = static_cast<std::uint64_t>(e - 1);
    words_[pos / 64] |= std::uint64_t{1} << (pos % 64);
  }

  int popcount() const noexcept {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  /// |this ∩ other|; both sets must share the same universe.
  int intersection_size(const VertexSet& other) const noexcept {
    int c = 0;
    auto m = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < m; ++i) c += std::popcount(words_[i] & other.words_[i]);
    return c;
  }

  /// Elements in increasing order.
  std::vector<std::int64_t> elements() const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      auto w = words_[i];
      while (w != 0) {
        int b = std::countr_zero(w);
        out.push_back(static_cast<std::int64_t>(i * 64 + b + 1));
        w &= w - 1;
      }
    }
    return out;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  explicit VertexSet(std::int64_t n) : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {}
  std::int64_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

namespace detail {

// Colex rank of a sorted 1-based k-subset: sum_i C(c_i - 1, i + 1).
inline std::uint64_t colex_rank(std::span<const std::int64_t> sorted) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    r += binomial_or_throw(sorted[i] - 1, static_cast<std::int64_t>(i) + 1);
  }
  return r;
}

// Inverse of colex_rank, writing ascending 1-based elements into out.
inline void colex_unrank(std::uint64_t id, std::int64_t n, int k, std::span<std::int64_t> out) {
  std::int64_t hi = n - 1;
  for (int i = k; i >= 1; --i) {
    // Largest c in [i-1, hi] with C(c, i) <= id.
    std::int64_t lo = i - 1, up = hi;
    while (lo < up) {
      std::int64_t mid = lo + (up - lo + 1) / 2;
      auto b = binomial(mid, i);
      if (b && *b <= id) {
        lo = mid;
      } else {
        up = mid - 1;
      }
    }
    out[static_cast<std::size_t>(i - 1)] = lo + 1;
    id -= *binomial(lo, i);
    hi = lo - 1;
  }
}

inline void require_vertex(VertexId id, const GraphParams& params) {
  if (id.value >= params.vertex_count()) {
    throw DomainError("vertex id " + std::to_string(id.value) + " >= N = " +
                      std::to_string(params.vertex_count()));
  }
}

inline void require_cap(const GraphParams& params, std::uint64_t cap) {
  if (params.vertex_count() > cap) {
    throw CapacityError("N = C(" + std::to_string(params.n()) + "," + std::to_string(params.k()) +
                        ") = " + std::to_string(params.vertex_count()) +
                        " exceeds the full-space cap " + std::to_string(cap));
  }
}

}  // namespace detail

/// Colexicographic rank of a k-subset.
inline VertexId rank_subset(const VertexSet& v, const GraphParams& params) {
  if (v.universe() != params.n()) {
    throw DomainError("vertex set universe " + std::to_string(v.universe()) +
                      " does not match n = " + std::to_string(params.n()));
  }
  if (v.popcount() != params.k()) {
    throw DomainError("vertex set has " + std::to_string(v.popcount()) + " elements, expected k = " +
                      std::to_string(params.k()));
  }
  auto elems = v.elements();
  return VertexId(detail::colex_rank(elems));
}

/// Inverse of rank_subset.
inline VertexSet unrank_subset(VertexId id, const GraphParams& params) {
  detail::require_vertex(id, params);
  std::vector<std::int64_t> elems(static_cast<std::size_t>(params.k()));
  detail::colex_unrank(id.value, params.n(), params.k(), elems);
  return VertexSet::from_elements(elems, params.n());
}

/// Dense real symmetric matrix. Writes through set() mirror across the
/// diagonal, so entries(i,j) == entries(j,i) holds bit-exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

  void set(std::size_t i, std::size_t j, double v) noexcept {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }

  /// Row-major storage, dim*dim entries.
  std::span<const double> data() const noexcept { return data_; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  double trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Adjacency matrix of J(n,k): A[u][v] = 1 iff |u ∩ v| = k-1.
/// Each vertex's k(n-k) neighbours are generated by swapping one element.
inline SymMatrix adjacency_matrix(const GraphParams& params,
                                  std::uint64_t cap = kDefaultFullSpaceCap) {
  detail::require_cap(params, cap);
  const auto N = static_cast<std::size_t>(params.vertex_count());
  const auto k = static_cast<std::size_t>(params.k());
  const auto n = params.n();
  SymMatrix a(N);
  std::vector<std::int64_t> elems(k), nb(k);
  std::vector<char> member(static_cast<std::size_t>(n) + 1);
  for (std::size_t u = 0; u < N; ++u) {
    detail::colex_unrank(u, n, params.k(), elems);
    std::fill(member.begin(), member.end(), 0);
    for (auto e : elems) member[static_cast<std::size_t>(e)] = 1;
    for (std::size_t out = 0; out < k; ++out) {
      for (std::int64_t in = 1; in <= n; ++in) {
        if (member[static_cast<std::size_t>(in)]) continue;
        nb = elems;
        nb[out] = in;
        std::sort(nb.begin(), nb.end());
        auto v = static_cast<std::size_t>(detail::colex_rank(nb));
        a.set(u, v, 1.0);
      }
    }
  }
  return a;
}

/// Vertices grouped by distance from the marked vertex:
/// classes[l] = { v : |v ∩ marked| = k - l }.
struct DistancePartition {
  std::vector<std::vector<VertexId>> classes;
  VertexId marked;
};

inline DistancePartition distance_partition(const GraphParams& params, VertexId w,
                                            std::uint64_t cap = kDefaultFullSpaceCap) {
  detail::require_vertex(w, params);
  detail::require_cap(params, cap);
  DistancePartition part;
  part.marked = w;
  part.classes.resize(static_cast<std::size_t>(params.k()) + 1);
  const auto ws = unrank_subset(w, params);
  for (std::uint64_t id = 0; id < params.vertex_count(); ++id) {
    auto v = unrank_subset(VertexId(id), params);
    auto ell = static_cast<std::size_t>(params.k() - v.intersection_size(ws));
    part.classes[ell].push_back(VertexId(id));
  }
  return part;
}

/// Full search Hamiltonian H = -gamma*A - |w><w| on the N-dimensional space.
inline SymMatrix full_hamiltonian(const GraphParams& params, double gamma, VertexId w,
                                  std::uint64_t cap = kDefaultFullSpaceCap) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  detail::require_vertex(w, params);
  SymMatrix h = adjacency_matrix(params, cap);
  const auto N = h.dim();
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i; j < N; ++j) {
      double a = h(i, j);
      if (a != 0.0) h.set(i, j, -gamma * a);
    }
  }
  const auto wi = static_cast<std::size_t>(w.value);
  h.set(wi, wi, h(wi, wi) - 1.0);
  return h;
}

}  // namespace jsearch

#endif  // JSEARCH_JOHNSON_HPP
