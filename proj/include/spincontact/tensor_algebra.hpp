#pragma once

// Multi-index bookkeeping on the n^N spin space and the permutation /
// two-site operators acting on it.
//
// Basis ordering is row-major with site 1 most significant:
//   flat = sum_j (alpha_j - 1) * n^(N - j),
// i.e. 11, 12, ..., 1n; 21, ..., nn for two sites. Sites and spin components
// are 1-based in the public API.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spincontact/errors.hpp"

namespace spincontact {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using OperatorMatrix = Matrix;

enum class Statistics { Boson, Fermion };

inline const char* to_string(Statistics s) {
  return s == Statistics::Boson ? "boson" : "fermion";
}

/// Particle count, local spin dimension n = 2s+1 and exchange statistics.
class SpinConfig {
 public:
  static constexpr std::size_t kDefaultDimensionCap = 4096;

  SpinConfig(int particles, int spin_dim, Statistics statistics,
             std::size_t dimension_cap = kDefaultDimensionCap)
      : particles_(particles), spin_dim_(spin_dim), statistics_(statistics) {
    if (particles < 1) throw ValidationError("SpinConfig: N must be >= 1");
    if (spin_dim < 1) throw ValidationError("SpinConfig: n must be >= 1");
    std::size_t dim = 1;
    for (int j = 0; j < particles; ++j) {
      dim *= static_cast<std::size_t>(spin_dim);
      if (dim > dimension_cap)
        throw ValidationError("SpinConfig: n^N = " + std::to_string(spin_dim) +
                              "^" + std::to_string(particles) +
                              " exceeds dimension cap " +
                              std::to_string(dimension_cap));
    }
    dimension_ = dim;
  }

  int particles() const noexcept { return particles_; }
  int spin_dim() const noexcept { return spin_dim_; }
  Statistics statistics() const noexcept { return statistics_; }
  std::size_t dimension() const noexcept { return dimension_; }
  Eigen::Index rows() const noexcept { return static_cast<Eigen::Index>(dimension_); }
  std::size_t pair_dimension() const noexcept {
    return static_cast<std::size_t>(spin_dim_) * static_cast<std::size_t>(spin_dim_);
  }

  /// +1 for bosons, -1 for fermions: P = sign * p.
  double exchange_sign() const noexcept {
    return statistics_ == Statistics::Boson ? 1.0 : -1.0;
  }

  SpinConfig with_statistics(Statistics s) const {
    return SpinConfig(particles_, spin_dim_, s, dimension_);
  }

 private:
  int particles_;
  int spin_dim_;
  Statistics statistics_;
  std::size_t dimension_ = 1;
};

/// Spin labels (alpha_1, ..., alpha_N), each in [1, n].
struct MultiIndex {
  std::vector<int> components;

  bool operator==(const MultiIndex&) const = default;
};

/// Ordered site pair, 1-based.
struct SitePair {
  int first;
  int second;

  bool operator==(const SitePair&) const = default;
};

namespace detail {

inline void check_site(const SpinConfig& cfg, int site, const char* who) {
  if (site < 1 || site > cfg.particles())
    throw ValidationError(std::string(who) + ": site " + std::to_string(site) +
                          " outside [1, " + std::to_string(cfg.particles()) + "]");
}

inline SitePair checked_pair(const SpinConfig& cfg, int i, int j, const char* who) {
  check_site(cfg, i, who);
  check_site(cfg, j, who);
  if (i == j)
    throw ValidationError(std::string(who) + ": sites must differ (got " +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
  return {i, j};
}

/// Strides: stride[j] = n^(N-1-j) for the 0-based site j.
inline std::vector<std::size_t> strides(const SpinConfig& cfg) {
  std::vector<std::size_t> s(static_cast<std::size_t>(cfg.particles()));
  std::size_t acc = 1;
  for (int j = cfg.particles() - 1; j >= 0; --j) {
    s[static_cast<std::size_t>(j)] = acc;
    acc *= static_cast<std::size_t>(cfg.spin_dim());
  }
  return s;
}

/// 0-based digit of site j (0-based) in a flat index.
inline int digit(std::size_t flat, std::size_t stride, int n) {
  return static_cast<int>((flat / stride) % static_cast<std::size_t>(n));
}

}  // namespace detail

inline std::size_t encode(const MultiIndex& idx, const SpinConfig& cfg) {
  if (idx.components.size() != static_cast<std::size_t>(cfg.particles()))
    throw ValidationError("encode: multi-index has length " +
                          std::to_string(idx.components.size()) + ", expected " +
                          std::to_string(cfg.particles()));
  std::size_t flat = 0;
  for (std::size_t j = 0; j < idx.components.size(); ++j) {
    const int a = idx.components[j];
    if (a < 1 || a > cfg.spin_dim())
      throw ValidationError("encode: component " + std::to_string(a) +
                            " at position " + std::to_string(j + 1) +
                            " outside [1, " + std::to_string(cfg.spin_dim()) + "]");
    flat = flat * static_cast<std::size_t>(cfg.spin_dim()) +
           static_cast<std::size_t>(a - 1);
  }
  return flat;
}

inline MultiIndex decode(std::size_t flat, const SpinConfig& cfg) {
  if (flat >= cfg.dimension())
    throw ValidationError("decode: flat index " + std::to_string(flat) +
                          " outside [0, " + std::to_string(cfg.dimension()) + ")");
  MultiIndex idx;
  idx.components.resize(static_cast<std::size_t>(cfg.particles()));
  const auto n = static_cast<std::size_t>(cfg.spin_dim());
  for (int j = cfg.particles() - 1; j >= 0; --j) {
    idx.components[static_cast<std::size_t>(j)] = static_cast<int>(flat % n) + 1;
    flat /= n;
  }
  return idx;
}

/// p^{ij}: exchanges the spin labels of sites i and j. (i, j) and (j, i)
/// give the same operator.
inline OperatorMatrix permutation_operator(const SpinConfig& cfg, int i, int j) {
  const SitePair sp = detail::checked_pair(cfg, i, j, "permutation_operator");
  const auto st = detail::strides(cfg);
  const std::size_t si = st[static_cast<std::size_t>(sp.first - 1)];
  const std::size_t sj = st[static_cast<std::size_t>(sp.second - 1)];
  const int n = cfg.spin_dim();
  OperatorMatrix p = OperatorMatrix::Zero(cfg.rows(), cfg.rows());
  for (std::size_t col = 0; col < cfg.dimension(); ++col) {
    const int ai = detail::digit(col, si, n);
    const int aj = detail::digit(col, sj, n);
    const std::size_t row = col + static_cast<std::size_t>(aj - ai) * si +
                            static_cast<std::size_t>(ai - aj) * sj;
    p(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return p;
}

/// P^{ij} = +p^{ij} for bosons, -p^{ij} for fermions.
inline OperatorMatrix statistics_permutation(const SpinConfig& cfg, int i, int j) {
  return cfg.exchange_sign() * permutation_operator(cfg, i, j);
}

/// Two-site swap on C^n (x) C^n.
inline OperatorMatrix two_site_swap(int n) {
  return permutation_operator(SpinConfig(2, n, Statistics::Boson), 1, 2);
}

/// h_{ij}: h acts on sites (i, j), identity elsewhere. The first tensor slot
/// of h sits at site i, so embed(h, j, i) = p^{ij} embed(h, i, j) p^{ij}.
inline OperatorMatrix embed_two_site(const SpinConfig& cfg, const Matrix& h, int i,
                                     int j) {
  const SitePair sp = detail::checked_pair(cfg, i, j, "embed_two_site");
  const auto n2 = static_cast<Eigen::Index>(cfg.pair_dimension());
  if (h.rows() != n2 || h.cols() != n2)
    throw ValidationError("embed_two_site: operator is " + std::to_string(h.rows()) +
                          "x" + std::to_string(h.cols()) + ", expected " +
                          std::to_string(n2) + "x" + std::to_string(n2));
  const auto st = detail::strides(cfg);
  const std::size_t si = st[static_cast<std::size_t>(sp.first - 1)];
  const std::size_t sj = st[static_cast<std::size_t>(sp.second - 1)];
  const int n = cfg.spin_dim();
  OperatorMatrix out = OperatorMatrix::Zero(cfg.rows(), cfg.rows());
  for (std::size_t col = 0; col < cfg.dimension(); ++col) {
    const int ai = detail::digit(col, si, n);
    const int aj = detail::digit(col, sj, n);
    const std::size_t base = col - static_cast<std::size_t>(ai) * si -
                             static_cast<std::size_t>(aj) * sj;
    const Eigen::Index hc = ai * n + aj;
    for (int bi = 0; bi < n; ++bi) {
      for (int bj = 0; bj < n; ++bj) {
        const Complex v = h(bi * n + bj, hc);
        if (v == Complex(0.0)) continue;
        const std::size_t row = base + static_cast<std::size_t>(bi) * si +
                                static_cast<std::size_t>(bj) * sj;
        out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
      }
    }
  }
  return out;
}

/// Applies the embedded two-site operator to a vector without forming it.
inline Vector apply_two_site(const SpinConfig& cfg, const Matrix& h, int i, int j,
                             const Vector& v) {
  const SitePair sp = detail::checked_pair(cfg, i, j, "apply_two_site");
  const auto n2 = static_cast<Eigen::Index>(cfg.pair_dimension());
  if (h.rows() != n2 || h.cols() != n2 || v.size() != cfg.rows())
    throw ValidationError("apply_two_site: dimension mismatch");
  const auto st = detail::strides(cfg);
  const std::size_t si = st[static_cast<std::size_t>(sp.first - 1)];
  const std::size_t sj = st[static_cast<std::size_t>(sp.second - 1)];
  const int n = cfg.spin_dim();
  Vector out = Vector::Zero(v.size());
  Vector local(n2);
  for (std::size_t flat = 0; flat < cfg.dimension(); ++flat) {
    // Visit each (i, j)-fiber once, from its all-zero representative.
    if (detail::digit(flat, si, n) != 0 || detail::digit(flat, sj, n) != 0) continue;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        local(a * n + b) = v(static_cast<Eigen::Index>(
            flat + static_cast<std::size_t>(a) * si + static_cast<std::size_t>(b) * sj));
    const Vector mapped = h * local;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out(static_cast<Eigen::Index>(flat + static_cast<std::size_t>(a) * si +
                                      static_cast<std::size_t>(b) * sj)) =
            mapped(a * n + b);
  }
  return out;
}

/// Orthonormal basis (as columns) of { v : p^{ij} v = parity * v for all i<j },
/// parity = +1 (totally symmetric) or -1 (totally antisymmetric). Built from
/// orbits of multi-indices under S_N, so it is exact.
inline Matrix exchange_eigenspace_basis(const SpinConfig& cfg, int parity) {
  if (parity != 1 && parity != -1)
    throw ValidationError("exchange_eigenspace_basis: parity must be +1 or -1");
  const auto N = static_cast<std::size_t>(cfg.particles());
  std::vector<Vector> columns;
  for (std::size_t flat = 0; flat < cfg.dimension(); ++flat) {
    MultiIndex idx = decode(flat, cfg);
    // One representative per orbit: the non-decreasing multi-index.
    if (!std::is_sorted(idx.components.begin(), idx.components.end())) continue;
    const bool repeated =
        std::adjacent_find(idx.components.begin(), idx.components.end()) !=
        idx.components.end();
    if (parity == -1 && repeated) continue;
    Vector col = Vector::Zero(cfg.rows());
    std::vector<std::size_t> order(N);
    for (std::size_t k = 0; k < N; ++k) order[k] = k;
    do {
      // Sign of the position permutation `order`, by counting inversions.
      int inversions = 0;
      for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = a + 1; b < N; ++b)
          if (order[a] > order[b]) ++inversions;
      MultiIndex permuted;
      permuted.components.resize(N);
      for (std::size_t k = 0; k < N; ++k) permuted.components[k] = idx.components[order[k]];
      const double s = (parity == -1 && (inversions % 2 == 1)) ? -1.0 : 1.0;
      col(static_cast<Eigen::Index>(encode(permuted, cfg))) += s;
    } while (std::next_permutation(order.begin(), order.end()));
    col.normalize();
    columns.push_back(std::move(col));
  }
  Matrix basis(cfg.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c)
    basis.col(static_cast<Eigen::Index>(c)) = columns[c];
  return basis;
}

/// Entrywise max-norm.
inline double max_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace spincontact
