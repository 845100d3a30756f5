#pragma once

// Bethe-ansatz coefficient propagation, wavefunction evaluation and
// contact boundary-condition residuals.
//
// In the fundamental region x_1 < ... < x_N the wavefunction is
//   Psi_F(x) = sum_pi u_pi exp(i sum_l k_{pi(l)} x_l),
// with pi the sequence of momentum labels read left to right. Any other
// region is reached by exchange symmetry: if x_{s(1)} < ... < x_{s(N)} then
//   Psi(x) = sgn(s)^F  T_s Psi_F(x_{s(1)}, ..., x_{s(N)}),
//   (T_s v)_{a_1..a_N} = v_{a_{s(1)}..a_{s(N)}},
// where sgn(s)^F is the parity for fermions and 1 for bosons.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "spincontact/yang_baxter.hpp"

namespace spincontact {

using Permutation = std::vector<int>;

inline std::string to_string(const Permutation& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i != 0 && p.size() > 9) s += ',';
    s += std::to_string(p[i]);
  }
  return s;
}

inline int parity(const Permutation& p) {
  int inversions = 0;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b)
      if (p[a] > p[b]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

/// Largest N accepted by the N!-term machinery.
inline constexpr int kMaxBetheParticles = 8;
/// Path discrepancy above which propagation is declared inconsistent.
inline constexpr double kInconsistencyTol = 1e-8;

enum class ContactKind { Delta, Separated };

struct PathDiscrepancy {
  Permutation permutation;
  Permutation first_parent;
  Permutation second_parent;
  double value = 0.0;
};

struct PropagationOptions {
  double inconsistency_tol = kInconsistencyTol;
  bool throw_on_inconsistency = true;
};

/// The N! coefficient vectors u_pi, indexed by momentum permutation.
class BetheCoefficients {
 public:
  BetheCoefficients(SpinConfig cfg, MomentumSet ks, ContactKind kind)
      : cfg_(std::move(cfg)), ks_(std::move(ks)), kind_(kind) {
    Permutation p(static_cast<std::size_t>(cfg_.particles()));
    std::iota(p.begin(), p.end(), 1);
    do {
      index_.emplace(p, perms_.size());
      perms_.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    table_.resize(perms_.size());
  }

  const SpinConfig& config() const noexcept { return cfg_; }
  const MomentumSet& momenta() const noexcept { return ks_; }
  ContactKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return perms_.size(); }
  const std::vector<Permutation>& permutations() const noexcept { return perms_; }

  std::size_t index_of(const Permutation& p) const {
    const auto it = index_.find(p);
    if (it == index_.end())
      throw ValidationError("BetheCoefficients: not a permutation of 1..N: " + to_string(p));
    return it->second;
  }

  const Vector& coefficient(const Permutation& p) const { return table_[index_of(p)]; }
  const Vector& coefficient(std::size_t i) const { return table_.at(i); }

  /// Largest relative discrepancy between two paths to the same permutation.
  double max_discrepancy() const noexcept { return worst_.value; }
  const PathDiscrepancy& worst_discrepancy() const noexcept { return worst_; }

  /// 2-norm of u_identity; residuals are reported relative to it.
  double reference_norm() const noexcept { return reference_norm_; }

 private:
  template <typename Kernel>
  friend BetheCoefficients propagate_with_kernel(const SpinConfig&, const MomentumSet&,
                                                 const Vector&, ContactKind, Kernel&&,
                                                 const PropagationOptions&);

  SpinConfig cfg_;
  MomentumSet ks_;
  ContactKind kind_;
  std::vector<Permutation> perms_;
  std::map<Permutation, std::size_t> index_;
  std::vector<Vector> table_;
  PathDiscrepancy worst_;
  double reference_norm_ = 1.0;
};

/// Breadth-first propagation over adjacent transpositions. `kernel(a, b)`
/// returns the two-site operator taking labels (a, b) at sites (j, j+1) to
/// (b, a). Every second arrival at a permutation is compared to the first.
template <typename Kernel>
BetheCoefficients propagate_with_kernel(const SpinConfig& cfg, const MomentumSet& ks,
                                        const Vector& u_identity, ContactKind kind,
                                        Kernel&& kernel, const PropagationOptions& opts) {
  const int N = cfg.particles();
  if (N > kMaxBetheParticles)
    throw ValidationError("propagate_coefficients: N = " + std::to_string(N) +
                          " exceeds " + std::to_string(kMaxBetheParticles));
  if (ks.size() != static_cast<std::size_t>(N))
    throw ValidationError("propagate_coefficients: need exactly N momenta");
  if (u_identity.size() != cfg.rows())
    throw ValidationError("propagate_coefficients: u_identity must have dimension n^N");
  const double ref = u_identity.norm();
  if (!(ref > 0.0)) throw ValidationError("propagate_coefficients: u_identity is zero");

  BetheCoefficients out(cfg, ks, kind);
  out.reference_norm_ = ref;
  std::vector<bool> seen(out.size(), false);
  std::vector<std::size_t> parent(out.size(), 0);
  std::map<std::pair<int, int>, Matrix> cache;
  auto cached = [&](int a, int b) -> const Matrix& {
    auto it = cache.find({a, b});
    if (it == cache.end()) it = cache.emplace(std::make_pair(a, b), kernel(a, b)).first;
    return it->second;
  };

  const std::size_t start = out.index_of(out.perms_.front());
  out.table_[start] = u_identity;
  seen[start] = true;
  parent[start] = start;
  std::deque<std::size_t> queue{start};
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    const Permutation& p = out.perms_[cur];
    for (int j = 1; j < N; ++j) {
      Permutation q = p;
      std::swap(q[static_cast<std::size_t>(j - 1)], q[static_cast<std::size_t>(j)]);
      const std::size_t next = out.index_of(q);
      const Matrix& y = cached(p[static_cast<std::size_t>(j - 1)], p[static_cast<std::size_t>(j)]);
      Vector v = apply_two_site(cfg, y, j, j + 1, out.table_[cur]);
      if (!seen[next]) {
        out.table_[next] = std::move(v);
        seen[next] = true;
        parent[next] = cur;
        queue.push_back(next);
        continue;
      }
      const double d = (v - out.table_[next]).cwiseAbs().maxCoeff() / ref;
      if (d > out.worst_.value) {
        out.worst_ = {q, out.perms_[parent[next]], p, d};
      }
      if (opts.throw_on_inconsistency && d > opts.inconsistency_tol) {
        throw InconsistencyError(
            "propagate_coefficients: paths via " + to_string(out.perms_[parent[next]]) +
                " and " + to_string(p) + " reach " + to_string(q) +
                " with relative discrepancy " + std::to_string(d) +
                " (Yang-Baxter consistency violated)",
            to_string(q), to_string(out.perms_[parent[next]]), to_string(p), d);
      }
    }
  }
  return out;
}

/// Propagates u_identity through the delta-contact Y-operators.
inline BetheCoefficients propagate_coefficients(const SpinConfig& cfg, const CouplingMatrix& h,
                                                const MomentumSet& ks, const Vector& u_identity,
                                                const PropagationOptions& opts = {}) {
  if (h.spin_dim() != cfg.spin_dim())
    throw ValidationError("propagate_coefficients: coupling spin dimension differs from config");
  auto kernel = [&](int a, int b) {
    return y_kernel(h.matrix(), cfg.statistics(), pair_momentum(ks, a, b));
  };
  if (ks.size() != static_cast<std::size_t>(cfg.particles()))
    throw ValidationError("propagate_coefficients: need exactly N momenta");
  return propagate_with_kernel(cfg, ks, u_identity, ContactKind::Delta, kernel, opts);
}

/// Propagation for separated conditions with G+ = G- = G.
inline BetheCoefficients propagate_separated(const SpinConfig& cfg, const SeparatedModel& model,
                                             const MomentumSet& ks, const Vector& u_identity,
                                             const PropagationOptions& opts = {}) {
  if (model.spin_dim() != cfg.spin_dim())
    throw ValidationError("propagate_separated: G spin dimension differs from config");
  if (!model.symmetric())
    throw ValidationError("propagate_separated: Bethe solution requires G+ = G-");
  if (ks.size() != static_cast<std::size_t>(cfg.particles()))
    throw ValidationError("propagate_separated: need exactly N momenta");
  auto kernel = [&](int a, int b) {
    return separated_kernel(model.g_plus(), pair_momentum(ks, a, b));
  };
  return propagate_with_kernel(cfg, ks, u_identity, ContactKind::Separated, kernel, opts);
}

/// Coordinates x_1..x_N.
struct SpacePoint {
  std::vector<double> x;
};

struct WavefunctionSample {
  Vector value;
  std::vector<Vector> gradient;  ///< d/dx_i, i = 1..N
  Vector laplacian;              ///< sum_i d^2/dx_i^2, term by term
};

namespace detail {

/// Psi_F and its derivatives at y, valid up to the region boundary.
inline WavefunctionSample evaluate_fundamental(const BetheCoefficients& c,
                                               const std::vector<double>& y) {
  const auto N = static_cast<std::size_t>(c.config().particles());
  const Eigen::Index dim = c.config().rows();
  WavefunctionSample s;
  s.value = Vector::Zero(dim);
  s.laplacian = Vector::Zero(dim);
  s.gradient.assign(N, Vector::Zero(dim));
  const Complex i(0.0, 1.0);
  for (std::size_t t = 0; t < c.size(); ++t) {
    const Permutation& p = c.permutations()[t];
    Complex exponent{};
    Complex second{};
    for (std::size_t l = 0; l < N; ++l) {
      const Complex k = c.momenta().at(p[l]);
      exponent += i * k * y[l];
      second += (i * k) * (i * k);
    }
    const Vector term = c.coefficient(t) * std::exp(exponent);
    s.value += term;
    s.laplacian += second * term;
    for (std::size_t l = 0; l < N; ++l) s.gradient[l] += (i * c.momenta().at(p[l])) * term;
  }
  return s;
}

/// (T_s v)_{a} = v_{a o s} for position->particle map s (0-based).
inline Vector relabel_spins(const SpinConfig& cfg, const std::vector<std::size_t>& s,
                            const Vector& v) {
  const auto N = static_cast<std::size_t>(cfg.particles());
  Vector out(v.size());
  MultiIndex t;
  t.components.resize(N);
  for (std::size_t flat = 0; flat < cfg.dimension(); ++flat) {
    const MultiIndex a = decode(flat, cfg);
    for (std::size_t j = 0; j < N; ++j) t.components[j] = a.components[s[j]];
    out(static_cast<Eigen::Index>(flat)) = v(static_cast<Eigen::Index>(encode(t, cfg)));
  }
  return out;
}

inline Matrix embed_block(const SpinConfig& cfg, const Matrix& block, int j, const char* who) {
  if (block.rows() != static_cast<Eigen::Index>(cfg.pair_dimension()) ||
      block.cols() != block.rows())
    throw ValidationError(std::string(who) + ": boundary blocks must be n^2 x n^2");
  return embed_two_site(cfg, block, j, j + 1);
}

}  // namespace detail

/// Psi(x) and its analytic gradient at a point off every hyperplane.
inline WavefunctionSample evaluate(const BetheCoefficients& c, const SpacePoint& pt) {
  const auto N = static_cast<std::size_t>(c.config().particles());
  if (pt.x.size() != N) throw ValidationError("evaluate: point must have N coordinates");
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pt.x[a] < pt.x[b]; });
  std::vector<double> y(N);
  for (std::size_t j = 0; j < N; ++j) y[j] = pt.x[order[j]];
  for (std::size_t j = 0; j + 1 < N; ++j) {
    const double scale = std::max({1.0, std::abs(y[j]), std::abs(y[j + 1])});
    if (y[j + 1] - y[j] <= 1e-12 * scale)
      throw HyperplaneError("evaluate: coordinates of particles " +
                            std::to_string(order[j] + 1) + " and " +
                            std::to_string(order[j + 1] + 1) +
                            " coincide; use boundary_residual for hyperplanes");
  }
  const WavefunctionSample f = detail::evaluate_fundamental(c, y);

  Permutation sorted(N);
  for (std::size_t j = 0; j < N; ++j) sorted[j] = static_cast<int>(order[j]) + 1;
  const double sign =
      c.config().statistics() == Statistics::Fermion ? static_cast<double>(parity(sorted)) : 1.0;
  WavefunctionSample s;
  s.value = sign * detail::relabel_spins(c.config(), order, f.value);
  s.laplacian = sign * detail::relabel_spins(c.config(), order, f.laplacian);
  s.gradient.resize(N);
  // Particle order[j] sits at position j.
  for (std::size_t j = 0; j < N; ++j)
    s.gradient[order[j]] = sign * detail::relabel_spins(c.config(), order, f.gradient[j]);
  return s;
}

/// N-1 strictly increasing coordinates. For hyperplane j the merged pair
/// x_j = x_{j+1} takes coordinate j, the others fill the remaining slots.
struct TransversePoint {
  std::vector<double> coords;
};

struct BoundaryResidual {
  double continuity_max = 0.0;
  double jump_max = 0.0;
};

struct SeparatedResidual {
  double minus_side = 0.0;  ///< -phi'(0-) - G- phi(0-)
  double plus_side = 0.0;   ///<  phi'(0+) - G+ phi(0+)
};

namespace detail {

struct OneSided {
  Vector value_minus, deriv_minus, value_plus, deriv_plus;
};

/// One-sided limits across x_j = x_{j+1} in relative coordinate x = x_j - x_{j+1};
/// the fundamental region is the 0- side.
inline OneSided one_sided_limits(const BetheCoefficients& c, int j, const TransversePoint& tp) {
  const auto N = static_cast<std::size_t>(c.config().particles());
  if (tp.coords.size() + 1 != N)
    throw ValidationError("boundary_residual: transverse point needs N-1 coordinates");
  for (std::size_t a = 0; a + 1 < tp.coords.size(); ++a)
    if (!(tp.coords[a] < tp.coords[a + 1]))
      throw HyperplaneError("boundary_residual: sample lies on a second hyperplane");
  std::vector<double> y;
  y.reserve(N);
  const auto jj = static_cast<std::size_t>(j - 1);
  for (std::size_t a = 0; a < tp.coords.size(); ++a) {
    y.push_back(tp.coords[a]);
    if (a == jj) y.push_back(tp.coords[a]);
  }
  const WavefunctionSample f = evaluate_fundamental(c, y);
  const Vector& gj = f.gradient[jj];
  const Vector& gk = f.gradient[jj + 1];
  const Matrix P = statistics_permutation(c.config(), j, j + 1);
  OneSided o;
  o.value_minus = f.value;
  o.deriv_minus = (gj - gk) / 2.0;
  o.value_plus = P * f.value;
  o.deriv_plus = P * ((gk - gj) / 2.0);
  return o;
}

inline void check_hyperplane(const BetheCoefficients& c, int j) {
  if (j < 1 || j >= c.config().particles())
    throw ValidationError("boundary_residual: hyperplane index must be in [1, N-1]");
}

}  // namespace detail

/// Residuals of (psi, psi')_{0+} = [[A B][C D]] (psi, psi')_{0-} across x_j = x_{j+1},
/// blocks acting on sites (j, j+1).
inline BoundaryResidual boundary_residual(const BetheCoefficients& c, int j, const BlockBC& bc,
                                          const std::vector<TransversePoint>& samples) {
  detail::check_hyperplane(c, j);
  const SpinConfig& cfg = c.config();
  const Matrix A = detail::embed_block(cfg, bc.A, j, "boundary_residual");
  const Matrix B = detail::embed_block(cfg, bc.B, j, "boundary_residual");
  const Matrix C = detail::embed_block(cfg, bc.C, j, "boundary_residual");
  const Matrix D = detail::embed_block(cfg, bc.D, j, "boundary_residual");
  BoundaryResidual r;
  for (const TransversePoint& tp : samples) {
    const auto o = detail::one_sided_limits(c, j, tp);
    const Vector cont = o.value_plus - A * o.value_minus - B * o.deriv_minus;
    const Vector jump = o.deriv_plus - C * o.value_minus - D * o.deriv_minus;
    r.continuity_max = std::max(r.continuity_max, cont.cwiseAbs().maxCoeff());
    r.jump_max = std::max(r.jump_max, jump.cwiseAbs().maxCoeff());
  }
  r.continuity_max /= c.reference_norm();
  r.jump_max /= c.reference_norm();
  return r;
}

/// Residuals of the separated conditions on each side of x_j = x_{j+1}.
inline SeparatedResidual boundary_residual(const BetheCoefficients& c, int j,
                                           const SeparatedModel& model,
                                           const std::vector<TransversePoint>& samples) {
  detail::check_hyperplane(c, j);
  const SpinConfig& cfg = c.config();
  const Matrix gp = detail::embed_block(cfg, model.g_plus(), j, "boundary_residual");
  const Matrix gm = detail::embed_block(cfg, model.g_minus(), j, "boundary_residual");
  SeparatedResidual r;
  for (const TransversePoint& tp : samples) {
    const auto o = detail::one_sided_limits(c, j, tp);
    const Vector minus = -o.deriv_minus - gm * o.value_minus;
    const Vector plus = o.deriv_plus - gp * o.value_plus;
    r.minus_side = std::max(r.minus_side, minus.cwiseAbs().maxCoeff());
    r.plus_side = std::max(r.plus_side, plus.cwiseAbs().maxCoeff());
  }
  r.minus_side /= c.reference_norm();
  r.plus_side /= c.reference_norm();
  return r;
}

/// Seeded transverse samples: N-1 sorted draws in [lo, hi) pairwise at least
/// min_gap apart.
inline std::vector<TransversePoint> random_transverse_samples(Xoshiro256& rng, int particles,
                                                              std::size_t count,
                                                              double lo = -2.0, double hi = 2.0,
                                                              double min_gap = 1e-3) {
  std::vector<TransversePoint> out;
  out.reserve(count);
  const auto m = static_cast<std::size_t>(std::max(particles - 1, 0));
  while (out.size() < count) {
    TransversePoint tp;
    tp.coords.resize(m);
    for (double& v : tp.coords) v = rng.uniform(lo, hi);
    std::sort(tp.coords.begin(), tp.coords.end());
    bool ok = true;
    for (std::size_t a = 0; a + 1 < m; ++a)
      if (tp.coords[a + 1] - tp.coords[a] < min_gap) ok = false;
    if (ok) out.push_back(std::move(tp));
  }
  return out;
}

/// E = sum_j k_j^2.
inline Complex energy(const MomentumSet& ks) {
  if (ks.size() == 0) throw ValidationError("energy: empty momentum set (N >= 1)");
  Complex e{};
  for (const Complex& k : ks.k) e += k * k;
  return e;
}

}  // namespace spincontact
