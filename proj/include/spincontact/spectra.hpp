#pragma once

// Bound states of the delta and separated families, and scattering matrices.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "spincontact/bethe.hpp"

namespace spincontact {

/// Singular-value threshold of the rank-revealing eigenspace intersections.
inline constexpr double kNullspaceTol = 1e-10;
/// Eigenvalues of h (or G) closer than this are treated as one level.
inline constexpr double kClusterTol = 1e-9;
/// Tolerance on the simultaneous-eigenvector invariants of a mode.
inline constexpr double kModeTol = 1e-10;

/// Bound state psi = v exp(kappa * sum_{i>j} |x_i - x_j|), kappa = (c + a L)/2 < 0.
struct BoundStateMode {
  double lambda_val = 0.0;
  Vector spin_vector;
  double kappa = 0.0;
  MomentumSet momenta;
  double energy = 0.0;
  double a = 1.0;
  double c = 0.0;
};

/// Sign table eps_{kl} = +-1 for k > l, stored in the order (2,1), (3,1), (3,2), (4,1), ...
class SignTable {
 public:
  SignTable(int particles, std::vector<int> signs) : n_(particles), signs_(std::move(signs)) {
    if (signs_.size() != static_cast<std::size_t>(particles * (particles - 1) / 2))
      throw ValidationError("SignTable: need N(N-1)/2 signs");
    for (int s : signs_)
      if (s != 1 && s != -1) throw ValidationError("SignTable: signs must be +-1");
  }

  /// Table number `bits` of 2^{N(N-1)/2}: bit t set means eps = -1 at slot t.
  static SignTable from_bits(int particles, unsigned long bits) {
    std::vector<int> s(static_cast<std::size_t>(particles * (particles - 1) / 2));
    for (std::size_t t = 0; t < s.size(); ++t) s[t] = ((bits >> t) & 1UL) ? -1 : 1;
    return SignTable(particles, std::move(s));
  }

  int particles() const noexcept { return n_; }

  /// eps_{kl}, symmetric in its arguments.
  int epsilon(int k, int l) const {
    if (k == l || k < 1 || l < 1 || k > n_ || l > n_)
      throw ValidationError("SignTable: invalid pair");
    if (k < l) std::swap(k, l);
    // k > l: slot (k-1)(k-2)/2 + (l-1).
    return signs_[static_cast<std::size_t>((k - 1) * (k - 2) / 2 + (l - 1))];
  }

  const std::vector<int>& signs() const noexcept { return signs_; }

  std::string to_string() const {
    std::string s;
    for (int v : signs_) s += v > 0 ? '+' : '-';
    return s;
  }

 private:
  int n_;
  std::vector<int> signs_;
};

struct SeparatedBoundState {
  double lambda_val = 0.0;
  SignTable epsilon;
  Vector spin_vector;        ///< first basis vector of the eigenspace
  Matrix spin_basis;         ///< orthonormal basis, one column per vector
  MomentumSet momenta;
  double energy = 0.0;
};

struct SeparatedSpectrum {
  std::vector<SeparatedBoundState> states;
  /// (lambda, table) pairs whose simultaneous eigenspace is empty.
  std::vector<std::pair<double, SignTable>> empty_tables;
};

struct ScatteringMatrix {
  OperatorMatrix matrix;
  MomentumSet ks;
};

namespace detail {

/// Orthonormal basis of ker(op * basis) expressed in the ambient space.
inline Matrix restrict_kernel(const Matrix& op, const Matrix& basis) {
  if (basis.cols() == 0) return basis;
  const Matrix m = op * basis;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
  Eigen::Index rank = 0;
  for (Eigen::Index a = 0; a < sv.size(); ++a)
    if (sv(a) > kNullspaceTol * scale) ++rank;
  const Matrix null = svd.matrixV().rightCols(basis.cols() - rank);
  Matrix out = basis * null;
  if (out.cols() > 0) {
    Eigen::HouseholderQR<Matrix> qr(out);
    out = qr.householderQ() * Matrix::Identity(out.rows(), out.cols());
  }
  return out;
}

/// Hermitian eigenvalues grouped within kClusterTol; returns group means.
inline std::vector<double> clustered_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> levels;
  std::vector<int> counts;
  for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) {
    const double v = es.eigenvalues()(a);
    if (!levels.empty() && v - levels.back() / counts.back() < kClusterTol) {
      levels.back() += v;
      ++counts.back();
    } else {
      levels.push_back(v);
      counts.push_back(1);
    }
  }
  for (std::size_t i = 0; i < levels.size(); ++i) levels[i] /= counts[i];
  return levels;
}

inline Matrix shifted(const Matrix& m, double lambda) {
  return m - lambda * Matrix::Identity(m.rows(), m.cols());
}

}  // namespace detail

/// Closed-form bound-state energy -(c + a L)^2 N (N^2 - 1) / 12.
inline double bound_state_energy(double lambda, double a, double c, int particles) {
  const double s = c + a * lambda;
  const double n = particles;
  return -s * s * n * (n * n - 1.0) / 12.0;
}

/// Fundamental-region momenta k_j = i kappa (N + 1 - 2j), k_N = -k_1.
inline MomentumSet bound_state_momenta(double kappa, int particles) {
  std::vector<Complex> k(static_cast<std::size_t>(particles));
  for (int j = 1; j <= particles; ++j)
    k[static_cast<std::size_t>(j - 1)] = Complex(0.0, kappa * (particles + 1 - 2 * j));
  return MomentumSet(std::move(k));
}

/// Simultaneous eigenvectors v of every h_ij with P^{ij} v = v, c + a L < 0.
/// One mode per basis vector of each (L, eigenspace) intersection.
inline std::vector<BoundStateMode> n_body_bound_states(const SpinConfig& cfg,
                                                       const CouplingMatrix& h, double a = 1.0,
                                                       double c = 0.0) {
  if (cfg.particles() < 2) throw ValidationError("n_body_bound_states: needs N >= 2");
  if (h.spin_dim() != cfg.spin_dim())
    throw ValidationError("n_body_bound_states: coupling spin dimension differs from config");
  const int N = cfg.particles();
  // P v = v for all pairs means p v = +-v according to statistics.
  const int spin_parity = cfg.statistics() == Statistics::Boson ? 1 : -1;
  const Matrix sym = exchange_eigenspace_basis(cfg, spin_parity);
  std::vector<BoundStateMode> modes;
  for (double lambda : detail::clustered_eigenvalues(h.matrix())) {
    const double s = c + a * lambda;
    if (!(s < 0.0)) continue;
    Matrix basis = sym;
    for (int i = 1; i <= N && basis.cols() > 0; ++i)
      for (int j = i + 1; j <= N && basis.cols() > 0; ++j)
        basis = detail::restrict_kernel(
            embed_two_site(cfg, detail::shifted(h.matrix(), lambda), i, j), basis);
    const double kappa = s / 2.0;
    const MomentumSet ks = bound_state_momenta(kappa, N);
    const double e = bound_state_energy(lambda, a, c, N);
    const double cross = std::abs(energy(ks) - Complex(e));
    if (!(cross < 1e-12 * std::max(1.0, std::abs(e))))
      throw Error("n_body_bound_states: sum k^2 = " + std::to_string(energy(ks).real()) +
                  " disagrees with closed form " + std::to_string(e));
    for (Eigen::Index col = 0; col < basis.cols(); ++col)
      modes.push_back({lambda, basis.col(col), kappa, ks, e, a, c});
  }
  return modes;
}

/// Two-particle modes u with h u = L u and P^{12} u = u, energy -(c + a L)^2 / 2.
inline std::vector<BoundStateMode> two_body_bound_states(const CouplingMatrix& h,
                                                         Statistics stats = Statistics::Boson,
                                                         double a = 1.0, double c = 0.0) {
  return n_body_bound_states(SpinConfig(2, h.spin_dim(), stats), h, a, c);
}

/// Largest violation of h_ij v = L v and P^{ij} v = v over all pairs.
inline double mode_invariant_residual(const SpinConfig& cfg, const CouplingMatrix& h,
                                      const BoundStateMode& m) {
  double r = 0.0;
  for (int i = 1; i <= cfg.particles(); ++i)
    for (int j = i + 1; j <= cfg.particles(); ++j) {
      const Vector hv = apply_two_site(cfg, h.matrix(), i, j, m.spin_vector);
      r = std::max(r, (hv - m.lambda_val * m.spin_vector).cwiseAbs().maxCoeff());
      const Vector pv = statistics_permutation(cfg, i, j) * m.spin_vector;
      r = std::max(r, (pv - m.spin_vector).cwiseAbs().maxCoeff());
    }
  return r;
}

/// Point with x_i = x_j = `merged` and the other particles at `others`
/// (N-2 coordinates, assigned in particle order).
struct PairHyperplanePoint {
  double merged = 0.0;
  std::vector<double> others;
};

namespace detail {

inline std::vector<double> assemble_point(int particles, int i, int j,
                                          const PairHyperplanePoint& p) {
  if (p.others.size() + 2 != static_cast<std::size_t>(particles))
    throw ValidationError("bound-state residual: sample needs N-2 transverse coordinates");
  std::vector<double> x(static_cast<std::size_t>(particles));
  std::size_t t = 0;
  for (int a = 1; a <= particles; ++a)
    x[static_cast<std::size_t>(a - 1)] = (a == i || a == j) ? p.merged : p.others[t++];
  for (int u = 1; u <= particles; ++u)
    for (int v = u + 1; v <= particles; ++v) {
      if (u == i && v == j) continue;
      if (std::abs(x[static_cast<std::size_t>(u - 1)] - x[static_cast<std::size_t>(v - 1)]) < 1e-12)
        throw HyperplaneError("bound-state residual: sample lies on a second hyperplane");
    }
  return x;
}

inline double pair_sum(const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = a + 1; b < x.size(); ++b) s += std::abs(x[a] - x[b]);
  return s;
}

}  // namespace detail

/// Delta-contact residuals of the closed-form psi^N at x_i = x_j: continuity
/// and jump phi'(0+) - phi'(0-) = h_ij phi(0), relative to |v|.
inline BoundaryResidual bound_state_boundary_residual(const SpinConfig& cfg,
                                                      const CouplingMatrix& h,
                                                      const BoundStateMode& m, int i, int j,
                                                      const std::vector<PairHyperplanePoint>& samples) {
  detail::checked_pair(cfg, i, j, "bound_state_boundary_residual");
  if (i > j) std::swap(i, j);
  const Matrix hij = embed_two_site(cfg, h.matrix(), i, j);
  BoundaryResidual r;
  for (const auto& s : samples) {
    const std::vector<double> x = detail::assemble_point(cfg.particles(), i, j, s);
    const Vector value = m.spin_vector * std::exp(m.kappa * detail::pair_sum(x));
    // Only |x_i - x_j| = |x| has a one-sided derivative in x = x_i - x_j; the
    // other pair terms cancel on the hyperplane.
    const Vector value_minus = value, value_plus = value;
    const Vector deriv_minus = -m.kappa * value;
    const Vector deriv_plus = m.kappa * value;
    r.continuity_max = std::max(r.continuity_max, (value_plus - value_minus).cwiseAbs().maxCoeff());
    r.jump_max = std::max(r.jump_max,
                          (deriv_plus - deriv_minus - hij * value_minus).cwiseAbs().maxCoeff());
  }
  const double ref = m.spin_vector.norm();
  r.continuity_max /= ref;
  r.jump_max /= ref;
  return r;
}

/// Random points on x_i = x_j with the other coordinates distinct.
inline std::vector<PairHyperplanePoint> random_pair_samples(Xoshiro256& rng, int particles,
                                                            std::size_t count, double lo = -2.0,
                                                            double hi = 2.0) {
  std::vector<PairHyperplanePoint> out;
  while (out.size() < count) {
    PairHyperplanePoint p;
    p.merged = rng.uniform(lo, hi);
    std::vector<double> all{p.merged};
    for (int a = 0; a < particles - 2; ++a) p.others.push_back(rng.uniform(lo, hi));
    all.insert(all.end(), p.others.begin(), p.others.end());
    std::sort(all.begin(), all.end());
    bool ok = true;
    for (std::size_t a = 0; a + 1 < all.size(); ++a)
      if (all[a + 1] - all[a] < 1e-3) ok = false;
    if (ok) out.push_back(std::move(p));
  }
  return out;
}

inline double separated_bound_state_energy(double lambda, int particles) {
  const double n = particles;
  return -lambda * lambda * n * (n * n - 1.0) / 3.0;
}

/// k_j = i lambda (N + 1 - 2j).
inline MomentumSet separated_bound_state_momenta(double lambda, int particles) {
  return bound_state_momenta(lambda, particles);
}

/// Largest N(N-1)/2 for which all sign tables are enumerated.
inline constexpr int kMaxSignTableBits = 20;

/// For every eigenvalue lambda < 0 of G and every sign table eps, the space of
/// v with P^{ij} v = eps_ij v and G_ij v = lambda v for all pairs.
inline SeparatedSpectrum separated_bound_states(const SeparatedModel& model,
                                                const SpinConfig& cfg) {
  if (!model.symmetric())
    throw ValidationError("separated_bound_states: requires G+ = G-");
  if (model.spin_dim() != cfg.spin_dim())
    throw ValidationError("separated_bound_states: G spin dimension differs from config");
  if (cfg.particles() < 2) throw ValidationError("separated_bound_states: needs N >= 2");
  const int N = cfg.particles();
  const int slots = N * (N - 1) / 2;
  if (slots > kMaxSignTableBits)
    throw ValidationError("separated_bound_states: too many sign tables");
  const Matrix& g = model.g_plus();
  SeparatedSpectrum out;
  const Matrix identity = Matrix::Identity(cfg.rows(), cfg.rows());
  for (double lambda : detail::clustered_eigenvalues(g)) {
    if (!(lambda < 0.0)) continue;
    // G-compatibility is independent of eps; intersect it once.
    Matrix g_space = identity;
    for (int i = 1; i <= N && g_space.cols() > 0; ++i)
      for (int j = i + 1; j <= N && g_space.cols() > 0; ++j)
        g_space = detail::restrict_kernel(embed_two_site(cfg, detail::shifted(g, lambda), i, j),
                                          g_space);
    for (unsigned long bits = 0; bits < (1UL << slots); ++bits) {
      SignTable eps = SignTable::from_bits(N, bits);
      Matrix basis = g_space;
      for (int i = 1; i <= N && basis.cols() > 0; ++i)
        for (int j = i + 1; j <= N && basis.cols() > 0; ++j)
          basis = detail::restrict_kernel(
              statistics_permutation(cfg, i, j) - eps.epsilon(i, j) * identity, basis);
      if (basis.cols() == 0) {
        out.empty_tables.emplace_back(lambda, std::move(eps));
        continue;
      }
      SeparatedBoundState st{lambda, std::move(eps), basis.col(0), basis,
                             separated_bound_state_momenta(lambda, N),
                             separated_bound_state_energy(lambda, N)};
      out.states.push_back(std::move(st));
    }
  }
  return out;
}

/// Outward-normal residuals of the closed-form separated bound state at x_i = x_j
/// for every basis vector, relative to |v| = 1.
inline SeparatedResidual separated_state_boundary_residual(
    const SpinConfig& cfg, const SeparatedModel& model, const SeparatedBoundState& st, int i,
    int j, const std::vector<PairHyperplanePoint>& samples) {
  detail::checked_pair(cfg, i, j, "separated_state_boundary_residual");
  if (i > j) std::swap(i, j);
  const Matrix gp = embed_two_site(cfg, model.g_plus(), i, j);
  const Matrix gm = embed_two_site(cfg, model.g_minus(), i, j);
  SeparatedResidual r;
  for (const auto& s : samples) {
    const std::vector<double> x = detail::assemble_point(cfg.particles(), i, j, s);
    // Product of theta factors over pairs other than (i, j) is common to both sides.
    double common = 1.0;
    for (int k = 1; k <= cfg.particles(); ++k)
      for (int l = 1; l < k; ++l) {
        if (k == j && l == i) continue;
        const double xk = x[static_cast<std::size_t>(k - 1)];
        const double xl = x[static_cast<std::size_t>(l - 1)];
        common *= xk > xl ? 1.0 : static_cast<double>(st.epsilon.epsilon(k, l));
      }
    const double radial = std::exp(st.lambda_val * detail::pair_sum(x));
    // 0- side: x_i < x_j, factor theta(x_j - x_i) = 1; 0+ side: eps_ji.
    const double f_minus = common * radial;
    const double f_plus = common * st.epsilon.epsilon(j, i) * radial;
    for (Eigen::Index col = 0; col < st.spin_basis.cols(); ++col) {
      const Vector v = st.spin_basis.col(col);
      const Vector phi_minus = f_minus * v;
      const Vector phi_plus = f_plus * v;
      // Radial part exp(lambda |x|): outward derivative is lambda on both sides.
      const Vector outward_minus = st.lambda_val * phi_minus;
      const Vector outward_plus = st.lambda_val * phi_plus;
      r.minus_side = std::max(r.minus_side, (outward_minus - gm * phi_minus).cwiseAbs().maxCoeff());
      r.plus_side = std::max(r.plus_side, (outward_plus - gp * phi_plus).cwiseAbs().maxCoeff());
    }
  }
  return r;
}

namespace detail {

inline MomentumSet checked_real_increasing(const MomentumSet& ks, const char* who) {
  if (!ks.is_real()) throw ValidationError(std::string(who) + ": momenta must be real");
  for (std::size_t a = 0; a + 1 < ks.size(); ++a)
    if (!(ks[a].real() < ks[a + 1].real()))
      throw ValidationError(std::string(who) + ": momenta must be strictly increasing");
  return ks;
}

/// X_ij = Y^{ij}_{ij} P^{ij}.
inline Matrix exchange_factor(const SpinConfig& cfg, const CouplingMatrix& h,
                              const MomentumSet& ks, int i, int j) {
  return y_operator(cfg, h, ks, {i, j}, {i, j}).matrix * statistics_permutation(cfg, i, j);
}

}  // namespace detail

/// S = [X_21 X_31 ... X_N1][X_32 ... X_N2] ... [X_N(N-1)] for real k_1 < ... < k_N.
inline ScatteringMatrix scattering_matrix(const SpinConfig& cfg, const CouplingMatrix& h,
                                          const MomentumSet& ks) {
  if (ks.size() != static_cast<std::size_t>(cfg.particles()))
    throw ValidationError("scattering_matrix: need exactly N momenta");
  detail::checked_real_increasing(ks, "scattering_matrix");
  const int N = cfg.particles();
  Matrix s = Matrix::Identity(cfg.rows(), cfg.rows());
  for (int j = 1; j < N; ++j)
    for (int i = j + 1; i <= N; ++i) s = s * detail::exchange_factor(cfg, h, ks, i, j);
  return {s, ks};
}

/// <out | S | in>.
inline Complex s_element(const ScatteringMatrix& s, const SpinConfig& cfg,
                         const MultiIndex& out_spins, const MultiIndex& in_spins) {
  const auto r = static_cast<Eigen::Index>(encode(out_spins, cfg));
  const auto c = static_cast<Eigen::Index>(encode(in_spins, cfg));
  if (r >= s.matrix.rows() || c >= s.matrix.cols())
    throw ValidationError("s_element: index outside S");
  return s.matrix(r, c);
}

/// Two ordered clusters of particle labels.
struct ClusterAssignment {
  std::vector<int> first;
  std::vector<int> second;
};

/// S = prod_{a in first, reversed} [ prod_{b in second} X_ba ]; for clusters
/// {1,2} | {3,4,5} this is [X_32 X_42 X_52][X_31 X_41 X_51].
inline ScatteringMatrix cluster_scattering_matrix(const SpinConfig& cfg, const CouplingMatrix& h,
                                                  const ClusterAssignment& clusters,
                                                  const MomentumSet& ks) {
  const int N = cfg.particles();
  if (ks.size() != static_cast<std::size_t>(N))
    throw ValidationError("cluster_scattering_matrix: need exactly N momenta");
  std::vector<int> seen(static_cast<std::size_t>(N) + 1, 0);
  for (const auto* part : {&clusters.first, &clusters.second})
    for (int label : *part) {
      if (label < 1 || label > N)
        throw ValidationError("cluster_scattering_matrix: label " + std::to_string(label) +
                              " outside [1, N]");
      if (seen[static_cast<std::size_t>(label)]++)
        throw ValidationError("cluster_scattering_matrix: label " + std::to_string(label) +
                              " assigned twice");
    }
  for (int label = 1; label <= N; ++label)
    if (!seen[static_cast<std::size_t>(label)])
      throw ValidationError("cluster_scattering_matrix: label " + std::to_string(label) +
                            " missing from the partition");
  Matrix s = Matrix::Identity(cfg.rows(), cfg.rows());
  for (auto a = clusters.first.rbegin(); a != clusters.first.rend(); ++a)
    for (int b : clusters.second) s = s * detail::exchange_factor(cfg, h, ks, b, *a);
  return {s, ks};
}

inline double unitarity_residual(const ScatteringMatrix& s) {
  return max_norm(s.matrix.adjoint() * s.matrix -
                  Matrix::Identity(s.matrix.rows(), s.matrix.cols()));
}

inline double symmetry_residual(const ScatteringMatrix& s) {
  return max_norm(s.matrix - s.matrix.transpose());
}

}  // namespace spincontact
