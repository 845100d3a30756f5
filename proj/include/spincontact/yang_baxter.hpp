#pragma once

// Two-body exchange operators Y and residuals of the Yang-Baxter relations.
//
// y_operator with momentum pair (a, b) and sites (m, r) is
//   Y = (2i k_ab - h_mr)^-1 (2i k_ab P^mr + h_mr),   k_ab = (k_a - k_b) / 2.
// Applied at adjacent sites (j, j+1) it maps the Bethe coefficient whose
// momentum labels there read (a, b) to the one reading (b, a).

#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spincontact/models.hpp"

namespace spincontact {

/// Distance below which 2ik (or ik) counts as an eigenvalue of h (or G).
inline constexpr double kSingularTol = 1e-10;
/// Largest accepted condition estimate of a Y denominator.
inline constexpr double kMaxCondition = 1e12;

/// Wavenumbers k_1..k_N; complex to cover bound states.
struct MomentumSet {
  std::vector<Complex> k;

  MomentumSet() = default;
  explicit MomentumSet(std::vector<Complex> values) : k(std::move(values)) { validate(); }
  MomentumSet(std::initializer_list<Complex> values) : k(values) { validate(); }

  static MomentumSet real(const std::vector<double>& values) {
    std::vector<Complex> c(values.begin(), values.end());
    return MomentumSet(std::move(c));
  }

  std::size_t size() const noexcept { return k.size(); }
  const Complex& operator[](std::size_t i) const { return k[i]; }

  /// 1-based access.
  const Complex& at(int label) const {
    if (label < 1 || static_cast<std::size_t>(label) > k.size())
      throw ValidationError("MomentumSet: label " + std::to_string(label) +
                            " outside [1, " + std::to_string(k.size()) + "]");
    return k[static_cast<std::size_t>(label - 1)];
  }

  bool is_real(double tol = 0.0) const {
    for (const Complex& z : k)
      if (std::abs(z.imag()) > tol) return false;
    return true;
  }

 private:
  void validate() const {
    for (const Complex& z : k)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ValidationError("MomentumSet: non-finite momentum");
  }
};

/// Momentum labels (i, j), 1-based; selects k_ij = (k_i - k_j)/2.
struct MomentumPair {
  int i;
  int j;
};

struct YOperator {
  OperatorMatrix matrix;
  SitePair sites;
  MomentumPair momenta;
};

inline Complex pair_momentum(const MomentumSet& ks, int i, int j) {
  return (ks.at(i) - ks.at(j)) / 2.0;
}

namespace detail {

inline std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/// Solves (z - m) X = rhs after rejecting z near the spectrum of m.
inline Matrix resolvent_solve(const Matrix& m, Complex z, const Matrix& rhs,
                              const char* who) {
  Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  double closest = std::numeric_limits<double>::infinity();
  Complex nearest{};
  for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) {
    const double dist = std::abs(z - es.eigenvalues()(a));
    if (dist < closest) {
      closest = dist;
      nearest = es.eigenvalues()(a);
    }
  }
  if (closest < kSingularTol)
    throw SingularError(std::string(who) + ": spectral parameter " + format_complex(z) +
                            " collides with eigenvalue " + format_complex(nearest),
                        closest);
  const Matrix denom = z * Matrix::Identity(m.rows(), m.cols()) - m;
  Eigen::PartialPivLU<Matrix> lu(denom);
  const double rcond = lu.rcond();
  if (!(rcond * kMaxCondition > 1.0))
    throw SingularError(std::string(who) + ": denominator condition estimate " +
                            std::to_string(1.0 / rcond) + " exceeds 1e12",
                        closest);
  return lu.solve(rhs);
}

}  // namespace detail

/// Two-site exchange kernel (2i kappa - h)^-1 (2i kappa P + h) on C^n (x) C^n.
inline Matrix y_kernel(const Matrix& h, Statistics stats, Complex kappa) {
  const int n = detail::spin_dim_from_pair_dim(h.rows(), h.cols(), "y_kernel");
  const double sign = stats == Statistics::Boson ? 1.0 : -1.0;
  const Complex two_ik = Complex(0.0, 2.0) * kappa;
  const Matrix rhs = two_ik * sign * two_site_swap(n) + h;
  return detail::resolvent_solve(h, two_ik, rhs, "y_operator");
}

inline YOperator y_operator(const SpinConfig& cfg, const CouplingMatrix& h,
                            const MomentumSet& ks, MomentumPair momenta, SitePair sites) {
  if (h.spin_dim() != cfg.spin_dim())
    throw ValidationError("y_operator: coupling spin dimension differs from config");
  detail::checked_pair(cfg, sites.first, sites.second, "y_operator");
  const SitePair s{std::min(sites.first, sites.second), std::max(sites.first, sites.second)};
  const Complex kappa = pair_momentum(ks, momenta.i, momenta.j);
  const Matrix kernel = y_kernel(h.matrix(), cfg.statistics(), kappa);
  return {embed_two_site(cfg, kernel, s.first, s.second), s, momenta};
}

/// Kernel (i kappa - G)^-1 (i kappa + G) of separated conditions. Both factors
/// are functions of G, so they commute.
inline Matrix separated_kernel(const Matrix& g, Complex kappa) {
  const int n = detail::spin_dim_from_pair_dim(g.rows(), g.cols(), "separated_y");
  (void)n;
  const Complex ik = Complex(0.0, 1.0) * kappa;
  const Matrix rhs = ik * Matrix::Identity(g.rows(), g.cols()) + g;
  return detail::resolvent_solve(g, ik, rhs, "separated_y");
}

inline YOperator separated_y(const Matrix& g, Complex kappa, const SpinConfig& cfg,
                             SitePair sites) {
  if (g.rows() != static_cast<Eigen::Index>(cfg.pair_dimension()))
    throw ValidationError("separated_y: G dimension differs from n^2");
  detail::checked_pair(cfg, sites.first, sites.second, "separated_y");
  const SitePair s{std::min(sites.first, sites.second), std::max(sites.first, sites.second)};
  return {embed_two_site(cfg, separated_kernel(g, kappa), s.first, s.second), s, {0, 0}};
}

/// Max-norm of Y^{m,m+1}_{ij} Y^{m+1,m+2}_{kj} Y^{m,m+1}_{ki}
///            - Y^{m+1,m+2}_{ki} Y^{m,m+1}_{kj} Y^{m+1,m+2}_{ij},
/// where subscript (x, y) is the momentum pair k_xy of the triple
/// (k_i, k_j, k_k) and m is the first of three consecutive sites.
inline double ybe_residual(const SpinConfig& cfg, const CouplingMatrix& h,
                           const std::array<Complex, 3>& triple, int m = 1) {
  if (cfg.particles() < 3)
    throw ValidationError("ybe_residual: needs N >= 3");
  if (m < 1 || m + 2 > cfg.particles())
    throw ValidationError("ybe_residual: site triple out of range");
  const MomentumSet ks{triple[0], triple[1], triple[2]};
  const SitePair s1{m, m + 1};
  const SitePair s2{m + 1, m + 2};
  constexpr int I = 1, J = 2, K = 3;
  auto Y = [&](MomentumPair mp, SitePair s) { return y_operator(cfg, h, ks, mp, s).matrix; };
  const Matrix lhs = Y({I, J}, s1) * Y({K, J}, s2) * Y({K, I}, s1);
  const Matrix rhs = Y({K, I}, s2) * Y({K, J}, s1) * Y({I, J}, s2);
  return max_norm(lhs - rhs);
}

/// Max-norm of Y^{mr}_{ij} Y^{mr}_{ji} - 1.
inline double ybe_inverse_residual(const SpinConfig& cfg, const CouplingMatrix& h,
                                   const MomentumSet& ks, MomentumPair mp, SitePair sites) {
  const Matrix a = y_operator(cfg, h, ks, mp, sites).matrix;
  const Matrix b = y_operator(cfg, h, ks, {mp.j, mp.i}, sites).matrix;
  return max_norm(a * b - Matrix::Identity(a.rows(), a.cols()));
}

struct SiteMomentum {
  SitePair sites;
  MomentumPair momenta;
};

/// Max-norm of [Y^{mr}_{ij}, Y^{sq}_{kl}] for disjoint site pairs.
inline double ybe_disjoint_residual(const SpinConfig& cfg, const CouplingMatrix& h,
                                    const MomentumSet& ks, const SiteMomentum& first,
                                    const SiteMomentum& second) {
  if (cfg.particles() < 4)
    throw ValidationError("ybe_disjoint_residual: needs N >= 4");
  const int a = first.sites.first, b = first.sites.second;
  const int c = second.sites.first, d = second.sites.second;
  if (a == c || a == d || b == c || b == d)
    throw ValidationError("ybe_disjoint_residual: site pairs overlap");
  const Matrix y1 = y_operator(cfg, h, ks, first.momenta, first.sites).matrix;
  const Matrix y2 = y_operator(cfg, h, ks, second.momenta, second.sites).matrix;
  return max_norm(y1 * y2 - y2 * y1);
}

/// Max-norm of R12 R13 R23 - R23 R13 R12 on (C^n)^{(x)3}.
inline double constant_ybe_residual(const Matrix& r, int n) {
  const SpinConfig cfg(3, n, Statistics::Boson);
  if (r.rows() != static_cast<Eigen::Index>(cfg.pair_dimension()) || r.cols() != r.rows())
    throw ValidationError("constant_ybe_residual: R must be n^2 x n^2");
  const Matrix r12 = embed_two_site(cfg, r, 1, 2);
  const Matrix r13 = embed_two_site(cfg, r, 1, 3);
  const Matrix r23 = embed_two_site(cfg, r, 2, 3);
  return max_norm(r12 * r13 * r23 - r23 * r13 * r12);
}

}  // namespace spincontact
