#pragma once

// Spin-coupling matrices and contact boundary-condition data.

#include <array>
#include <cmath>
#include <string>

#include "spincontact/random.hpp"
#include "spincontact/tensor_algebra.hpp"

namespace spincontact {

/// Tolerance (max-norm) for the exact-algebra predicates below.
inline constexpr double kAlgebraTol = 1e-12;

namespace detail {

inline int spin_dim_from_pair_dim(Eigen::Index rows, Eigen::Index cols, const char* who) {
  if (rows != cols)
    throw ValidationError(std::string(who) + ": matrix must be square");
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rows))));
  if (n < 1 || static_cast<Eigen::Index>(n) * n != rows)
    throw ValidationError(std::string(who) + ": dimension " + std::to_string(rows) +
                          " is not a perfect square n^2");
  return n;
}

inline double hermitian_residual(const Matrix& m) { return max_norm(m - m.adjoint()); }

inline void require_hermitian(const Matrix& m, const char* who) {
  const double r = hermitian_residual(m);
  if (!(r < kAlgebraTol))
    throw ValidationError(std::string(who) + ": matrix is not Hermitian (residual " +
                          std::to_string(r) + ")");
}

inline void require_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) throw ValidationError(std::string(who) + ": non-finite entries");
}

}  // namespace detail

/// Hermitian n^2 x n^2 spin coupling h of the contact term 2 h delta(x).
class CouplingMatrix {
 public:
  explicit CouplingMatrix(Matrix entries) : entries_(std::move(entries)) {
    n_ = detail::spin_dim_from_pair_dim(entries_.rows(), entries_.cols(), "CouplingMatrix");
    detail::require_finite(entries_, "CouplingMatrix");
    detail::require_hermitian(entries_, "CouplingMatrix");
  }

  int spin_dim() const noexcept { return n_; }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  Matrix entries_;
  int n_ = 1;
};

/// Parameters of the general swap-commuting Hermitian 4x4 coupling.
/// Diagonal entries are real (Hermiticity); c_x, e1, e2 are complex.
struct SpinHalfParams {
  double a_d = 0.0;
  double b_d = 0.0;
  double f_d = 0.0;
  double g_d = 0.0;
  Complex c_x{};
  Complex e1{};
  Complex e2{};
};

/// Scalar point interaction (phi, phi')_{0+} = e^{i theta} [[a b][c d]] (phi, phi')_{0-}.
/// theta is carried for completeness; it is a unitary gauge and no solver uses it.
struct ScalarBC {
  double theta = 0.0;
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;
};

/// Block transfer matrix (psi, psi')_{0+} = [[A B][C D]] (psi, psi')_{0-}.
/// Not validated on construction, see validate_block_bc.
struct BlockBC {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
};

/// Separated conditions phi'(0+) = G+ phi(0+), phi'(0-) = G- phi(0-), each
/// derivative taken along the outward normal of its half-line.
class SeparatedModel {
 public:
  SeparatedModel(Matrix g_plus, Matrix g_minus)
      : g_plus_(std::move(g_plus)), g_minus_(std::move(g_minus)) {
    n_ = detail::spin_dim_from_pair_dim(g_plus_.rows(), g_plus_.cols(), "SeparatedModel");
    if (g_minus_.rows() != g_plus_.rows() || g_minus_.cols() != g_plus_.cols())
      throw ValidationError("SeparatedModel: G+ and G- differ in dimension");
    detail::require_finite(g_plus_, "SeparatedModel");
    detail::require_finite(g_minus_, "SeparatedModel");
    detail::require_hermitian(g_plus_, "SeparatedModel G+");
    detail::require_hermitian(g_minus_, "SeparatedModel G-");
  }

  /// G+ = G- = G.
  explicit SeparatedModel(const Matrix& g) : SeparatedModel(g, g) {}

  int spin_dim() const noexcept { return n_; }
  const Matrix& g_plus() const noexcept { return g_plus_; }
  const Matrix& g_minus() const noexcept { return g_minus_; }
  bool symmetric() const { return max_norm(g_plus_ - g_minus_) < kAlgebraTol; }

 private:
  Matrix g_plus_;
  Matrix g_minus_;
  int n_ = 1;
};

inline CouplingMatrix spin_half_coupling(const SpinHalfParams& p) {
  const double reals[] = {p.a_d, p.b_d, p.f_d, p.g_d};
  for (double r : reals)
    if (!std::isfinite(r)) throw ValidationError("spin_half_coupling: non-finite parameter");
  const Complex cs[] = {p.c_x, p.e1, p.e2};
  for (const Complex& z : cs)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("spin_half_coupling: non-finite parameter");

  const Complex a = p.a_d, b = p.b_d, f = p.f_d, g = p.g_d;
  Matrix h(4, 4);
  h << a,                  p.e1,                p.e1,                p.c_x,
       std::conj(p.e1),    f,                   g,                   p.e2,
       std::conj(p.e1),    g,                   f,                   p.e2,
       std::conj(p.c_x),   std::conj(p.e2),     std::conj(p.e2),     b;
  return CouplingMatrix(std::move(h));
}

inline SpinHalfParams random_spin_half_params(Xoshiro256& rng) {
  SpinHalfParams p;
  p.a_d = rng.uniform(-1.0, 1.0);
  p.b_d = rng.uniform(-1.0, 1.0);
  p.f_d = rng.uniform(-1.0, 1.0);
  p.g_d = rng.uniform(-1.0, 1.0);
  p.c_x = rng.uniform_complex();
  p.e1 = rng.uniform_complex();
  p.e2 = rng.uniform_complex();
  return p;
}

struct CouplingReport {
  bool hermitian = false;
  bool commutes_with_swap = false;
  double hermitian_residual = 0.0;
  double commutator_residual = 0.0;
};

/// Checks Hermiticity and [h, p] = 0 for the two-site swap p. The verdict is
/// the same for P = -p since the sign cancels in the commutator.
inline CouplingReport validate_coupling(const Matrix& h) {
  const int n = detail::spin_dim_from_pair_dim(h.rows(), h.cols(), "validate_coupling");
  const Matrix p = two_site_swap(n);
  CouplingReport r;
  r.hermitian_residual = detail::hermitian_residual(h);
  r.commutator_residual = max_norm(h * p - p * h);
  r.hermitian = r.hermitian_residual < kAlgebraTol;
  r.commutes_with_swap = r.commutator_residual < kAlgebraTol;
  return r;
}

inline CouplingReport validate_coupling(const CouplingMatrix& h) {
  return validate_coupling(h.matrix());
}

/// Hermitian part of the swap average (M + pMp)/2.
inline CouplingMatrix project_to_commutant(const Matrix& m) {
  const int n = detail::spin_dim_from_pair_dim(m.rows(), m.cols(), "project_to_commutant");
  const Matrix p = two_site_swap(n);
  const Matrix averaged = (m + p * m * p) / 2.0;
  Matrix h = (averaged + averaged.adjoint()) / 2.0;
  // Exact Hermiticity after rounding.
  h = ((h + h.adjoint()) / 2.0).eval();
  return CouplingMatrix(std::move(h));
}

inline CouplingMatrix random_commutant(Xoshiro256& rng, int n) {
  return project_to_commutant(random_complex_matrix(rng, static_cast<Eigen::Index>(n) * n));
}

/// alpha * I + beta * p: the commutant family whose Y-operators satisfy the
/// spectral Yang-Baxter relation for every n and both statistics.
inline CouplingMatrix yang_gaudin_coupling(int n, double alpha, double beta) {
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  return CouplingMatrix(alpha * Matrix::Identity(n2, n2) + beta * two_site_swap(n));
}

inline bool validate_scalar_bc(const ScalarBC& bc) {
  return std::abs(bc.a * bc.d - bc.b * bc.c - 1.0) < kAlgebraTol;
}

struct BlockBCReport {
  bool cond1 = false;  ///< A^dag D - C^dag B = 1
  bool cond2 = false;  ///< B^dag D = D^dag B
  bool cond3 = false;  ///< A^dag C = C^dag A
  std::array<double, 3> residuals{};

  bool all() const { return cond1 && cond2 && cond3; }
};

inline BlockBCReport validate_block_bc(const BlockBC& bc) {
  const Eigen::Index d = bc.A.rows();
  for (const Matrix* m : {&bc.A, &bc.B, &bc.C, &bc.D})
    if (m->rows() != d || m->cols() != d)
      throw ValidationError("validate_block_bc: blocks must share one square dimension");
  detail::spin_dim_from_pair_dim(d, d, "validate_block_bc");
  BlockBCReport r;
  r.residuals[0] = max_norm(bc.A.adjoint() * bc.D - bc.C.adjoint() * bc.B -
                            Matrix::Identity(d, d));
  r.residuals[1] = max_norm(bc.B.adjoint() * bc.D - bc.D.adjoint() * bc.B);
  r.residuals[2] = max_norm(bc.A.adjoint() * bc.C - bc.C.adjoint() * bc.A);
  r.cond1 = r.residuals[0] < kAlgebraTol;
  r.cond2 = r.residuals[1] < kAlgebraTol;
  r.cond3 = r.residuals[2] < kAlgebraTol;
  return r;
}

inline BlockBC bound1_bc(const Matrix& b) {
  detail::spin_dim_from_pair_dim(b.rows(), b.cols(), "bound1_bc");
  detail::require_hermitian(b, "bound1_bc");
  const Matrix id = Matrix::Identity(b.rows(), b.cols());
  return {id, b, Matrix::Zero(b.rows(), b.cols()), id};
}

/// Phase-type condition A = D = (2 - iB)^-1 (2 + iB), B = C = 0. Taking
/// D = (2 + iB)^-1 (2 - iB) instead would give A^dag D = A^-2, which violates
/// the first self-adjointness condition whenever B != 0.
inline BlockBC bound2_bc(const Matrix& b) {
  detail::spin_dim_from_pair_dim(b.rows(), b.cols(), "bound2_bc");
  detail::require_hermitian(b, "bound2_bc");
  const Complex i(0.0, 1.0);
  const Matrix two = 2.0 * Matrix::Identity(b.rows(), b.cols());
  const Matrix cayley = (two - i * b).partialPivLu().solve(two + i * b);
  const Matrix zero = Matrix::Zero(b.rows(), b.cols());
  return {cayley, zero, zero, cayley};
}

/// Transfer matrix of the delta contact: A = D = I, B = 0, C = h.
inline BlockBC delta_bc(const CouplingMatrix& h) {
  const Matrix& m = h.matrix();
  const Matrix id = Matrix::Identity(m.rows(), m.cols());
  return {id, Matrix::Zero(m.rows(), m.cols()), m, id};
}

}  // namespace spincontact
