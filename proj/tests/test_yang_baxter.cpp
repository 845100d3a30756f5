#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "spincontact/spincontact.hpp"

using namespace spincontact;

namespace {

const Complex I1(0.0, 1.0);

// Y built from dense inverse and Kronecker products, adjacent sites only.
Matrix oracle_y(const Matrix& h, Statistics s, Complex kappa, int site, int particles) {
  const int n = static_cast<int>(std::lround(std::sqrt(double(h.rows()))));
  const double sign = s == Statistics::Boson ? 1.0 : -1.0;
  const Matrix id = Matrix::Identity(h.rows(), h.rows());
  const Matrix k = (2.0 * I1 * kappa * id - h).inverse() * (2.0 * I1 * kappa * sign * two_site_swap(n) + h);
  Matrix left = Matrix::Identity(1, 1);
  for (int a = 1; a < site; ++a) left = Eigen::kroneckerProduct(left, Matrix::Identity(n, n)).eval();
  Matrix out = Eigen::kroneckerProduct(left, k).eval();
  for (int a = site + 2; a <= particles; ++a)
    out = Eigen::kroneckerProduct(out, Matrix::Identity(n, n)).eval();
  return out;
}

std::array<Complex, 3> random_triple(Xoshiro256& rng) {
  return {Complex(rng.uniform(-2, 2)), Complex(rng.uniform(-2, 2)), Complex(rng.uniform(-2, 2))};
}

}  // namespace

TEST(YOperator, ScalarPhase) {
  const double c = 0.7;
  const CouplingMatrix h(Matrix::Constant(1, 1, 2.0 * c));
  const SpinConfig cfg(2, 1, Statistics::Boson);
  const MomentumSet ks = MomentumSet::real({-0.4, 1.1});
  const Complex k12 = (ks[0] - ks[1]) / 2.0;
  const Complex expected = (2.0 * I1 * k12 + 2.0 * c) / (2.0 * I1 * k12 - 2.0 * c);
  const Matrix y = y_operator(cfg, h, ks, {1, 2}, {1, 2}).matrix;
  EXPECT_NEAR(std::abs(y(0, 0) - expected), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(y(0, 0)), 1.0, 1e-15);
}

TEST(YOperator, MatchesDenseOracle) {
  Xoshiro256 rng(21);
  for (Statistics s : {Statistics::Boson, Statistics::Fermion}) {
    const CouplingMatrix h = random_commutant(rng, 2);
    const SpinConfig cfg(3, 2, s);
    const MomentumSet ks = MomentumSet::real({0.3, -0.9, 1.4});
    for (int site : {1, 2}) {
      const Matrix y = y_operator(cfg, h, ks, {3, 1}, {site, site + 1}).matrix;
      const Matrix o = oracle_y(h.matrix(), s, pair_momentum(ks, 3, 1), site, 3);
      EXPECT_LT(max_norm(y - o), 1e-13);
    }
  }
}

TEST(YOperator, UnitaryForRealMomenta) {
  Xoshiro256 rng(22);
  const CouplingMatrix h = random_commutant(rng, 3);
  const SpinConfig cfg(2, 3, Statistics::Boson);
  const MomentumSet ks = MomentumSet::real({-1.0, 0.6});
  const Matrix y = y_operator(cfg, h, ks, {1, 2}, {1, 2}).matrix;
  EXPECT_LT(max_norm(y.adjoint() * y - Matrix::Identity(9, 9)), 1e-13);
}

TEST(YOperator, SingularMomentumThrows) {
  // h = -2, k_12 = i gives 2 i k_12 = -2.
  const CouplingMatrix h(Matrix::Constant(1, 1, -2.0));
  const SpinConfig cfg(2, 1, Statistics::Boson);
  const MomentumSet ks{Complex(0, 1), Complex(0, -1)};
  try {
    y_operator(cfg, h, ks, {1, 2}, {1, 2});
    FAIL() << "expected SingularError";
  } catch (const SingularError& e) {
    EXPECT_LT(e.collision_distance(), 1e-10);
  }
}

TEST(YOperator, RejectsBadLabels) {
  const CouplingMatrix h(Matrix::Zero(4, 4));
  const SpinConfig cfg(3, 2, Statistics::Boson);
  const MomentumSet ks = MomentumSet::real({0, 1, 2});
  EXPECT_THROW(y_operator(cfg, h, ks, {1, 4}, {1, 2}), ValidationError);
  EXPECT_THROW(y_operator(cfg, h, ks, {1, 2}, {2, 2}), ValidationError);
}

TEST(Ybe, ResidualMatchesDenseOracle) {
  Xoshiro256 rng(23);
  const CouplingMatrix h = random_commutant(rng, 2);
  const SpinConfig cfg(3, 2, Statistics::Boson);
  const auto t = random_triple(rng);
  const MomentumSet ks{t[0], t[1], t[2]};
  auto Y = [&](int a, int b, int site) {
    return oracle_y(h.matrix(), Statistics::Boson, pair_momentum(ks, a, b), site, 3);
  };
  const Matrix lhs = Y(1, 2, 1) * Y(3, 2, 2) * Y(3, 1, 1);
  const Matrix rhs = Y(3, 1, 2) * Y(3, 2, 1) * Y(1, 2, 2);
  EXPECT_NEAR(ybe_residual(cfg, h, t), max_norm(lhs - rhs), 1e-12);
}

TEST(Ybe, SpinHalfFermionsSatisfyIt) {
  Xoshiro256 rng(24);
  const SpinConfig cfg(3, 2, Statistics::Fermion);
  for (int m = 0; m < 10; ++m) {
    const CouplingMatrix h = spin_half_coupling(random_spin_half_params(rng));
    for (int t = 0; t < 10; ++t) EXPECT_LT(ybe_residual(cfg, h, random_triple(rng)), 1e-10);
  }
}

TEST(Ybe, YangGaudinSatisfiesItForAllStatistics) {
  Xoshiro256 rng(25);
  for (int n : {2, 3})
    for (Statistics s : {Statistics::Boson, Statistics::Fermion}) {
      const SpinConfig cfg(4, n, s);
      const CouplingMatrix h = yang_gaudin_coupling(n, rng.uniform(-1, 1), rng.uniform(-1, 1));
      for (int t = 0; t < 5; ++t) {
        EXPECT_LT(ybe_residual(cfg, h, random_triple(rng), 1), 1e-10);
        EXPECT_LT(ybe_residual(cfg, h, random_triple(rng), 2), 1e-10);
      }
    }
}

TEST(Ybe, GenericBosonCommutantViolatesIt) {
  // The symmetric two-spin-1/2 subspace is three-dimensional, so a generic
  // commutant is not a function of the swap there.
  Xoshiro256 rng(26);
  const SpinConfig cfg(3, 2, Statistics::Boson);
  const CouplingMatrix h = spin_half_coupling(random_spin_half_params(rng));
  EXPECT_GT(ybe_residual(cfg, h, random_triple(rng)), 1e-6);
}

TEST(Ybe, NonCommutantViolatesIt) {
  Xoshiro256 rng(27);
  const SpinConfig cfg(3, 2, Statistics::Fermion);
  const CouplingMatrix h(random_hermitian(rng, 4));
  ASSERT_GT(validate_coupling(h).commutator_residual, 0.1);
  EXPECT_GT(ybe_residual(cfg, h, random_triple(rng)), 1e-6);
}

TEST(Ybe, ZeroCouplingIsExact) {
  const SpinConfig cfg(3, 2, Statistics::Boson);
  const CouplingMatrix h(Matrix::Zero(4, 4));
  EXPECT_EQ(ybe_residual(cfg, h, {Complex(0.1), Complex(0.5), Complex(-0.3)}), 0.0);
}

TEST(Ybe, InverseAndDisjoint) {
  Xoshiro256 rng(28);
  const SpinConfig cfg(4, 2, Statistics::Boson);
  const CouplingMatrix h = random_commutant(rng, 2);
  const MomentumSet ks = MomentumSet::real({-1.2, 0.1, 0.5, 1.7});
  EXPECT_LT(ybe_inverse_residual(cfg, h, ks, {1, 3}, {2, 3}), 1e-12);
  EXPECT_LT(ybe_inverse_residual(cfg, h, ks, {4, 2}, {1, 4}), 1e-12);
  EXPECT_LT(ybe_disjoint_residual(cfg, h, ks, {{1, 2}, {1, 2}}, {{3, 4}, {3, 4}}), 1e-12);
  EXPECT_LT(ybe_disjoint_residual(cfg, h, ks, {{1, 3}, {2, 1}}, {{2, 4}, {4, 3}}), 1e-12);
  EXPECT_THROW(ybe_disjoint_residual(cfg, h, ks, {{1, 2}, {1, 2}}, {{2, 3}, {3, 4}}),
               ValidationError);
}

TEST(ConstantYbe, SwapAndGenericCoupling) {
  EXPECT_LT(constant_ybe_residual(two_site_swap(2), 2), 1e-14);
  EXPECT_LT(constant_ybe_residual(two_site_swap(3), 3), 1e-14);
  Xoshiro256 rng(29);
  const CouplingMatrix h = spin_half_coupling(random_spin_half_params(rng));
  EXPECT_GT(constant_ybe_residual(h.matrix(), 2), 1e-3);
}

TEST(SeparatedKernel, ScalarAndUnitary) {
  const double g = -0.8, kappa = 0.35;
  const Matrix k = separated_kernel(Matrix::Constant(1, 1, g), kappa);
  const Complex expected = (I1 * kappa + g) / (I1 * kappa - g);
  EXPECT_NEAR(std::abs(k(0, 0) - expected), 0.0, 1e-15);
  Xoshiro256 rng(30);
  const Matrix gm = random_hermitian(rng, 4);
  const Matrix y = separated_kernel(gm, 0.9);
  EXPECT_LT(max_norm(y.adjoint() * y - Matrix::Identity(4, 4)), 1e-13);
}
