#include <gtest/gtest.h>

#include "spincontact/spincontact.hpp"

using namespace spincontact;

TEST(Coupling, SpinHalfIsHermitianCommutant) {
  Xoshiro256 rng(11);
  for (int t = 0; t < 20; ++t) {
    const CouplingMatrix h = spin_half_coupling(random_spin_half_params(rng));
    const CouplingReport r = validate_coupling(h);
    EXPECT_TRUE(r.hermitian);
    EXPECT_TRUE(r.commutes_with_swap);
  }
}

TEST(Coupling, SpinHalfLayout) {
  SpinHalfParams p;
  p.a_d = 1;
  p.b_d = 2;
  p.f_d = 3;
  p.g_d = 4;
  p.c_x = {5, 6};
  p.e1 = {7, 8};
  p.e2 = {9, -1};
  const Matrix h = spin_half_coupling(p).matrix();
  EXPECT_EQ(h(0, 0), Complex(1));
  EXPECT_EQ(h(3, 3), Complex(2));
  EXPECT_EQ(h(1, 1), Complex(3));
  EXPECT_EQ(h(2, 2), Complex(3));
  EXPECT_EQ(h(1, 2), Complex(4));
  EXPECT_EQ(h(0, 3), Complex(5, 6));
  EXPECT_EQ(h(3, 0), Complex(5, -6));
  EXPECT_EQ(h(0, 1), Complex(7, 8));
  EXPECT_EQ(h(0, 2), Complex(7, 8));
  EXPECT_EQ(h(1, 3), Complex(9, -1));
  EXPECT_EQ(h(3, 2), Complex(9, 1));
}

TEST(Coupling, DiagonalNonCommutant) {
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 1, 2, 3, 4;
  const CouplingReport r = validate_coupling(d);
  EXPECT_TRUE(r.hermitian);
  EXPECT_FALSE(r.commutes_with_swap);
  // [d, p] has entries (2-3) and (3-2) at (1,2), (2,1).
  EXPECT_NEAR(r.commutator_residual, 1.0, 1e-15);
}

TEST(Coupling, RejectsNonHermitianAndBadShape) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 1) = 1.0;
  EXPECT_THROW(CouplingMatrix{m}, ValidationError);
  EXPECT_THROW(CouplingMatrix{Matrix::Identity(3, 3)}, ValidationError);
  EXPECT_THROW(CouplingMatrix{Matrix::Identity(4, 2)}, ValidationError);
  Matrix nan = Matrix::Identity(4, 4);
  nan(1, 1) = std::nan("");
  EXPECT_THROW(CouplingMatrix{nan}, ValidationError);
}

TEST(Commutant, ProjectionIsIdempotent) {
  Xoshiro256 rng(12);
  for (int n : {2, 3}) {
    const Matrix m = random_complex_matrix(rng, n * n);
    const CouplingMatrix once = project_to_commutant(m);
    const CouplingMatrix twice = project_to_commutant(once.matrix());
    EXPECT_LT(max_norm(once.matrix() - twice.matrix()), 1e-15);
    EXPECT_TRUE(validate_coupling(once).commutes_with_swap);
  }
}

TEST(Commutant, YangGaudinFamily) {
  const CouplingMatrix h = yang_gaudin_coupling(3, 0.5, -1.25);
  EXPECT_TRUE(validate_coupling(h).commutes_with_swap);
  EXPECT_EQ(h.spin_dim(), 3);
}

TEST(BoundaryConditions, ScalarDeterminant) {
  EXPECT_TRUE(validate_scalar_bc({0.3, 1, 0, 0, 1}));
  EXPECT_TRUE(validate_scalar_bc({0.0, 2, 1, 1, 1}));
  EXPECT_FALSE(validate_scalar_bc({0.0, 2, 0, 0, 1}));
}

TEST(BoundaryConditions, DeltaAndBoundFamiliesPass) {
  Xoshiro256 rng(13);
  const CouplingMatrix h = random_commutant(rng, 2);
  EXPECT_TRUE(validate_block_bc(delta_bc(h)).all());
  const Matrix b = random_hermitian(rng, 4);
  EXPECT_TRUE(validate_block_bc(bound1_bc(b)).all());
  EXPECT_TRUE(validate_block_bc(bound2_bc(b)).all());
  const Matrix id = Matrix::Identity(4, 4), z = Matrix::Zero(4, 4);
  EXPECT_TRUE(validate_block_bc({id, z, z, id}).all());
}

TEST(BoundaryConditions, CorruptedBlockFails) {
  const Matrix id = Matrix::Identity(4, 4), z = Matrix::Zero(4, 4);
  Matrix d = id;
  d(0, 0) = 1.5;
  const BlockBCReport r = validate_block_bc({id, z, z, d});
  EXPECT_FALSE(r.cond1);
  EXPECT_TRUE(r.cond2);
  EXPECT_TRUE(r.cond3);
  EXPECT_NEAR(r.residuals[0], 0.5, 1e-15);
  // Non-Hermitian B in the bound1 family violates condition 2.
  Matrix b = z;
  b(0, 1) = 1.0;
  const BlockBCReport r2 = validate_block_bc({id, b, z, id});
  EXPECT_FALSE(r2.cond2);
}

TEST(BoundaryConditions, BoundTwoIsUnitaryCayley) {
  Xoshiro256 rng(14);
  const Matrix b = random_hermitian(rng, 4);
  const BlockBC bc = bound2_bc(b);
  const Matrix id = Matrix::Identity(4, 4);
  EXPECT_LT(max_norm(bc.A.adjoint() * bc.A - id), 1e-13);
  EXPECT_LT(max_norm(bc.A - bc.D), 1e-15);
  // Scalar sanity: B = 1 gives (2 + i)/(2 - i).
  const BlockBC one = bound2_bc(Matrix::Identity(1, 1));
  EXPECT_NEAR(std::abs(one.A(0, 0) - Complex(2, 1) / Complex(2, -1)), 0.0, 1e-15);
}

TEST(Separated, ValidatesHermiticity) {
  Matrix g = Matrix::Identity(4, 4);
  EXPECT_TRUE(SeparatedModel(g).symmetric());
  g(0, 1) = 1.0;
  EXPECT_THROW(SeparatedModel{g}, ValidationError);
  EXPECT_THROW(SeparatedModel(Matrix::Identity(4, 4), Matrix::Identity(9, 9)), ValidationError);
}
