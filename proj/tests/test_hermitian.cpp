#include <gtest/gtest.h>

#include <random>

#include "crmorse/hermitian.hpp"
#include "support.hpp"

using namespace crmorse;

TEST(Inertia, IdentityIsPositive) {
  const Inertia in = inertia(HermitianMatrix::identity(3), 1e-9);
  EXPECT_EQ(in.neg, 0);
  EXPECT_EQ(in.zero, 0);
  EXPECT_EQ(in.pos, 3);
}

TEST(Inertia, DiagonalWithZero) {
  const std::vector<double> diag{-1.0, 0.0, 2.0};
  const Inertia in = inertia(HermitianMatrix::diagonal(diag), 1e-9);
  EXPECT_EQ(in.neg, 1);
  EXPECT_EQ(in.zero, 1);
  EXPECT_EQ(in.pos, 1);
}

TEST(Inertia, OffDiagonalImaginaryPair) {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0, 1), Complex(0, -1), 0.0;
  const Inertia in = inertia(HermitianMatrix(m), 1e-9);
  EXPECT_EQ(in.neg, 1);
  EXPECT_EQ(in.zero, 0);
  EXPECT_EQ(in.pos, 1);
}

TEST(Inertia, CountsAlwaysSumToDimension) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 6;
    const auto a = testkit::random_integer_hermitian(rng, d, 2);
    for (double tol : {0.0, 1e-9, 0.5, 3.0}) EXPECT_EQ(inertia(a, tol).dim(), d);
  }
}

TEST(Inertia, NegativeToleranceRejected) { EXPECT_THROW(inertia(HermitianMatrix::identity(2), -1.0), InputError); }

TEST(HermitianMatrix, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(0, 1), Complex(0, 1), 1.0;
  EXPECT_THROW(HermitianMatrix{m}, InputError);
}

TEST(HermitianMatrix, RejectsNonSquare) { EXPECT_THROW(HermitianMatrix{ComplexMatrix::Zero(2, 3)}, InputError); }

TEST(HermitianMatrix, DiagonalImaginaryPartsDropped) {
  ComplexMatrix m(1, 1);
  m << Complex(2.0, 1e-14);
  const HermitianMatrix h(m);
  EXPECT_EQ(h(0, 0).imag(), 0.0);
}

TEST(HermitianMatrix, DeterminantAndQuadraticForm) {
  const auto a = HermitianMatrix::real(2, {3.0, 1.0, 1.0, 3.0});
  EXPECT_NEAR(a.determinant(), 8.0, 1e-12);
  Eigen::VectorXcd z(2);
  z << 1.0, Complex(0.0, 1.0);
  // z^* A z = 3 + 3 + 1*(i) + 1*(-i) ... = 6
  EXPECT_NEAR(a.quadratic_form(z), 6.0, 1e-12);
}

TEST(HermitianMatrix, DimensionMismatch) {
  EXPECT_THROW(HermitianMatrix::identity(2) + HermitianMatrix::identity(3), InputError);
}
