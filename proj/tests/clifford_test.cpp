#include "test_support.hpp"

#include <gtest/gtest.h>

namespace cpsdrank {
namespace {

using namespace testing;
using clifford::gamma_generators;
using clifford::gamma_of_vector;
namespace pauli = clifford::pauli;

TEST(GammaGenerators, RankTwoIsXY) {
  const auto rep = gamma_generators(2);
  EXPECT_EQ(rep.rep_dim, 2);
  ASSERT_EQ(rep.generators.size(), 2u);
  EXPECT_EQ(rep.generators[0], pauli::x());
  EXPECT_EQ(rep.generators[1], pauli::y());
}

TEST(GammaGenerators, RankThreeIsXYZ) {
  const auto rep = gamma_generators(3);
  EXPECT_EQ(rep.rep_dim, 2);
  ASSERT_EQ(rep.generators.size(), 3u);
  EXPECT_EQ(rep.generators[0], pauli::x());
  EXPECT_EQ(rep.generators[1], pauli::y());
  EXPECT_EQ(rep.generators[2], pauli::z());
}

TEST(GammaGenerators, RankFourExpandsTensorFormulas) {
  const auto rep = gamma_generators(4);
  EXPECT_EQ(rep.rep_dim, 4);
  ASSERT_EQ(rep.generators.size(), 4u);
  const CMatrix i2 = pauli::identity();
  EXPECT_EQ(rep.generators[0], kron_by_index(pauli::x(), i2));
  EXPECT_EQ(rep.generators[1], kron_by_index(pauli::z(), pauli::x()));
  EXPECT_EQ(rep.generators[2], kron_by_index(pauli::y(), i2));
  EXPECT_EQ(rep.generators[3], kron_by_index(pauli::z(), pauli::y()));
  // brute-force anticommutation of the expanded matrices
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const CMatrix& a = rep.generators[static_cast<std::size_t>(i)];
      const CMatrix& b = rep.generators[static_cast<std::size_t>(j)];
      const CMatrix expect = (i == j ? 2.0 : 0.0) * CMatrix::Identity(4, 4);
      EXPECT_EQ(CMatrix(a * b + b * a), expect);
    }
}

TEST(GammaGenerators, RankOneUsesTracelessZ) {
  const auto rep = gamma_generators(1);
  EXPECT_EQ(rep.rep_dim, 2);
  ASSERT_EQ(rep.generators.size(), 1u);
  EXPECT_EQ(rep.generators[0], pauli::z());
  EXPECT_EQ(clifford::theoretical_dim(1), 1);
}

TEST(GammaGenerators, RejectsRankZero) { EXPECT_THROW(gamma_generators(0), Error); }

// Property: relations, dimension and tracelessness for r = 1..10.
TEST(GammaGenerators, RelationsDimensionTraceless) {
  for (int r = 1; r <= 10; ++r) {
    const auto rep = gamma_generators(r);
    const auto report = clifford::verify_clifford_relations(rep.generators);
    EXPECT_TRUE(report.passed()) << "r = " << r;
    EXPECT_LT(report.max_deviation(), 1e-12);
    if (r >= 2) {
      EXPECT_EQ(rep.rep_dim, 1 << (r / 2));
    }
    for (const auto& g : rep.generators) {
      EXPECT_EQ(g.rows(), rep.rep_dim);
      EXPECT_LT(std::abs(g.trace()), 1e-15);
      EXPECT_LT(linalg::hermitian_deviation(g), 1e-15);
    }
  }
}

TEST(GammaOfVector, BasisVector) {
  const auto rep = gamma_generators(2);
  EXPECT_EQ(gamma_of_vector(rep, basis(0, 2)), pauli::x());
}

TEST(GammaOfVector, DiagonalDirectionSquaresToIdentity) {
  const auto rep = gamma_generators(2);
  const CMatrix g = gamma_of_vector(rep, vec2(kInvSqrt2, kInvSqrt2));
  EXPECT_LT(max_abs(g - (pauli::x() + pauli::y()) * kInvSqrt2), 1e-15);
  EXPECT_LT(max_abs(g * g - CMatrix::Identity(2, 2)), 1e-15);
}

TEST(GammaOfVector, LengthMismatch) {
  try {
    gamma_of_vector(gamma_generators(3), vec2(1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

// Property: γ(x)² = ‖x‖² I and d<x,y> = Tr(γ(x)γ(y)), linearity, zero trace.
TEST(GammaOfVector, SquareTraceAndLinearity) {
  std::mt19937_64 rng(31);
  for (int r = 1; r <= 8; ++r) {
    const auto rep = gamma_generators(r);
    const CMatrix id = CMatrix::Identity(rep.rep_dim, rep.rep_dim);
    for (int t = 0; t < 25; ++t) {
      const RVector xv = random_real(r, rng);
      const RVector yv = random_real(r, rng);
      const CMatrix gx = gamma_of_vector(rep, xv);
      const CMatrix gy = gamma_of_vector(rep, yv);
      EXPECT_LT(max_abs(gx * gx - xv.squaredNorm() * id), 1e-12);
      EXPECT_LT(std::abs(trace_product(gx, gy) - Complex(rep.rep_dim * xv.dot(yv))), 1e-12);
      EXPECT_LT(std::abs(linalg::hs_inner(gx, id)) / rep.rep_dim, 1e-14);
      const double alpha = 0.3 * t - 2.0;
      const double beta = 1.5;
      EXPECT_LT(max_abs(gamma_of_vector(rep, alpha * xv + beta * yv) - (alpha * gx + beta * gy)),
                1e-12);
    }
  }
}

TEST(VerifyCliffordRelations, Paulis) {
  const std::vector<CMatrix> mats{pauli::x(), pauli::y(), pauli::z()};
  const auto report = clifford::verify_clifford_relations(mats);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.max_deviation(), 0.0);
}

TEST(VerifyCliffordRelations, RepeatedGeneratorFails) {
  const std::vector<CMatrix> mats{pauli::x(), pauli::x()};
  const auto report = clifford::verify_clifford_relations(mats);
  EXPECT_FALSE(report.passed());
  EXPECT_FALSE(report.find_check("anticommutation")->passed);
  EXPECT_TRUE(report.find_check("squares")->passed);
  EXPECT_DOUBLE_EQ(report.max_deviation(), 2.0);
}

TEST(VerifyCliffordRelations, RankSixAtDimensionEight) {
  const auto rep = gamma_generators(6);
  EXPECT_EQ(rep.rep_dim, 8);
  EXPECT_TRUE(clifford::verify_clifford_relations(rep.generators).passed());
}

TEST(VerifyCliffordRelations, Errors) {
  const std::vector<CMatrix> mixed{pauli::x(), CMatrix::Identity(4, 4)};
  try {
    clifford::verify_clifford_relations(mixed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
  CMatrix skew = pauli::x();
  skew(0, 1) = 2.0;
  const std::vector<CMatrix> bad{skew};
  try {
    clifford::verify_clifford_relations(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

}  // namespace
}  // namespace cpsdrank
