#include <gtest/gtest.h>

#include <random>

#include "bsep/error.hpp"
#include "bsep/linalg.hpp"
#include "bsep/quaternion.hpp"

using namespace bsep;

namespace {

ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return (m + m.adjoint()) / 2.0;
}

Quaternion random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng), g(rng), g(rng)};
}

}  // namespace

TEST(Quaternion, HamiltonTable) {
  const Quaternion one(1, 0, 0, 0), i(0, 1, 0, 0), j(0, 0, 1, 0), k(0, 0, 0, 1);
  EXPECT_EQ(quat_mul(i, j), k);
  EXPECT_EQ(quat_mul(j, k), i);
  EXPECT_EQ(quat_mul(k, i), j);
  EXPECT_EQ(quat_mul(j, i), -1.0 * k);
  EXPECT_EQ(quat_mul(i, i), -1.0 * one);
  EXPECT_EQ(quat_mul(quat_mul(i, j), k), -1.0 * one);
}

TEST(Quaternion, NormIsMultiplicative) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const Quaternion p = random_quaternion(rng);
    const Quaternion q = random_quaternion(rng);
    EXPECT_NEAR(quat_mul(p, q).norm(), p.norm() * q.norm(), 1e-12 * p.norm() * q.norm());
    const Quaternion pc = quat_mul(p, p.conj());
    EXPECT_NEAR(pc.w, p.norm2(), 1e-12 * p.norm2());
    EXPECT_NEAR(pc.x, 0.0, 1e-12 * p.norm2());
  }
}

TEST(Quaternion, BlockEmbeddingIsAHomomorphism) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Quaternion p = random_quaternion(rng);
    const Quaternion q = random_quaternion(rng);
    const Eigen::Matrix2cd lhs = quaternion_block(quat_mul(p, q));
    const Eigen::Matrix2cd rhs = quaternion_block(p) * quaternion_block(q);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((quaternion_block(p.conj()) - quaternion_block(p).adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Hermitian, FromDenseRejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Identity(3, 3);
  m(0, 1) = Complex(1.0, 0.5);
  EXPECT_THROW(HermitianMatrix::from_dense(m), Error);
  m(1, 0) = Complex(1.0, -0.5);
  EXPECT_NO_THROW(HermitianMatrix::from_dense(m));
}

TEST(Hermitian, SetKeepsBothTriangles) {
  HermitianMatrix h(3);
  h.set(0, 2, Complex(0.3, -0.7));
  EXPECT_EQ(h(2, 0), Complex(0.3, 0.7));
  h.set_diagonal(1, 2.5);
  EXPECT_DOUBLE_EQ(h.trace(), 2.5);
}

TEST(Spectrum, RootsOfTheCharacteristicPolynomial) {
  std::mt19937_64 rng(11);
  for (int n : {2, 4, 8}) {
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix m = random_hermitian(rng, n);
      const Spectrum s = eigenvalues_hermitian(HermitianMatrix::from_dense(m));
      ASSERT_EQ(static_cast<int>(s.eigenvalues.size()), n);
      EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
      EXPECT_NEAR(s.sum(), m.trace().real(), 1e-10);
      double prod = 1.0;
      for (double l : s.eigenvalues) prod *= l;
      EXPECT_NEAR(prod, m.determinant().real(), 1e-9 * std::max(1.0, std::abs(prod)));
      for (double l : s.eigenvalues) {
        const ComplexMatrix shifted = m - l * ComplexMatrix::Identity(n, n);
        // Smallest singular value of M - λI vanishes at an eigenvalue.
        Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
        EXPECT_LT(svd.singularValues().minCoeff(), 1e-10);
      }
    }
  }
}

TEST(Spectrum, EigenvectorsDiagonalise) {
  std::mt19937_64 rng(13);
  const ComplexMatrix m = random_hermitian(rng, 4);
  const Eigensystem es = eigensystem_hermitian(HermitianMatrix::from_dense(m));
  const ComplexMatrix d = es.vectors.adjoint() * m * es.vectors;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double expect = i == j ? es.spectrum.eigenvalues[static_cast<std::size_t>(i)] : 0.0;
      EXPECT_NEAR(std::abs(d(i, j) - expect), 0.0, 1e-12);
    }
  }
}

TEST(Spectrum, IsPsdUsesTolerance) {
  EXPECT_TRUE(is_psd(HermitianMatrix::diagonal({1.0, 0.0, -1e-12})));
  EXPECT_FALSE(is_psd(HermitianMatrix::diagonal({1.0, 0.0, -1e-6})));
}

TEST(Embedding, QuaternionicSpectrumIsDoubled) {
  // Diagonal quaternionic matrices embed to doubled real spectra.
  QuaternionMatrix4 h;
  const double d[4] = {0.1, 0.2, 0.3, 0.4};
  for (std::size_t i = 0; i < 4; ++i) h(i, i) = Quaternion(d[i]);
  h(1, 2) = Quaternion(0.01, 0.02, 0.03, 0.04);
  h(2, 1) = h(1, 2).conj();
  const Spectrum s = eigenvalues_hermitian(embed_quaternionic(h));
  ASSERT_EQ(s.eigenvalues.size(), 8u);
  for (std::size_t i = 0; i < 8; i += 2) EXPECT_NEAR(s.eigenvalues[i], s.eigenvalues[i + 1], 1e-12);
  EXPECT_NEAR(s.sum(), 2.0, 1e-12);
}

TEST(Embedding, RejectsNonSelfAdjoint) {
  QuaternionMatrix4 h;
  h(0, 1) = Quaternion(0.0, 1.0, 0.0, 0.0);
  h(1, 0) = Quaternion(0.0, 1.0, 0.0, 0.0);
  EXPECT_THROW(embed_quaternionic(h), Error);
}

TEST(PartialTranspose, BellStateHasNegativeEigenvalue) {
  // |Φ+><Φ+| with |Φ+> = (|00> + |11>)/√2: the partial transpose is the swap / 2.
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  const Spectrum s = eigenvalues_hermitian(partial_transpose(HermitianMatrix::from_dense(m)));
  EXPECT_NEAR(s.min(), -0.5, 1e-14);
  EXPECT_NEAR(s.max(), 0.5, 1e-14);
}

TEST(PartialTranspose, MovesEntriesAndIsAnInvolution) {
  std::mt19937_64 rng(17);
  const HermitianMatrix h = HermitianMatrix::from_dense(random_hermitian(rng, 4));
  const HermitianMatrix pt = partial_transpose(h);
  // Transposing the second qubit exchanges (1,4) with (2,3) (1-based).
  EXPECT_EQ(pt(0, 3), h(1, 2));
  EXPECT_EQ(pt(1, 2), h(0, 3));
  EXPECT_EQ(pt(0, 1), h(1, 0));
  EXPECT_EQ(pt(0, 0), h(0, 0));
  EXPECT_EQ(partial_transpose(pt), h);
}

TEST(PartialTranspose, ProductStatesStayPositive) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix a = random_hermitian(rng, 2);
    ComplexMatrix b = random_hermitian(rng, 2);
    a = a * a.adjoint();
    b = b * b.adjoint();
    ComplexMatrix ab(4, 4);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) ab.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    }
    EXPECT_TRUE(is_psd(partial_transpose(HermitianMatrix::from_dense(ab, 1e-10))));
  }
}

TEST(PartialTranspose, RejectsOtherSizes) {
  EXPECT_THROW(partial_transpose(HermitianMatrix(3)), Error);
}
