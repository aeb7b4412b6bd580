#include "bsep/linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "bsep/error.hpp"

namespace bsep {

HermitianMatrix::HermitianMatrix(std::size_t n)
    : m_(ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {}

HermitianMatrix HermitianMatrix::from_upper(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::invalid_argument, "hermitian matrix must be square");
  HermitianMatrix out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.m_(i, i) = Complex(m(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      out.m_(i, j) = m(i, j);
      out.m_(j, i) = std::conj(m(i, j));
    }
  }
  return out;
}

HermitianMatrix HermitianMatrix::from_dense(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) fail(ErrorKind::invalid_argument, "hermitian matrix must be square");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) {
        fail(ErrorKind::invalid_argument,
             "matrix is not hermitian at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return from_upper(m);
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
  HermitianMatrix out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.set_diagonal(i, d[i]);
  return out;
}

void HermitianMatrix::set(std::size_t i, std::size_t j, Complex value) {
  const auto r = static_cast<Eigen::Index>(i);
  const auto c = static_cast<Eigen::Index>(j);
  if (i == j) {
    m_(r, r) = Complex(value.real(), 0.0);
    return;
  }
  m_(r, c) = value;
  m_(c, r) = std::conj(value);
}

void HermitianMatrix::set_diagonal(std::size_t i, double value) {
  const auto r = static_cast<Eigen::Index>(i);
  m_(r, r) = Complex(value, 0.0);
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (Eigen::Index i = 0; i < m_.rows(); ++i) t += m_(i, i).real();
  return t;
}

double Spectrum::sum() const {
  return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
}

Spectrum eigenvalues_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.dense(), Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  return Spectrum{std::vector<double>(v.data(), v.data() + v.size())};
}

Eigensystem eigensystem_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.dense(), Eigen::ComputeEigenvectors);
  const auto& v = solver.eigenvalues();
  return Eigensystem{Spectrum{std::vector<double>(v.data(), v.data() + v.size())},
                     solver.eigenvectors()};
}

bool is_psd(const HermitianMatrix& m, double tol) {
  return eigenvalues_hermitian(m).min() >= -tol;
}

bool QuaternionMatrix4::is_self_adjoint(double tol) const {
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) {
      const Quaternion d = (*this)(i, j) - (*this)(j, i).conj();
      if (std::sqrt(d.norm2()) > tol) return false;
    }
  }
  return true;
}

Eigen::Matrix2cd quaternion_block(const Quaternion& q) {
  const Complex a = q.a();
  const Complex b = q.b();
  Eigen::Matrix2cd blk;
  blk << a, b, -std::conj(b), std::conj(a);
  return blk;
}

HermitianMatrix embed_quaternionic(const QuaternionMatrix4& h) {
  if (!h.is_self_adjoint()) {
    fail(ErrorKind::invalid_argument, "quaternionic matrix is not self-adjoint");
  }
  ComplexMatrix m(8, 8);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      m.block<2, 2>(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * j)) =
          quaternion_block(h(i, j));
    }
  }
  return HermitianMatrix::from_upper(m);
}

namespace {

// Basis index of |first, second> with both qubits in {0, 1}.
constexpr Eigen::Index two_qubit_index(int first, int second) { return 2 * first + second; }

}  // namespace

HermitianMatrix partial_transpose(const HermitianMatrix& rho) {
  const std::size_t n = rho.size();
  if (n != 4 && n != 8) {
    fail(ErrorKind::invalid_argument,
         "partial transpose needs a 4x4 matrix or an 8x8 quaternionic embedding, got " +
             std::to_string(n) + "x" + std::to_string(n));
  }
  const Eigen::Index blk = n == 4 ? 1 : 2;
  const ComplexMatrix& src = rho.dense();
  ComplexMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (int i = 0; i < 2; ++i) {
    for (int a = 0; a < 2; ++a) {
      for (int j = 0; j < 2; ++j) {
        for (int b = 0; b < 2; ++b) {
          const Eigen::Index row = two_qubit_index(i, a) * blk;
          const Eigen::Index col = two_qubit_index(j, b) * blk;
          const Eigen::Index src_row = two_qubit_index(i, b) * blk;
          const Eigen::Index src_col = two_qubit_index(j, a) * blk;
          out.block(row, col, blk, blk) = src.block(src_row, src_col, blk, blk);
        }
      }
    }
  }
  // Entries were permuted, not recomputed, so the result is exactly hermitian.
  return HermitianMatrix::from_upper(out);
}

}  // namespace bsep
