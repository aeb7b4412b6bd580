#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "bsep/quaternion.hpp"

namespace bsep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Dense self-adjoint matrix over the complex numbers. Every mutation writes
/// both triangles, so M == M^† holds bit-for-bit.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t n);

  /// Mirrors the upper triangle of `m` into the lower one; imaginary parts of
  /// the diagonal are dropped.
  static HermitianMatrix from_upper(const ComplexMatrix& m);

  /// Rejects `m` unless it is hermitian to `tol` (absolute, per entry).
  static HermitianMatrix from_dense(const ComplexMatrix& m, double tol = 1e-12);

  static HermitianMatrix diagonal(const std::vector<double>& d);

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }

  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  void set(std::size_t i, std::size_t j, Complex value);
  void set_diagonal(std::size_t i, double value);

  double trace() const;

  const ComplexMatrix& dense() const { return m_; }

  friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  ComplexMatrix m_;
};

/// Eigenvalues in ascending order.
struct Spectrum {
  std::vector<double> eigenvalues;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
  double sum() const;
};

/// Eigenvalues plus the unitary whose columns are the matching eigenvectors.
struct Eigensystem {
  Spectrum spectrum;
  ComplexMatrix vectors;
};

Spectrum eigenvalues_hermitian(const HermitianMatrix& m);
Eigensystem eigensystem_hermitian(const HermitianMatrix& m);

inline constexpr double kDefaultPsdTol = 1e-10;

bool is_psd(const HermitianMatrix& m, double tol = kDefaultPsdTol);

/// 4×4 matrix with quaternion entries, used only as input to the embedding.
class QuaternionMatrix4 {
 public:
  Quaternion& operator()(std::size_t i, std::size_t j) { return e_[i * 4 + j]; }
  const Quaternion& operator()(std::size_t i, std::size_t j) const { return e_[i * 4 + j]; }

  bool is_self_adjoint(double tol = 1e-14) const;

 private:
  std::array<Quaternion, 16> e_{};
};

/// Symplectic embedding: entry q = a + b·j becomes the block [[a, b], [-b̄, ā]].
HermitianMatrix embed_quaternionic(const QuaternionMatrix4& h);

/// 2×2 complex block representing a single quaternion.
Eigen::Matrix2cd quaternion_block(const Quaternion& q);

/// Partial transpose on the second qubit of a 2⊗2 system. An 8×8 argument is
/// read as the embedding of a quaternionic 4×4 matrix, and its 2×2 blocks are
/// permuted without being transposed internally.
HermitianMatrix partial_transpose(const HermitianMatrix& rho);

}  // namespace bsep
