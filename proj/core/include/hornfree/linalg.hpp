#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hornfree/rng.hpp"

namespace hornfree {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);

  static Matrix zeros(std::size_t n) { return Matrix(n, n); }
  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// Row-major real entries, convenience for tests and fixed examples.
  static Matrix from_real(std::size_t rows, std::size_t cols, std::span<const double> values);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const Complex> data() const { return data_; }
  [[nodiscard]] std::span<Complex> data() { return data_; }

  [[nodiscard]] Matrix adjoint() const;
  [[nodiscard]] Complex trace() const;
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] double frobenius_norm() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Tr(A B) without forming the product.
Complex trace_of_product(const Matrix& a, const Matrix& b);

/// ‖A − B‖_max.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Dense Hermitian matrix. Input within 1e-12·(1 + ‖M‖_max) of Hermitian is
/// accepted and symmetrized; anything further off throws StructuralError.
class HermitianMatrix {
 public:
  static constexpr double kIngestTolerance = 1e-12;

  HermitianMatrix() = default;
  explicit HermitianMatrix(Matrix m);

  static HermitianMatrix diagonal(std::span<const double> d);
  static HermitianMatrix from_real(std::size_t n, std::span<const double> values);

  [[nodiscard]] std::size_t dim() const { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] double trace() const { return m_.trace().real(); }
  [[nodiscard]] double operator()(std::size_t i) const { return m_(i, i).real(); }

  /// (M + M*)/2 without a tolerance check; for products that are Hermitian
  /// in exact arithmetic.
  static HermitianMatrix symmetrized(Matrix m);

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  Matrix m_;
};

/// Unitary matrix with ‖U*U − I‖_max ≤ 1e-10.
class UnitaryMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  UnitaryMatrix() = default;
  explicit UnitaryMatrix(Matrix m);

  static UnitaryMatrix identity(std::size_t n);
  /// Skips the O(n³) unitarity check; for outputs of unitary constructions.
  static UnitaryMatrix unchecked(Matrix m);

  [[nodiscard]] std::size_t dim() const { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return m_; }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

 private:
  Matrix m_;
};

/// ‖U*U − I‖_max.
double unitarity_defect(const Matrix& u);

/// Real values in nonincreasing order.
class EigenvalueSequence {
 public:
  EigenvalueSequence() = default;
  /// Throws StructuralError unless `values` is nonincreasing.
  explicit EigenvalueSequence(std::vector<double> values);
  /// Sorts into nonincreasing order.
  static EigenvalueSequence from_unsorted(std::vector<double> values);

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double sum() const;
  [[nodiscard]] double max_abs() const;

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const EigenvalueSequence&, const EigenvalueSequence&) = default;

 private:
  std::vector<double> values_;
};

/// All pairwise products a_i·b_j, sorted nonincreasing.
EigenvalueSequence tensor_product(const EigenvalueSequence& a, const EigenvalueSequence& b);

/// Each value repeated `d` times (the spectrum of diag(α) ⊗ 1_d).
EigenvalueSequence dilate(const EigenvalueSequence& a, std::size_t d);

struct EigenDecomposition {
  EigenvalueSequence values;
  UnitaryMatrix vectors;  // columns are eigenvectors, ordered like `values`
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Stops once the off-diagonal Frobenius mass drops
/// below 1e-12·‖A‖_F; throws ConvergenceError after 60 sweeps.
EigenDecomposition eig_hermitian(const HermitianMatrix& a);
EigenvalueSequence eigenvalues(const HermitianMatrix& a);

/// Q diag(λ) Q*.
Matrix reconstruct(const EigenDecomposition& e);

Matrix kron(const Matrix& a, const Matrix& b);
HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

/// U A U*.
HermitianMatrix conjugate(const UnitaryMatrix& u, const HermitianMatrix& a);

/// True iff lo·1 ≤ A ≤ hi·1, decided by two Cholesky factorizations of the
/// shifted matrices. `slack` widens the interval on both sides.
bool spectrum_within(const HermitianMatrix& a, double lo, double hi, double slack = 0.0);

/// Haar-distributed unitary: Householder QR of a complex Ginibre matrix with
/// the columns of Q rephased by R_kk/|R_kk| so the factorization is unique.
UnitaryMatrix haar_unitary(std::size_t n, Rng& rng);

/// Z + Z* with Z having i.i.d. complex Gaussian entries of variance 1/(2n).
/// Off-diagonal entries have E|X_ij|² = 1/n, diagonal entries variance 1/n.
HermitianMatrix sample_gue(std::size_t n, Rng& rng);

/// ((u+v)/2)·1 + ((v−u)/4)·X with X from sample_gue; requires u < v. The
/// limiting spectrum is [u, v], and the affine map of shifted_cheb sends the
/// result back to X exactly.
HermitianMatrix shifted_gue(std::size_t n, double u, double v, Rng& rng);

/// Random Hermitian matrix with i.i.d. standard complex Gaussian entries
/// (unscaled); used for generic-position probes.
HermitianMatrix random_hermitian(std::size_t n, Rng& rng);

}  // namespace hornfree
