#include "hornfree/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hornfree/errors.hpp"

namespace hornfree {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (!m.square()) throw StructuralError(std::string(what) + ": matrix is not square");
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw StructuralError(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw StructuralError("Matrix: data size does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_real(std::size_t rows, std::size_t cols, std::span<const double> values) {
  if (values.size() != rows * cols) throw StructuralError("Matrix::from_real: wrong number of entries");
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex Matrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "Matrix::operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "Matrix::operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw StructuralError("Matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  // i-k-j order keeps the inner loop contiguous in both b and c.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex* crow = &c(i, 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      const Complex* brow = &b(k, 0);
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Complex trace_of_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw StructuralError("trace_of_product: shape mismatch");
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

// ---------------------------------------------------------------- HermitianMatrix

HermitianMatrix::HermitianMatrix(Matrix m) {
  require_square(m, "HermitianMatrix");
  if (m.rows() == 0) throw StructuralError("HermitianMatrix: dimension must be at least 1");
  const double tol = kIngestTolerance * (1.0 + m.max_abs());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) {
        throw StructuralError("HermitianMatrix: entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") violates Hermitian symmetry");
      }
  m_ = symmetrized(std::move(m)).m_;
}

HermitianMatrix HermitianMatrix::symmetrized(Matrix m) {
  require_square(m, "HermitianMatrix::symmetrized");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  HermitianMatrix h;
  h.m_ = std::move(m);
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  return symmetrized(Matrix::diagonal(d));
}

HermitianMatrix HermitianMatrix::from_real(std::size_t n, std::span<const double> values) {
  return HermitianMatrix(Matrix::from_real(n, n, values));
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::symmetrized(a.matrix() + b.matrix());
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix::symmetrized(a.matrix() * Complex(s));
}

// ---------------------------------------------------------------- UnitaryMatrix

double unitarity_defect(const Matrix& u) {
  return max_abs_diff(u.adjoint() * u, Matrix::identity(u.cols()));
}

UnitaryMatrix::UnitaryMatrix(Matrix m) {
  require_square(m, "UnitaryMatrix");
  if (unitarity_defect(m) > kTolerance) throw StructuralError("UnitaryMatrix: U*U deviates from identity");
  m_ = std::move(m);
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t n) { return unchecked(Matrix::identity(n)); }

UnitaryMatrix UnitaryMatrix::unchecked(Matrix m) {
  require_square(m, "UnitaryMatrix");
  UnitaryMatrix u;
  u.m_ = std::move(m);
  return u;
}

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  return UnitaryMatrix::unchecked(a.matrix() * b.matrix());
}

// ---------------------------------------------------------------- EigenvalueSequence

EigenvalueSequence::EigenvalueSequence(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i + 1 < values_.size(); ++i)
    if (!(values_[i] >= values_[i + 1])) throw StructuralError("EigenvalueSequence: values are not nonincreasing");
}

EigenvalueSequence EigenvalueSequence::from_unsorted(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  return EigenvalueSequence(std::move(values));
}

double EigenvalueSequence::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double EigenvalueSequence::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

EigenvalueSequence tensor_product(const EigenvalueSequence& a, const EigenvalueSequence& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a)
    for (double y : b) out.push_back(x * y);
  return EigenvalueSequence::from_unsorted(std::move(out));
}

EigenvalueSequence dilate(const EigenvalueSequence& a, std::size_t d) {
  std::vector<double> out;
  out.reserve(a.size() * d);
  for (double x : a) out.insert(out.end(), d, x);
  return EigenvalueSequence(std::move(out));
}

// ---------------------------------------------------------------- Jacobi eigensolver

namespace {

constexpr int kMaxSweeps = 60;
constexpr double kOffDiagonalRelTol = 1e-12;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Applies the unitary W that acts on coordinates (p, q) as
//   W = [[c, s], [-s·conj(ph), c·conj(ph)]]   (ph = a_pq/|a_pq|)
// via A ← W* A W and V ← V W. Afterwards a_pq = 0.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  const Complex ph = apq / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex wpp = c;
  const Complex wpq = s;
  const Complex wqp = -s * std::conj(ph);
  const Complex wqq = c * std::conj(ph);
  const std::size_t n = a.rows();

  // Columns: A ← A W.
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * wpp + akq * wqp;
    a(k, q) = akp * wpq + akq * wqq;
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * wpp + vkq * wqp;
    v(k, q) = vkp * wpq + vkq * wqq;
  }
  // Rows: A ← W* A.
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(wpp) * apk + std::conj(wqp) * aqk;
    a(q, k) = std::conj(wpq) * apk + std::conj(wqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;
}

// Lexicographic comparison of two eigenvector columns (real part, then
// imaginary part, row by row).
bool column_less(const Matrix& v, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < v.rows(); ++k) {
    if (v(k, i).real() != v(k, j).real()) return v(k, i).real() < v(k, j).real();
    if (v(k, i).imag() != v(k, j).imag()) return v(k, i).imag() < v(k, j).imag();
  }
  return false;
}

}  // namespace

EigenDecomposition eig_hermitian(const HermitianMatrix& h) {
  Matrix a = h.matrix();
  const std::size_t n = a.rows();
  Matrix v = Matrix::identity(n);
  const double target = kOffDiagonalRelTol * a.frobenius_norm();

  int sweeps = 0;
  while (off_diagonal_norm(a) > target) {
    if (sweeps == kMaxSweeps) throw ConvergenceError("eig_hermitian: no convergence after 60 sweeps");
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > 0.0) jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double li = a(i, i).real();
    const double lj = a(j, j).real();
    if (li != lj) return li > lj;
    return column_less(v, i, j);
  });

  std::vector<double> values(n);
  Matrix vectors(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) vectors(r, c) = v(r, order[c]);
  }
  return EigenDecomposition{EigenvalueSequence(std::move(values)), UnitaryMatrix::unchecked(std::move(vectors)),
                            sweeps};
}

EigenvalueSequence eigenvalues(const HermitianMatrix& a) { return eig_hermitian(a).values; }

Matrix reconstruct(const EigenDecomposition& e) {
  const Matrix& q = e.vectors.matrix();
  Matrix scaled = q;
  for (std::size_t r = 0; r < q.rows(); ++r)
    for (std::size_t c = 0; c < q.cols(); ++c) scaled(r, c) *= e.values[c];
  return scaled * q.adjoint();
}

// ---------------------------------------------------------------- products

Matrix kron(const Matrix& a, const Matrix& b) {
  require_square(a, "kron");
  require_square(b, "kron");
  const std::size_t na = a.rows();
  const std::size_t nb = b.rows();
  Matrix out(na * nb, na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::symmetrized(kron(a.matrix(), b.matrix()));
}

HermitianMatrix conjugate(const UnitaryMatrix& u, const HermitianMatrix& a) {
  if (u.dim() != a.dim()) throw StructuralError("conjugate: dimension mismatch");
  return HermitianMatrix::symmetrized(u.matrix() * a.matrix() * u.matrix().adjoint());
}

// ---------------------------------------------------------------- spectral bounds

namespace {

// Cholesky of a Hermitian matrix; false as soon as a pivot is not positive.
bool positive_definite(Matrix a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(a(j, k));
    if (!(d > 0.0)) return false;
    const double l = std::sqrt(d);
    a(j, j) = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * std::conj(a(j, k));
      a(i, j) = s / l;
    }
  }
  return true;
}

}  // namespace

bool spectrum_within(const HermitianMatrix& a, double lo, double hi, double slack) {
  if (!(lo <= hi)) throw DomainError("spectrum_within: empty interval");
  const double eps = std::max(slack, 1e-300);
  Matrix below = a.matrix();
  Matrix above = a.matrix() * Complex(-1.0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    below(i, i) -= lo - eps;
    above(i, i) += hi + eps;
  }
  return positive_definite(std::move(below)) && positive_definite(std::move(above));
}

// ---------------------------------------------------------------- sampling

UnitaryMatrix haar_unitary(std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("haar_unitary: dimension must be at least 1");
  const double scale = std::sqrt(0.5);
  Matrix r(n, n);
  for (auto& z : r.data()) z = Complex(rng.normal() * scale, rng.normal() * scale);

  Matrix q = Matrix::identity(n);
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double xnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) xnorm2 += std::norm(r(i, k));
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) continue;
    const Complex x0 = r(k, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -phase * xnorm;
    for (std::size_t i = k; i < n; ++i) v[i] = r(i, k);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    // R ← H R with H = 1 − 2 v v*/‖v‖².
    for (std::size_t j = k; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += std::conj(v[i]) * r(i, j);
      const Complex f = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= f * v[i];
    }
    // Q ← Q H.
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot = 0.0;
      for (std::size_t l = k; l < n; ++l) dot += q(i, l) * v[l];
      const Complex f = 2.0 * dot / vnorm2;
      for (std::size_t l = k; l < n; ++l) q(i, l) -= f * std::conj(v[l]);
    }
  }
  // Phase correction: make diag(R) positive real by moving its phases into Q.
  for (std::size_t k = 0; k < n; ++k) {
    const Complex rkk = r(k, k);
    const Complex ph = std::abs(rkk) > 0.0 ? rkk / std::abs(rkk) : Complex(1.0);
    for (std::size_t i = 0; i < n; ++i) q(i, k) *= ph;
  }
  return UnitaryMatrix::unchecked(std::move(q));
}

HermitianMatrix sample_gue(std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("sample_gue: dimension must be at least 1");
  const double dn = static_cast<double>(n);
  const double diag_sd = std::sqrt(1.0 / dn);
  const double off_sd = std::sqrt(1.0 / (2.0 * dn));
  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, i) = rng.normal() * diag_sd;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z(rng.normal() * off_sd, rng.normal() * off_sd);
      x(i, j) = z;
      x(j, i) = std::conj(z);
    }
  }
  return HermitianMatrix::symmetrized(std::move(x));
}

HermitianMatrix shifted_gue(std::size_t n, double u, double v, Rng& rng) {
  if (!(u < v)) throw DomainError("shifted_gue: requires u < v");
  Matrix m = sample_gue(n, rng).matrix() * Complex((v - u) / 4.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += (u + v) / 2.0;
  return HermitianMatrix::symmetrized(std::move(m));
}

HermitianMatrix random_hermitian(std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("random_hermitian: dimension must be at least 1");
  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z(rng.normal(), rng.normal());
      x(i, j) = z;
      x(j, i) = std::conj(z);
    }
  }
  return HermitianMatrix::symmetrized(std::move(x));
}

}  // namespace hornfree
