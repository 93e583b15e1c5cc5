#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfp {

using cplx = std::complex<double>;

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedStructure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerance {
  double eq_tol = 1e-9;
  double rank_tol = 1e-10;
};

/// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix diag(std::span<const cplx> d);
  static CMatrix diag(std::initializer_list<cplx> d) { return diag(std::span<const cplx>(d.begin(), d.size())); }
  static CMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  /// Column vector.
  static CMatrix column(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }
  std::vector<cplx> col(std::size_t c) const;

  CMatrix adjoint() const;
  CMatrix transpose() const;
  cplx trace() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend bool operator==(const CMatrix& a, const CMatrix& b) = default;

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> v);

double frobenius_norm(const CMatrix& m);
/// Largest singular value.
double operator_norm(const CMatrix& m);
double max_abs_diff(const CMatrix& a, const CMatrix& b);
/// ‖m − m*‖ in max-abs entries.
double hermiticity_defect(const CMatrix& m);
/// Frobenius inner product tr(a* b).
cplx frobenius_inner(const CMatrix& a, const CMatrix& b);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Kronecker product; index (p,q) of the result is p*dim(b) + q.
CMatrix kron(const CMatrix& a, const CMatrix& b);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns are eigenvectors
};

/// Cyclic Jacobi eigensolver for Hermitian matrices.
EigenDecomposition hermitian_eig(const CMatrix& m, const Tolerance& tol = {});

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const CMatrix& m);

/// Number of singular values above rank_tol times the largest one.
std::size_t numeric_rank(const CMatrix& m, const Tolerance& tol = {});

// Vector helpers on complex sequences.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // Σ conj(a_k) b_k
double norm2(std::span<const cplx> v);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);  // y += αx

/// Modified Gram–Schmidt over the Frobenius inner product, appending each
/// candidate whose residual exceeds rel_tol·‖candidate‖ (with reorthogonalization).
/// Returns true when the candidate was appended.
bool orthonormal_append(std::vector<CMatrix>& basis, CMatrix candidate, double rel_tol);

std::string to_string(const CMatrix& m, int precision = 6);

}  // namespace bfp
