#include "bfp/linalg.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace bfp {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidInput("CMatrix: entry count does not match shape");
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diag(std::span<const cplx> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  CMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw InvalidInput("CMatrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (const auto& x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

CMatrix CMatrix::column(std::span<const cplx> v) {
  return CMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

std::vector<cplx> CMatrix::col(std::size_t c) const {
  std::vector<cplx> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

cplx CMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("CMatrix +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("CMatrix -=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("CMatrix *: inner dimension mismatch");
  CMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    cplx* orow = &out.data_[i * b.cols_];
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a.data_[i * a.cols_ + k];
      if (aik == cplx(0.0)) continue;
      const cplx* brow = &b.data_[k * b.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) throw InvalidInput("CMatrix * vector: dimension mismatch");
  std::vector<cplx> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * v[k];
    out[i] = s;
  }
  return out;
}

double frobenius_norm(const CMatrix& m) { return norm2(m.data()); }

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m).front();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("max_abs_diff: shape mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  return d;
}

double hermiticity_defect(const CMatrix& m) {
  if (!m.is_square()) throw InvalidInput("hermiticity_defect: matrix not square");
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

cplx frobenius_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("frobenius_inner: shape mismatch");
  return inner(a.data(), b.data());
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t r = 0; r < a.cols(); ++r) {
      const cplx apr = a(p, r);
      if (apr == cplx(0.0)) continue;
      for (std::size_t q = 0; q < b.rows(); ++q)
        for (std::size_t s = 0; s < b.cols(); ++s) out(p * b.rows() + q, r * b.cols() + s) = apr * b(q, s);
    }
  return out;
}

namespace {

// Rotation zeroing the off-diagonal entry of the Hermitian block
// [[app, apq], [conj(apq), aqq]]. Returns (c, s, phase) so that the unitary
// acting on columns (p, q) is [[c, s], [-s e^{-iφ}, c e^{-iφ}]].
struct Rotation {
  double c;
  double s;
  cplx phase;  // e^{-iφ}
};

Rotation jacobi_rotation(double app, double aqq, cplx apq) {
  const double mag = std::abs(apq);
  const cplx phase = std::conj(apq) / mag;
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, phase};
}

}  // namespace

EigenDecomposition hermitian_eig(const CMatrix& m, const Tolerance& tol) {
  if (!m.is_square()) throw InvalidInput("hermitian_eig: matrix not square");
  double scale = 0.0;
  for (const auto& z : m.data()) scale = std::max(scale, std::abs(z));
  if (hermiticity_defect(m) > tol.eq_tol * std::max(1.0, scale)) {
    throw InvalidInput("hermitian_eig: matrix not Hermitian");
  }
  const std::size_t n = m.rows();
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  CMatrix v = CMatrix::identity(n);

  const double total = std::max(frobenius_norm(a), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-16 * total) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const Rotation rot = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        const cplx upp = rot.c, upq = rot.s, uqp = -rot.s * rot.phase, uqq = rot.c * rot.phase;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenDecomposition out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

std::vector<double> singular_values(const CMatrix& m) {
  // Work on the orientation with fewer columns; columns stored contiguously.
  const bool flip = m.cols() > m.rows();
  const std::size_t rows = flip ? m.cols() : m.rows();
  const std::size_t cols = flip ? m.rows() : m.cols();
  std::vector<std::vector<cplx>> g(cols, std::vector<cplx>(rows));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (flip) g[i][j] = std::conj(m(i, j));
      else g[j][i] = m(i, j);
    }

  constexpr double eps = 1e-15;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = std::pow(norm2(g[p]), 2);
        const double beta = std::pow(norm2(g[q]), 2);
        const cplx gamma = inner(g[p], g[q]);
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || std::abs(gamma) <= 1e-300) continue;
        rotated = true;
        const Rotation rot = jacobi_rotation(alpha, beta, gamma);
        const cplx upp = rot.c, upq = rot.s, uqp = -rot.s * rot.phase, uqq = rot.c * rot.phase;
        auto& gp = g[p];
        auto& gq = g[q];
        for (std::size_t k = 0; k < rows; ++k) {
          const cplx xp = gp[k], xq = gq[k];
          gp[k] = xp * upp + xq * uqp;
          gq[k] = xp * upq + xq * uqq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) sv[j] = norm2(g[j]);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::size_t numeric_rank(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  const auto sv = singular_values(m);
  if (sv.front() <= 0.0) return 0;
  const double cut = tol.rank_tol * sv.front();
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cut; }));
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = std::min(a.size(), b.size());
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag(), br = b[k].real(), bi = b[k].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

bool orthonormal_append(std::vector<CMatrix>& basis, CMatrix candidate, double rel_tol) {
  const double original = frobenius_norm(candidate);
  if (original == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const cplx c = frobenius_inner(b, candidate);
      axpy(-c, b.data(), candidate.data());
    }
  }
  const double residual = frobenius_norm(candidate);
  if (residual <= rel_tol * original) return false;
  candidate *= 1.0 / residual;
  basis.push_back(std::move(candidate));
  return true;
}

std::string to_string(const CMatrix& m, int precision) {
  std::ostringstream os;
  os << std::setprecision(precision);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : " ");
    for (std::size_t j = 0; j < m.cols(); ++j) os << " " << m(i, j);
    os << (i + 1 == m.rows() ? " ]" : "\n");
  }
  return os.str();
}

}  // namespace bfp
