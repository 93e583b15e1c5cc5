#include "bfp/algebra.h"

#include <cmath>
#include <sstream>

namespace bfp {

std::vector<cplx> MatrixStarAlgebra::expand(const CMatrix& a) const {
  std::vector<cplx> c(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) c[k] = frobenius_inner(basis_[k], a);
  return c;
}

double MatrixStarAlgebra::residual(const CMatrix& a) const {
  CMatrix r = a;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis_) axpy(-frobenius_inner(b, r), b.data(), r.data());
  return frobenius_norm(r);
}

bool MatrixStarAlgebra::contains(const CMatrix& a, const Tolerance& tol) const {
  if (a.rows() != ambient_dim_ || a.cols() != ambient_dim_) return false;
  return residual(a) <= tol.eq_tol * std::max(1.0, frobenius_norm(a));
}

std::vector<std::string> density_violations(const CMatrix& density, const Tolerance& tol) {
  std::vector<std::string> out;
  if (!density.is_square() || density.rows() == 0) {
    out.push_back("density is not a non-empty square matrix");
    return out;
  }
  if (!density.all_finite()) {
    out.push_back("density has non-finite entries");
    return out;
  }
  if (hermiticity_defect(density) > tol.eq_tol) {
    out.push_back("density is not Hermitian");
    return out;
  }
  const cplx tr = density.trace();
  if (std::abs(tr - cplx(1.0)) > tol.eq_tol) {
    std::ostringstream os;
    os << "trace != 1 (trace = " << tr.real() << ")";
    out.push_back(os.str());
  }
  const auto eig = hermitian_eig(density, tol);
  for (double lambda : eig.values) {
    if (lambda < -tol.eq_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "density has negative eigenvalue " << lambda;
      out.push_back(os.str());
      break;
    }
  }
  return out;
}

StateOnMatrices::StateOnMatrices(CMatrix density, const Tolerance& tol) : density_(std::move(density)) {
  const auto problems = density_violations(density_, tol);
  if (!problems.empty()) throw InvalidInput("invalid density: " + problems.front());
}

cplx StateOnMatrices::operator()(const CMatrix& a) const {
  if (a.rows() != dim() || a.cols() != dim()) throw InvalidInput("state applied to matrix of wrong size");
  // tr(ρ a) = Σ_ij ρ_ij a_ji
  cplx s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) s += density_(i, j) * a(j, i);
  return s;
}

MatrixStarAlgebra close_algebra(std::size_t ambient_dim, const std::vector<CMatrix>& generators,
                                const Tolerance& tol) {
  for (const auto& g : generators) {
    if (g.rows() != ambient_dim || g.cols() != ambient_dim) {
      throw InvalidInput("close_algebra: generator of wrong size");
    }
  }
  std::vector<CMatrix> basis;
  const double rel = tol.eq_tol;
  orthonormal_append(basis, CMatrix::identity(ambient_dim), rel);
  for (const auto& g : generators) {
    orthonormal_append(basis, g, rel);
    orthonormal_append(basis, g.adjoint(), rel);
  }
  // Every element is multiplied against all earlier ones; later additions
  // are in turn multiplied against it when their turn comes.
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const CMatrix x = basis[idx];
    orthonormal_append(basis, x.adjoint(), rel);
    for (std::size_t j = 0; j <= idx; ++j) {
      const CMatrix y = basis[j];
      orthonormal_append(basis, x * y, rel);
      orthonormal_append(basis, y * x, rel);
    }
  }
  return MatrixStarAlgebra(ambient_dim, generators, std::move(basis));
}

namespace {

// G[b][a] = φ(B_b* B_a)
CMatrix gram_matrix(const MatrixStarAlgebra& alg, const StateOnMatrices& state) {
  const auto& basis = alg.closure_basis();
  const std::size_t n = basis.size();
  std::vector<CMatrix> adjoints;
  adjoints.reserve(n);
  for (const auto& b : basis) adjoints.push_back(b.adjoint());
  CMatrix g(n, n);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = b; a < n; ++a) {
      g(b, a) = state(adjoints[b] * basis[a]);
      g(a, b) = std::conj(g(b, a));
    }
  return g;
}

void check_dims(const StateOnMatrices& state, const MatrixStarAlgebra& alg) {
  if (state.dim() != alg.ambient_dim()) throw InvalidInput("state and algebra act on different dimensions");
}

}  // namespace

FaithfulnessResult is_faithful(const StateOnMatrices& state, const MatrixStarAlgebra& alg, const Tolerance& tol) {
  check_dims(state, alg);
  const CMatrix g = gram_matrix(alg, state);
  FaithfulnessResult out;
  out.faithful = numeric_rank(g, tol) == alg.dim();
  if (!out.faithful) {
    const auto eig = hermitian_eig(g, tol);
    CMatrix x(alg.ambient_dim(), alg.ambient_dim());
    for (std::size_t b = 0; b < alg.dim(); ++b) axpy(eig.vectors(b, 0), alg.closure_basis()[b].data(), x.data());
    out.witness_value = state(x.adjoint() * x).real();
    out.witness = std::move(x);
  }
  return out;
}

GnsTriple gns(const MatrixStarAlgebra& alg, const StateOnMatrices& state, const Tolerance& tol) {
  check_dims(state, alg);
  const auto& basis = alg.closure_basis();
  const std::size_t n = basis.size();
  const CMatrix g = gram_matrix(alg, state);
  const auto eig = hermitian_eig(g, tol);
  const double top = eig.values.back();

  // Classes of F_m = Σ_b U[b,m] B_b / sqrt(λ_m) for the kept eigenvalues are
  // orthonormal in the GNS inner product.
  std::vector<CMatrix> f;
  for (std::size_t m = 0; m < n; ++m) {
    if (eig.values[m] <= tol.rank_tol * top) continue;
    CMatrix x(alg.ambient_dim(), alg.ambient_dim());
    const double s = 1.0 / std::sqrt(eig.values[m]);
    for (std::size_t b = 0; b < n; ++b) axpy(eig.vectors(b, m) * s, basis[b].data(), x.data());
    f.push_back(std::move(x));
  }
  const std::size_t r = f.size();
  const CMatrix identity = CMatrix::identity(alg.ambient_dim());

  // Coordinates of [1] in the F basis; complete to an orthonormal basis with [1] first.
  std::vector<cplx> a(r);
  for (std::size_t m = 0; m < r; ++m) a[m] = state(f[m].adjoint());
  CMatrix complement = CMatrix::identity(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) complement(i, j) -= a[i] * std::conj(a[j]);
  const auto ceig = hermitian_eig(complement, tol);

  std::vector<CMatrix> reps;
  reps.reserve(r);
  reps.push_back(identity);
  for (std::size_t k = 1; k < r; ++k) {
    CMatrix x(alg.ambient_dim(), alg.ambient_dim());
    for (std::size_t m = 0; m < r; ++m) axpy(ceig.vectors(m, k), f[m].data(), x.data());
    reps.push_back(std::move(x));
  }
  return GnsTriple(state, std::move(reps));
}

CMatrix GnsTriple::rep(const CMatrix& a) const {
  const std::size_t g = gns_dim();
  CMatrix out(g, g);
  std::vector<CMatrix> images;
  images.reserve(g);
  for (const auto& x : reps_) images.push_back(a * x);
  for (std::size_t m = 0; m < g; ++m) {
    const CMatrix xm_adj = reps_[m].adjoint();
    for (std::size_t n = 0; n < g; ++n) out(m, n) = state_(xm_adj * images[n]);
  }
  return out;
}

std::vector<cplx> GnsTriple::vector_of(const CMatrix& a) const {
  std::vector<cplx> out(gns_dim());
  for (std::size_t m = 0; m < gns_dim(); ++m) out[m] = state_(reps_[m].adjoint() * a);
  return out;
}

std::vector<cplx> GnsTriple::cyclic() const {
  std::vector<cplx> out(gns_dim());
  if (!out.empty()) out[0] = 1.0;
  return out;
}

MatrixStarAlgebra min_tensor(const MatrixStarAlgebra& left, const MatrixStarAlgebra& right, const Tolerance& tol) {
  const std::size_t dl = left.ambient_dim(), dr = right.ambient_dim();
  const CMatrix il = CMatrix::identity(dl), ir = CMatrix::identity(dr);
  std::vector<CMatrix> gens;
  for (const auto& a : left.closure_basis()) gens.push_back(kron(a, ir));
  for (const auto& b : right.closure_basis()) gens.push_back(kron(il, b));
  return close_algebra(dl * dr, gens, tol);
}

StateOnMatrices product_state(const StateOnMatrices& left, const StateOnMatrices& right) {
  return StateOnMatrices(kron(left.density(), right.density()));
}

CMatrix partial_trace_right(const CMatrix& density, std::size_t dl, std::size_t dr) {
  if (density.rows() != dl * dr || !density.is_square()) throw InvalidInput("partial_trace_right: bad split");
  CMatrix out(dl, dl);
  for (std::size_t p = 0; p < dl; ++p)
    for (std::size_t pp = 0; pp < dl; ++pp)
      for (std::size_t q = 0; q < dr; ++q) out(p, pp) += density(p * dr + q, pp * dr + q);
  return out;
}

CMatrix partial_trace_left(const CMatrix& density, std::size_t dl, std::size_t dr) {
  if (density.rows() != dl * dr || !density.is_square()) throw InvalidInput("partial_trace_left: bad split");
  CMatrix out(dr, dr);
  for (std::size_t q = 0; q < dr; ++q)
    for (std::size_t qq = 0; qq < dr; ++qq)
      for (std::size_t p = 0; p < dl; ++p) out(q, qq) += density(p * dr + q, p * dr + qq);
  return out;
}

}  // namespace bfp
