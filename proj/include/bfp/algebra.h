#pragma once

#include <optional>
#include <vector>

#include "bfp/linalg.h"

namespace bfp {

/// Unital *-subalgebra of M_d, stored as a Frobenius-orthonormal basis of its span.
class MatrixStarAlgebra {
 public:
  MatrixStarAlgebra() = default;
  MatrixStarAlgebra(std::size_t ambient_dim, std::vector<CMatrix> generators, std::vector<CMatrix> closure_basis)
      : ambient_dim_(ambient_dim), generators_(std::move(generators)), basis_(std::move(closure_basis)) {}

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<CMatrix>& generators() const { return generators_; }
  const std::vector<CMatrix>& closure_basis() const { return basis_; }

  /// Frobenius coefficients of a in the closure basis.
  std::vector<cplx> expand(const CMatrix& a) const;
  /// ‖a − projection of a onto the algebra‖_F.
  double residual(const CMatrix& a) const;
  bool contains(const CMatrix& a, const Tolerance& tol = {}) const;

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<CMatrix> generators_;
  std::vector<CMatrix> basis_;
};

/// φ(a) = tr(density · a).
class StateOnMatrices {
 public:
  StateOnMatrices() = default;
  /// Validates Hermiticity, positivity and unit trace; throws InvalidInput naming the failure.
  explicit StateOnMatrices(CMatrix density, const Tolerance& tol = {});

  const CMatrix& density() const { return density_; }
  std::size_t dim() const { return density_.rows(); }
  cplx operator()(const CMatrix& a) const;

 private:
  CMatrix density_;
};

/// Reasons a candidate density matrix is rejected; empty when valid.
std::vector<std::string> density_violations(const CMatrix& density, const Tolerance& tol = {});

MatrixStarAlgebra close_algebra(std::size_t ambient_dim, const std::vector<CMatrix>& generators,
                                const Tolerance& tol = {});

struct FaithfulnessResult {
  bool faithful = false;
  std::optional<CMatrix> witness;  // Frobenius-unit x in the algebra with φ(x*x) small
  double witness_value = 0.0;      // φ(x*x)
};

FaithfulnessResult is_faithful(const StateOnMatrices& state, const MatrixStarAlgebra& alg, const Tolerance& tol = {});

/// GNS triple of (alg, state). Basis vector 0 of the GNS space is the cyclic vector [1];
/// representatives()[m] is an algebra element whose class is basis vector m.
class GnsTriple {
 public:
  GnsTriple() = default;
  GnsTriple(StateOnMatrices state, std::vector<CMatrix> representatives)
      : state_(std::move(state)), reps_(std::move(representatives)) {}

  std::size_t gns_dim() const { return reps_.size(); }
  const std::vector<CMatrix>& representatives() const { return reps_; }
  /// π(a) as a gns_dim × gns_dim matrix, entries φ(x_m* a x_n). a must lie in the algebra.
  CMatrix rep(const CMatrix& a) const;
  /// Coordinates of the class [a].
  std::vector<cplx> vector_of(const CMatrix& a) const;
  std::vector<cplx> cyclic() const;

 private:
  StateOnMatrices state_;
  std::vector<CMatrix> reps_;
};

GnsTriple gns(const MatrixStarAlgebra& alg, const StateOnMatrices& state, const Tolerance& tol = {});

MatrixStarAlgebra min_tensor(const MatrixStarAlgebra& left, const MatrixStarAlgebra& right,
                             const Tolerance& tol = {});

StateOnMatrices product_state(const StateOnMatrices& left, const StateOnMatrices& right);

/// Partial traces of a density on C^{dl} ⊗ C^{dr}.
CMatrix partial_trace_right(const CMatrix& density, std::size_t dl, std::size_t dr);
CMatrix partial_trace_left(const CMatrix& density, std::size_t dl, std::size_t dr);

}  // namespace bfp
