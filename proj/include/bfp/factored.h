#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bfp/bifree.h"

namespace bfp {

/// Dimensions of H_{i,l} and H_{i,r}; H_i = H_{i,l} ⊗ H_{i,r} with index p·dr + q.
struct Split {
  std::size_t dl = 1;
  std::size_t dr = 1;
  std::size_t joint() const { return dl * dr; }
};

/// Separate GNS data of the two faces of one pair under a product state.
struct FactoredFace {
  GnsTriple left_gns;
  GnsTriple right_gns;
  MatrixStarAlgebra left;
  MatrixStarAlgebra right;
  Split split;

  /// π_l(a) ⊗ I and I ⊗ π_r(b) on H_{i,l} ⊗ H_{i,r}.
  CMatrix left_lift(const CMatrix& a) const;
  CMatrix right_lift(const CMatrix& b) const;
};

struct ProductStateDefects {
  double factorization = 0.0;  // max |φ(xy) − φ(x)φ(y)| over closure bases
  double commutation = 0.0;    // max ‖[x, y]‖_F over closure bases
};

ProductStateDefects product_state_defects(const FacePair& pair);

/// ‖ρ − ρ_l ⊗ ρ_r‖ (max-abs) with ρ_l, ρ_r the partial traces.
double split_density_defect(const CMatrix& density, std::size_t dl, std::size_t dr);

/// Throws UnsupportedStructure naming the face when the state is not a product
/// state of commuting faces.
FactoredFace factor_face(const FacePair& pair, std::size_t face_index, const Tolerance& tol = {});

/// The three free product spaces H (over H_{i,l} ⊗ H_{i,r}), H_l and H_r.
struct FactoredSetup {
  std::vector<FactoredFace> faces;
  std::vector<Split> splits;
  std::shared_ptr<const FockBasis> joint;
  std::shared_ptr<const FockBasis> left;
  std::shared_ptr<const FockBasis> right;
};

FactoredSetup make_factored(const FaceFamily& family, std::size_t trunc_len, std::size_t left_trunc,
                            std::size_t right_trunc, const Tolerance& tol = {});

/// An element of S: for k ≥ 2 a unit vector in the block of `faces` whose first
/// slot has trivial left factor and last slot trivial right factor; the empty
/// word is ξ. `coeffs` is indexed like the block of this word in the joint basis.
struct SVector {
  std::vector<std::size_t> faces;
  std::vector<cplx> coeffs{1.0};
  bool is_vacuum() const { return faces.empty(); }
};

/// Orthonormal basis of the S-directions for words of length ≤ max_k.
std::vector<SVector> enumerate_S(const FockBasis& joint, const std::vector<Split>& splits, std::size_t max_k);

/// Thrown when an S_h image leaves the truncated joint space.
class PartialMapError : public InvalidInput {
 public:
  PartialMapError(const std::string& what, std::vector<std::string> dropped)
      : InvalidInput(what), dropped_(std::move(dropped)) {}
  const std::vector<std::string>& dropped() const { return dropped_; }

 private:
  std::vector<std::string> dropped_;
};

/// S_h(η_l ⊗ η_r), concatenating η_l, h, η_r and merging adjacent slots of the
/// same face. With allow_partial, components beyond the truncation are dropped.
FockVector s_h_apply(const SVector& h, const FactoredSetup& setup, const FockVector& eta_l, const FockVector& eta_r,
                     bool allow_partial = false);

/// Matrix of S_h on the truncated H_l ⊗ H_r; column a·|H_r| + b is S_h(e_a ⊗ f_b).
CMatrix s_h_isometry(const SVector& h, const FactoredSetup& setup, bool allow_partial = false);

/// One slot of a simple tensor η: components in H_{s,l} and H_{s,r}.
struct SlotPair {
  std::vector<cplx> left;
  std::vector<cplx> right;
};

struct EtaDecomposition {
  std::size_t m = 0;
  std::size_t v = 0;
  std::size_t w = 1;
  std::vector<std::size_t> left_faces;
  std::vector<std::vector<cplx>> left_slots;   // H_{i,l} coordinates
  SVector h;                                   // normalized η_S
  double scale = 1.0;                          // ‖η_S‖
  std::vector<std::size_t> right_faces;
  std::vector<std::vector<cplx>> right_slots;  // H_{i,r} coordinates

  bool in_left() const { return v == m; }
  bool in_right() const { return w == 1; }
};

/// Splits η = ⊗_t (η_{t,l} ⊗ η_{t,r}) into η_l ⊗ η_S ⊗ η_r. Each component must be
/// proportional or orthogonal to the distinguished vector. When v + 1 = w − 1
/// the slot v + 1 is shared: its left part ends η_l, its right part starts η_r
/// and η_S = ξ.
EtaDecomposition decompose_eta(const std::vector<std::size_t>& faces, const std::vector<SlotPair>& slots,
                               const std::vector<Split>& splits, const Tolerance& tol = {});

/// η itself in the joint basis.
FockVector embed_eta(const std::vector<std::size_t>& faces, const std::vector<SlotPair>& slots,
                     const FactoredSetup& setup);

/// scale · S_h(η_l ⊗ η_r).
FockVector recompose(const EtaDecomposition& d, const FactoredSetup& setup);

}  // namespace bfp
