#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bfp/algebra.h"
#include "bfp/fock.h"

namespace bfp {

/// One factor of a moment word: an element of face `face` on the given side,
/// as a matrix of that face's ambient algebra.
struct Letter {
  Side side = Side::Left;
  std::size_t face = 0;
  CMatrix element;
  std::string label;
};

struct FacePair {
  MatrixStarAlgebra left;
  MatrixStarAlgebra right;
  MatrixStarAlgebra ambient;  // closure of left ∪ right
  StateOnMatrices state;
  GnsTriple gns;
};

FacePair make_face_pair(const std::vector<CMatrix>& left_generators, const std::vector<CMatrix>& right_generators,
                        const CMatrix& density, const Tolerance& tol = {});

struct FaceFamily {
  std::vector<FacePair> pairs;
  /// At least two pairs, none of them scalar.
  bool nontrivial() const;
};

/// Reduced bi-free product realized on a truncated free product space.
class BiFreeProduct {
 public:
  BiFreeProduct(FaceFamily family, std::size_t trunc_len, Tolerance tol = {});

  const FaceFamily& family() const { return family_; }
  const Tolerance& tolerance() const { return tol_; }
  const FockBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FockBasis>& basis_ptr() const { return basis_; }
  std::size_t trunc_len() const { return basis_->trunc_len(); }

  /// π_i(x) on H_i; x must lie in the face's ambient algebra.
  CMatrix face_rep(std::size_t face, const CMatrix& x) const;
  /// Checks that the element belongs to the requested side algebra.
  FaceFactor letter_factor(const Letter& letter) const;
  FockOperator letter_op(const Letter& letter) const;
  FockOperator left_rep(std::size_t face, const CMatrix& a) const;
  FockOperator right_rep(std::size_t face, const CMatrix& b) const;

  BiFreeProduct with_truncation(std::size_t trunc_len) const;

 private:
  FaceFamily family_;
  Tolerance tol_;
  std::shared_ptr<const FockBasis> basis_;
};

BiFreeProduct reduced_bifree(FaceFamily family, std::size_t trunc_len, const Tolerance& tol = {});

/// Vacuum expectation of the product of the letters, in order.
VacuumExpectation bifree_state(const BiFreeProduct& prod, const std::vector<Letter>& word);

/// Vacuum moments of many words over a fixed alphabet of face factors. Each
/// word is split in half; the right half is applied to ξ, the adjoint of the
/// left half to ξ, and both partial vectors are cached per prefix/suffix.
class MomentEngine {
 public:
  MomentEngine(std::shared_ptr<const FockBasis> basis, std::vector<FaceFactor> alphabet);

  cplx moment(const std::vector<std::size_t>& word);
  std::size_t cached_vectors() const { return kets_.size() + bras_.size(); }

 private:
  const FockVector& ket(const std::vector<std::size_t>& suffix);
  const FockVector& bra(const std::vector<std::size_t>& prefix);

  std::shared_ptr<const FockBasis> basis_;
  std::vector<FaceFactor> alphabet_;
  std::vector<CMatrix> adjoints_;
  std::map<std::vector<std::size_t>, FockVector> kets_;
  std::map<std::vector<std::size_t>, FockVector> bras_;
};

/// All words of length exactly k over an alphabet of size n, lexicographic.
std::vector<std::vector<std::size_t>> enumerate_words(std::size_t n, std::size_t k);
/// All words of length ≤ k_max, graded by length.
std::vector<std::vector<std::size_t>> enumerate_words_upto(std::size_t n, std::size_t k_max);

/// Source of joint moments x_{w1}·…·x_{wk} of a letter alphabet.
class MomentModel {
 public:
  virtual ~MomentModel() = default;
  virtual std::vector<cplx> moments(const std::vector<Letter>& alphabet,
                                    const std::vector<std::vector<std::size_t>>& words) const = 0;
};

/// φ(x) = tr(ρ x) on one matrix algebra containing every face element.
class MatrixAmbient : public MomentModel {
 public:
  explicit MatrixAmbient(StateOnMatrices state) : state_(std::move(state)) {}
  const StateOnMatrices& state() const { return state_; }
  std::vector<cplx> moments(const std::vector<Letter>& alphabet,
                            const std::vector<std::vector<std::size_t>>& words) const override;

 private:
  StateOnMatrices state_;
};

/// Vacuum moments of a bi-free product, each word evaluated by sequential
/// application to ξ (independent of MomentEngine's split evaluation).
class BiFreeAmbient : public MomentModel {
 public:
  explicit BiFreeAmbient(std::shared_ptr<const BiFreeProduct> prod) : prod_(std::move(prod)) {}
  const BiFreeProduct& product() const { return *prod_; }
  std::vector<cplx> moments(const std::vector<Letter>& alphabet,
                            const std::vector<std::vector<std::size_t>>& words) const override;

 private:
  std::shared_ptr<const BiFreeProduct> prod_;
};

struct BiIndependenceOptions {
  std::size_t trunc_len = 4;
  std::size_t word_len_max = 4;
  /// Explicit words over the alphabet; when empty all words up to word_len_max are used.
  std::vector<std::vector<std::size_t>> words;
  /// When the full enumeration exceeds this count, a seeded sample of this size is drawn.
  std::size_t max_words = 20000;
  std::uint64_t seed = 0;
};

struct BiIndependenceReport {
  double max_defect = 0.0;
  std::vector<std::size_t> worst_word;
  cplx worst_ambient = 0.0;
  cplx worst_bifree = 0.0;
  std::size_t words_compared = 0;
  bool sampled = false;
  bool budget_warning = false;
  bool bifree = false;  // max_defect ≤ eq_tol
};

/// Compares ambient moments of the alphabet against the bi-free prediction
/// built from each face's own GNS data.
BiIndependenceReport check_biindependence(const FaceFamily& family, const MomentModel& ambient,
                                          const std::vector<Letter>& alphabet, const BiIndependenceOptions& options,
                                          const Tolerance& tol = {});

/// Left generators (Side::Left) then right generators (Side::Right) of each face, face by face.
std::vector<Letter> generator_alphabet(const FaceFamily& family);

}  // namespace bfp
