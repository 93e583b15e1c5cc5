#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bfp/linalg.h"

namespace bfp {

enum class Side { Left, Right };

const char* to_string(Side s);

/// One Hilbert space H_i with distinguished unit vector ξ_i = basis vector 0.
struct FaceSpace {
  std::size_t index = 0;
  std::size_t dim = 1;
  std::size_t reduced_dim() const { return dim - 1; }
};

/// A basis vector of the alternating-word space. Slots are 1-based positions
/// in the reduced space of the corresponding face.
struct WordBasisElement {
  std::vector<std::size_t> faces;
  std::vector<std::size_t> slots;
  std::size_t length() const { return faces.size(); }
  friend bool operator==(const WordBasisElement&, const WordBasisElement&) = default;
};

/// Truncated free product space: vacuum plus H̊_{i1} ⊗ … ⊗ H̊_{in}, i1 ≠ … ≠ in, n ≤ L.
///
/// Enumeration is graded by word length, then lexicographic in the face word,
/// then lexicographic in the slots (first slot most significant). Each face word
/// occupies one contiguous block, so a vector supported on words of length ≤ n
/// is a prefix of the full coordinate array.
class FockBasis {
 public:
  static constexpr long kNone = -1;

  struct Block {
    std::vector<std::size_t> word;
    std::size_t offset = 0;
    std::size_t size = 0;
    long tail = kNone;             // block of word[1..]
    long head = kNone;             // block of word[..n-1]
    std::vector<long> prepend;     // per face f: block of f·word (if within L)
    std::vector<long> append;      // per face f: block of word·f (if within L)
  };

  FockBasis(std::vector<FaceSpace> faces, std::size_t trunc_len);

  std::size_t size() const { return total_; }
  std::size_t trunc_len() const { return trunc_len_; }
  const std::vector<FaceSpace>& faces() const { return faces_; }
  std::size_t face_count() const { return faces_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// Number of basis elements of length ≤ n (n clamped to L).
  std::size_t size_upto(std::size_t n) const;
  std::optional<std::size_t> find_block(const std::vector<std::size_t>& word) const;

  WordBasisElement element(std::size_t index) const;
  std::size_t index_of(const WordBasisElement& e) const;

 private:
  std::vector<FaceSpace> faces_;
  std::size_t trunc_len_;
  std::vector<Block> blocks_;
  std::vector<std::size_t> length_offsets_;  // first index of each length, plus total
  std::map<std::vector<std::size_t>, std::size_t> block_index_;
  std::size_t total_ = 0;
};

FockBasis build_basis(std::vector<FaceSpace> faces, std::size_t trunc_len);

/// Coordinates over the basis elements of length ≤ max_len (implicitly zero beyond).
class FockVector {
 public:
  FockVector() = default;
  FockVector(const FockBasis& basis, std::size_t max_len)
      : coeffs_(basis.size_upto(max_len)), max_len_(std::min(max_len, basis.trunc_len())) {}

  static FockVector vacuum(const FockBasis& basis);
  static FockVector basis_vector(const FockBasis& basis, std::size_t index);

  std::size_t max_len() const { return max_len_; }
  std::span<const cplx> data() const { return coeffs_; }
  std::span<cplx> data() { return coeffs_; }
  cplx at(std::size_t index) const { return index < coeffs_.size() ? coeffs_[index] : cplx(0.0); }

  /// Grow the support to at least max_len.
  void extend(const FockBasis& basis, std::size_t max_len);
  void add_scaled(cplx alpha, const FockVector& other, const FockBasis& basis);
  double norm() const { return norm2(coeffs_); }
  /// Full-length coordinate array.
  std::vector<cplx> dense(const FockBasis& basis) const;

 private:
  std::vector<cplx> coeffs_;
  std::size_t max_len_ = 0;
};

cplx inner(const FockVector& a, const FockVector& b);  // ⟨b, a⟩ convention: Σ conj(a) b

/// λ_i(T) (Side::Left) or ρ_i(T) (Side::Right) applied to a vector. Components
/// pushed beyond length L are dropped.
FockVector apply_face(const FockBasis& basis, Side side, std::size_t face, const CMatrix& t, const FockVector& in);

struct FaceFactor {
  Side side;
  std::size_t face;
  CMatrix matrix;
};

struct OperatorTerm {
  cplx coef = 1.0;
  std::vector<FaceFactor> factors;  // product factors[0]·factors[1]·…
};

/// Linear combination of products of λ/ρ factors on a truncated Fock space.
/// The matrix on the truncated enumeration is materialized on demand.
class FockOperator {
 public:
  FockOperator() = default;
  static FockOperator identity(std::shared_ptr<const FockBasis> basis);
  static FockOperator zero(std::shared_ptr<const FockBasis> basis);
  static FockOperator factor(std::shared_ptr<const FockBasis> basis, FaceFactor f);

  const FockBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FockBasis>& basis_ptr() const { return basis_; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }

  /// Number of face factors composed; vacuum moments are exact while ≤ L.
  std::size_t exact_budget() const { return budget_; }
  bool budget_exceeded() const { return budget_ > basis_->trunc_len(); }

  FockVector apply(const FockVector& v) const;
  CMatrix matrix() const;
  FockOperator adjoint() const;

  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator-=(const FockOperator& o);
  FockOperator& operator*=(cplx s);
  friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }
  friend FockOperator operator*(FockOperator a, cplx s) { return a *= s; }
  friend FockOperator operator*(cplx s, FockOperator a) { return a *= s; }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);

 private:
  FockOperator(std::shared_ptr<const FockBasis> basis, std::vector<OperatorTerm> terms, std::size_t budget)
      : basis_(std::move(basis)), terms_(std::move(terms)), budget_(budget) {}

  std::shared_ptr<const FockBasis> basis_;
  std::vector<OperatorTerm> terms_;
  std::size_t budget_ = 0;
};

FockOperator lambda_op(std::shared_ptr<const FockBasis> basis, std::size_t face, const CMatrix& t);
FockOperator rho_op(std::shared_ptr<const FockBasis> basis, std::size_t face, const CMatrix& t);
FockOperator face_op(std::shared_ptr<const FockBasis> basis, Side side, std::size_t face, const CMatrix& t);
FockOperator compose(std::span<const FockOperator> ops);

struct VacuumExpectation {
  cplx value;
  bool budget_warning = false;
};

/// ⟨op ξ, ξ⟩, evaluated by meeting in the middle of each product.
VacuumExpectation vacuum_expectation(const FockOperator& op);

/// Indices of H(l,i): vacuum and words with i1 ≠ i.
std::vector<std::size_t> subspace_left(const FockBasis& basis, std::size_t face);
/// Indices of H(r,i): vacuum and words with in ≠ i.
std::vector<std::size_t> subspace_right(const FockBasis& basis, std::size_t face);
/// Indices of the embedded copy of H_i: vacuum and length-1 words on face i.
std::vector<std::size_t> embedded_face_space(const FockBasis& basis, std::size_t face);

/// v_1 ⊗ … ⊗ v_n for vectors v_t ∈ H̊_{faces[t]} given in face coordinates
/// (component 0 must vanish). An empty word gives ξ.
FockVector embed_simple_tensor(const FockBasis& basis, std::span<const std::size_t> faces,
                               std::span<const std::vector<cplx>> slots);

}  // namespace bfp
