#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bfp/bifree.h"
#include "bfp/factored.h"

namespace bfp {

/// max ‖[x, y]‖ (operator norm) over x ∈ left generators ∪ adjoints, y ∈ right generators ∪ adjoints.
double commutation_defect(const FacePair& pair);

enum class WitnessVerdict { NonFaithfulWitnessed, NoWitnessFound };
const char* to_string(WitnessVerdict v);

struct WitnessSpec {
  std::size_t face_i = 0;
  CMatrix a_l;
  CMatrix a_r;
  std::size_t face_j = 1;
  CMatrix b;
  Side b_side = Side::Left;
};

struct WitnessReport {
  double vacuum_norm = 0.0;         // ‖Yξ‖
  double witness_norm_lower = 0.0;  // ‖P_{H_i} Y (b*ξ_j)‖
  double expected_lower = 0.0;      // φ_j(bb*)·‖[a_l, a_r]ξ_i‖
  WitnessVerdict verdict = WitnessVerdict::NoWitnessFound;
  std::string description;
  FockOperator y;
};

/// Y = [λ_i(a_l), ρ_i(a_r)]·Op_j(b) on the truncated space; needs L ≥ 4, j ≠ i, φ_j(b) = 0.
WitnessReport nonfaithfulness_witness(const FaceFamily& family, std::size_t trunc_len, const WitnessSpec& spec,
                                      const Tolerance& tol = {});

struct VhReport {
  double defect = 0.0;            // max ‖V_h* λ_i(a)ρ_i(b) V_h − π_i(a) ⊗ π_i(b)‖
  double isometry_defect = 0.0;   // ‖V_h* V_h − I‖
  std::size_t pairs_checked = 0;
};

/// V_h : H_i ⊗ H_i → H, η₁ ⊗ η₂ ↦ η₁ ⊗ h ⊗ η₂ with h ∈ H̊_j given in H_j coordinates.
/// An empty h selects the first reduced basis vector of H_j.
VhReport vh_compression_check(const FaceFamily& family, std::size_t face_i, std::size_t face_j,
                              std::vector<cplx> h, std::size_t trunc_len, const Tolerance& tol = {});

/// Sparse columns of V_h on the given basis.
std::vector<std::vector<std::pair<std::size_t, cplx>>> vh_columns(const FockBasis& basis, std::size_t face_i,
                                                                   std::size_t face_j, const std::vector<cplx>& h);

struct InjectivityReport {
  std::size_t dim_kron = 0;
  std::size_t dim_products = 0;
  bool injective() const { return dim_kron == dim_products; }
};

/// dim(left)·dim(right) against dim span{x·y}; requires commuting faces.
InjectivityReport tensor_injectivity_defect(const FacePair& pair, const Tolerance& tol = {});

struct IsoReport {
  double max_moment_defect = 0.0;
  std::vector<std::size_t> worst_word;
  std::size_t words_compared = 0;
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  bool verdict = false;
};

/// Moments of the reduced bi-free product against (free product of lefts) ⊗ (free product of rights).
IsoReport thm32_iso_check(const FaceFamily& family, std::size_t trunc_len, std::size_t word_len_max,
                          const Tolerance& tol = {});

/// Moments of the tensor of free products for every word over the generator alphabet.
class TensorOfFreeProducts {
 public:
  /// An empty alphabet selects generator_alphabet(family).
  TensorOfFreeProducts(const FaceFamily& family, std::size_t trunc_len, const Tolerance& tol = {},
                       std::vector<Letter> alphabet = {});
  cplx moment(const std::vector<std::size_t>& word);
  /// ⟨u ξ_l⊗ξ_r, w ξ_l⊗ξ_r⟩ for two words.
  cplx inner(const std::vector<std::size_t>& u, const std::vector<std::size_t>& w);
  const std::vector<Letter>& alphabet() const { return alphabet_; }

 private:
  void split(const std::vector<std::size_t>& word, std::vector<std::size_t>& l, std::vector<std::size_t>& r) const;
  FockVector vec(std::size_t side, const std::vector<std::size_t>& word);

  std::vector<Letter> alphabet_;
  std::vector<std::size_t> local_index_;  // position of each letter in its side's alphabet
  std::shared_ptr<const FockBasis> left_basis_, right_basis_;
  std::vector<FaceFactor> left_factors_, right_factors_;
  std::unique_ptr<MomentEngine> left_engine_, right_engine_;
  std::map<std::vector<std::size_t>, FockVector> left_vecs_, right_vecs_;
};

struct WitnessTerm {
  cplx coef;
  std::vector<std::size_t> word;  // indices into the generator alphabet
};

struct KernelProbeReport {
  double min_ratio = 1.0;
  std::size_t words = 0;
  std::size_t rank = 0;
  std::size_t genuine_relations = 0;
  std::size_t probe_trunc = 0;
  std::vector<WitnessTerm> witness;  // minimizing combination when a dependency attains the minimum
  double witness_value = 0.0;        // recomputed ⟨x*xξ, ξ⟩ of the witness
  bool has_witness(double threshold) const { return !witness.empty() && min_ratio <= threshold; }
};

/// Minimizes ‖xξ‖ / ‖x‖_K over the span of generator words of length ≤ word_len_max,
/// with ‖x‖_K² = (‖xξ‖² + ‖xv‖²)/2 for a seeded random unit vector v on the
/// length-1 words; both vectors are computed exactly at truncation word_len_max.
KernelProbeReport state_kernel_probe(const BiFreeProduct& prod, std::size_t word_len_max, std::uint64_t seed = 0,
                                     const Tolerance& tol = {});

struct CorollaryOptions {
  std::size_t trunc_len = 4;
  std::size_t word_len_max = 4;
  std::size_t probe_word_len = 3;
  std::uint64_t seed = 0;
};

struct CorollaryReport {
  IsoReport iso;  // three-way max defect
  double ambient_vs_bifree = 0.0;
  double bifree_vs_tensor = 0.0;
  double ambient_vs_tensor = 0.0;
  double biindependence_defect = 0.0;
  double faithfulness_margin = 0.0;  // smallest Gram eigenvalue or probe ratio
};

/// Ambient moments, reduced bi-free product and tensor of free products must agree.
/// Throws InvalidInput or UnsupportedStructure naming the failed precondition.
CorollaryReport corollary_report(const FaceFamily& family, const MomentModel& ambient,
                                 const std::vector<Letter>& alphabet, const CorollaryOptions& options,
                                 const Tolerance& tol = {});

}  // namespace bfp
