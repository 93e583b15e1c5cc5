#include <gtest/gtest.h>

#include "bfp/verify.h"
#include "test_util.h"

using namespace bfp;
using namespace bfp::test;

namespace {

FacePair pauli_pair() { return make_face_pair({kX, kY}, {kX, kY}, kI2 * cplx(0.5)); }

FaceFamily pauli_family() { return FaceFamily{{pauli_pair(), pauli_pair()}}; }

CMatrix prod_density(double a, double b) { return kron(CMatrix::diag({a, 1 - a}), CMatrix::diag({b, 1 - b})); }

// (M_2 ⊗ I, I ⊗ M_2) with a product state.
FacePair tensor_pair(double a, double b) {
  return make_face_pair({kron(kX, kI2), kron(kZ, kI2)}, {kron(kI2, kX), kron(kI2, kZ)}, prod_density(a, b));
}

FaceFamily tensor_family() { return FaceFamily{{tensor_pair(2.0 / 3, 2.0 / 3), tensor_pair(0.4, 0.55)}}; }

WitnessSpec pauli_witness() { return {0, kX, kY, 1, kX, Side::Left}; }

Letter adjoint_letter(const Letter& l) { return {l.side, l.face, l.element.adjoint(), l.label + "*"}; }

// ⟨x*x ξ, ξ⟩ for x = Σ c_a w_a, summed term by term through bifree_state.
double gram_value(const BiFreeProduct& p, const std::vector<Letter>& alpha, const std::vector<WitnessTerm>& x) {
  cplx total = 0.0;
  for (const auto& a : x) {
    for (const auto& b : x) {
      std::vector<Letter> word;
      for (auto it = a.word.rbegin(); it != a.word.rend(); ++it) word.push_back(adjoint_letter(alpha[*it]));
      for (std::size_t k : b.word) word.push_back(alpha[k]);
      total += std::conj(a.coef) * b.coef * bifree_state(p, word).value;
    }
  }
  return total.real();
}

}  // namespace

TEST(Commutation, Defects) {
  EXPECT_NEAR(commutation_defect(pauli_pair()), 2.0, 1e-12);
  EXPECT_LT(commutation_defect(tensor_pair(0.3, 0.6)), 1e-14);
}

TEST(Witness, PauliFixtureValues) {
  const auto rep = nonfaithfulness_witness(pauli_family(), 4, pauli_witness());
  EXPECT_LE(rep.vacuum_norm, 1e-10);
  EXPECT_NEAR(rep.witness_norm_lower, 2.0, 1e-8);
  EXPECT_EQ(rep.verdict, WitnessVerdict::NonFaithfulWitnessed);
  EXPECT_STREQ(to_string(rep.verdict), "non_faithful_witnessed");
  // Hand oracle: φ(XX) = 1 and ‖[X,Y]ξ‖² = φ(4I) = 4.
  EXPECT_NEAR(rep.expected_lower, 2.0, 1e-12);
}

TEST(Witness, SoundnessViaIndependentStateEvaluation) {
  // ⟨Y*Yξ, ξ⟩ with Y = (λ0(X)ρ0(Y) − ρ0(Y)λ0(X)) λ1(X), evaluated word by word at L = 6.
  const auto fam = pauli_family();
  const BiFreeProduct p(fam, 6);
  const Letter lx{Side::Left, 0, kX, "l"}, ry{Side::Right, 0, kY, "r"}, b{Side::Left, 1, kX, "b"};
  const std::vector<Letter> alpha{lx, ry, b};
  const std::vector<WitnessTerm> y{{1.0, {0, 1, 2}}, {-1.0, {1, 0, 2}}};
  EXPECT_LE(std::abs(gram_value(p, alpha, y)), 1e-18);
  const auto rep = nonfaithfulness_witness(fam, 4, pauli_witness());
  EXPECT_NEAR(rep.witness_norm_lower, rep.expected_lower, 1e-8);
  const auto yxi = rep.y.apply(FockVector::vacuum(rep.y.basis()));
  EXPECT_NEAR(yxi.norm(), rep.vacuum_norm, 1e-15);
}

TEST(Witness, PreconditionsAndCommutingFaces) {
  const auto fam = pauli_family();
  EXPECT_THROW(nonfaithfulness_witness(fam, 3, pauli_witness()), InvalidInput);
  auto same = pauli_witness();
  same.face_j = 0;
  EXPECT_THROW(nonfaithfulness_witness(fam, 4, same), InvalidInput);
  auto uncentered = pauli_witness();
  uncentered.b = kI2;
  EXPECT_THROW(nonfaithfulness_witness(fam, 4, uncentered), InvalidInput);
  const WitnessSpec comm{0, kron(kX, kI2), kron(kI2, kX), 1, kron(kX, kI2), Side::Left};
  const auto rep = nonfaithfulness_witness(tensor_family(), 4, comm);
  EXPECT_EQ(rep.verdict, WitnessVerdict::NoWitnessFound);
  EXPECT_LT(rep.witness_norm_lower, 1e-12);
}

TEST(VhCompression, CommutingFacesSatisfyIdentity) {
  const auto rep = vh_compression_check(tensor_family(), 0, 1, {}, 3);
  EXPECT_LE(rep.defect, 1e-10);
  EXPECT_LE(rep.isometry_defect, 1e-11);
  EXPECT_GT(rep.pairs_checked, 0u);
  std::vector<cplx> h(16);  // face j is all of M_4, so H_j = C^16
  h[1] = cplx(0.6, 0.0);
  h[7] = cplx(0.0, 0.8);
  EXPECT_LE(vh_compression_check(tensor_family(), 1, 0, h, 4).defect, 1e-10);
  EXPECT_THROW(vh_compression_check(tensor_family(), 0, 1, std::vector<cplx>(16, 0.25), 3), InvalidInput);
  EXPECT_THROW(vh_compression_check(pauli_family(), 0, 1, {}, 3), InvalidInput);
}

TEST(VhColumns, IsometryOnEveryColumn) {
  const auto fam = tensor_family();
  const BiFreeProduct p(fam, 3);
  std::vector<cplx> h(16);
  h[2] = 1.0;
  const auto cols = vh_columns(p.basis(), 0, 1, h);
  const std::size_t d = fam.pairs[0].gns.gns_dim();
  ASSERT_EQ(cols.size(), d * d);
  for (std::size_t a = 0; a < cols.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      cplx ip = 0.0;
      for (const auto& [ia, va] : cols[a])
        for (const auto& [ib, vb] : cols[b])
          if (ia == ib) ip += std::conj(va) * vb;
      EXPECT_LT(std::abs(ip - cplx(a == b ? 1.0 : 0.0)), 1e-12);
    }
  }
}

TEST(TensorInjectivity, Fixtures) {
  const auto full = tensor_injectivity_defect(tensor_pair(0.5, 0.5));
  EXPECT_EQ(full.dim_kron, 16u);
  EXPECT_EQ(full.dim_products, 16u);
  EXPECT_TRUE(full.injective());
  // span{I,p}·span{I,p} = span{I,p} on the same C².
  const CMatrix p = CMatrix::diag({1.0, 0.0});
  const auto proj = tensor_injectivity_defect(make_face_pair({p}, {p}, kI2 * cplx(0.5)));
  EXPECT_EQ(proj.dim_kron, 4u);
  EXPECT_EQ(proj.dim_products, 2u);
  EXPECT_FALSE(proj.injective());
  EXPECT_THROW(tensor_injectivity_defect(pauli_pair()), InvalidInput);
}

// Compression coherence: a vanishing V_h defect comes with an injective product map.
TEST(CoherenceProperty, VhDefectImpliesInjective) {
  std::mt19937_64 rng(1401);
  for (int trial = 0; trial < 4; ++trial) {
    const double a = 0.2 + 0.6 * std::uniform_real_distribution<>()(rng);
    const FaceFamily fam{{tensor_pair(a, 1 - a), tensor_pair(0.5, a)}};
    const auto vh = vh_compression_check(fam, 0, 1, {}, 3);
    if (vh.defect <= 1e-9) {
      const auto inj = tensor_injectivity_defect(fam.pairs[0]);
      EXPECT_EQ(inj.dim_products, inj.dim_kron);
    }
  }
}

TEST(Thm32, ProductFamilyIsIsomorphicAndMonotone) {
  const auto fam = tensor_family();
  const auto r3 = thm32_iso_check(fam, 3, 3);
  const auto r4 = thm32_iso_check(fam, 4, 3);
  EXPECT_TRUE(r3.verdict);
  EXPECT_LE(r3.max_moment_defect, 1e-9);
  EXPECT_LE(r4.max_moment_defect, r3.max_moment_defect + 1e-14);
  EXPECT_EQ(r3.words_compared, 1u + 8 + 64 + 512);
  EXPECT_EQ(r3.dim_a, r3.dim_b);
  CMatrix bell(4, 4);
  for (std::size_t r : {0u, 3u})
    for (std::size_t c : {0u, 3u}) bell(r, c) = 0.5;
  const FaceFamily ent{{make_face_pair({kron(kZ, kI2)}, {kron(kI2, kZ)}, bell * cplx(0.5) + CMatrix::identity(4) * cplx(0.125)),
                        tensor_pair(0.5, 0.5)}};
  EXPECT_THROW(thm32_iso_check(ent, 3, 3), UnsupportedStructure);
}

// Free families have the same moments under λ and ρ, so the tensor side can be checked factor by factor.
TEST(TensorOfFreeProducts, FactorsIntoLeftAndRightFreeMoments) {
  const auto fam = tensor_family();
  TensorOfFreeProducts t(fam, 4);
  const auto& alpha = t.alphabet();
  FaceFamily lefts, rights;
  for (const auto& p : fam.pairs) {
    lefts.pairs.push_back(make_face_pair(p.left.generators(), {}, p.state.density()));
    rights.pairs.push_back(make_face_pair({}, p.right.generators(), p.state.density()));
  }
  const BiFreeProduct pl(lefts, 4), pr(rights, 4);
  std::mt19937_64 rng(1501);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> w(1 + rng() % 4);
    for (auto& x : w) x = rng() % alpha.size();
    std::vector<Letter> lw, rw;
    for (std::size_t k : w) (alpha[k].side == Side::Left ? lw : rw).push_back(alpha[k]);
    const cplx want = bifree_state(pl, lw).value * bifree_state(pr, rw).value;
    EXPECT_LT(std::abs(t.moment(w) - want), 1e-12);
  }
  EXPECT_LT(std::abs(t.inner({0}, {0}) - t.moment({0, 0})), 1e-14);  // generators are self-adjoint
}

TEST(KernelProbe, PauliFamilyHasWitness) {
  const auto fam = pauli_family();
  const BiFreeProduct p(fam, 4);
  const auto rep = state_kernel_probe(p, 4, 5);
  EXPECT_LE(rep.min_ratio, 1e-9);
  ASSERT_TRUE(rep.has_witness(1e-9));
  EXPECT_LE(rep.witness_value, 1e-18);
  const BiFreeProduct p8(fam, 8);
  EXPECT_LE(std::abs(gram_value(p8, generator_alphabet(fam), rep.witness)), 1e-18);
}

TEST(KernelProbe, ProductFamilyHasNone) {
  const BiFreeProduct p(tensor_family(), 3);
  const auto rep = state_kernel_probe(p, 2, 1);
  EXPECT_GT(rep.min_ratio, 1e-6);
  EXPECT_FALSE(rep.has_witness(1e-9));
  EXPECT_EQ(state_kernel_probe(p, 0).min_ratio, 1.0);
}

TEST(Corollary, TautologicalAndFailingInstances) {
  const auto fam = tensor_family();
  const BiFreeAmbient amb(std::make_shared<const BiFreeProduct>(fam, 4));
  CorollaryOptions o;
  o.trunc_len = 3;
  o.word_len_max = 3;
  o.probe_word_len = 2;
  const auto rep = corollary_report(fam, amb, generator_alphabet(fam), o);
  EXPECT_LE(rep.iso.max_moment_defect, 1e-8);
  EXPECT_TRUE(rep.iso.verdict);
  EXPECT_GT(rep.faithfulness_margin, 1e-6);

  FaceFamily single;
  single.pairs.push_back(make_face_pair({kX}, {}, kI2 * cplx(0.5)));
  single.pairs.push_back(make_face_pair({kY}, {}, kI2 * cplx(0.5)));
  const MatrixAmbient m(StateOnMatrices(kI2 * cplx(0.5)));
  o.word_len_max = 4;  // the alternating word XYXY is the first discrepancy
  EXPECT_THROW(corollary_report(single, m, generator_alphabet(single), o), InvalidInput);
}
