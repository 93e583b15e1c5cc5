#include <gtest/gtest.h>

#include "bfp/bifree.h"
#include "test_util.h"

using namespace bfp;
using namespace bfp::test;

namespace {

FaceFamily pauli_family(std::size_t copies) {
  FaceFamily f;
  for (std::size_t k = 0; k < copies; ++k) f.pairs.push_back(make_face_pair({kX, kY}, {kX, kY}, kI2 * cplx(0.5)));
  return f;
}

// Faces on M_2 with random full-rank states; left = right = M_2.
FaceFamily random_m2_family(std::mt19937_64& rng, std::size_t copies) {
  FaceFamily f;
  for (std::size_t k = 0; k < copies; ++k) f.pairs.push_back(make_face_pair({kX, kY}, {kX, kY}, random_density(rng, 2)));
  return f;
}

Letter L_(std::size_t face, CMatrix m) { return {Side::Left, face, std::move(m), ""}; }
Letter R_(std::size_t face, CMatrix m) { return {Side::Right, face, std::move(m), ""}; }

}  // namespace

TEST(FacePair, GnsDimensions) {
  EXPECT_EQ(make_face_pair({kX, kY}, {}, kI2 * cplx(0.5)).gns.gns_dim(), 4u);
  EXPECT_EQ(make_face_pair({kX, kY}, {}, CMatrix::diag({1.0, 0.0})).gns.gns_dim(), 2u);
  EXPECT_EQ(make_face_pair({kZ}, {kZ}, CMatrix::diag({0.3, 0.7})).gns.gns_dim(), 2u);
  EXPECT_TRUE(pauli_family(2).nontrivial());
  EXPECT_FALSE(pauli_family(1).nontrivial());
  FaceFamily scalar = pauli_family(1);
  scalar.pairs.push_back(make_face_pair({}, {}, kI2 * cplx(0.5)));
  EXPECT_FALSE(scalar.nontrivial());
}

TEST(BiFreeProduct, LetterMembershipIsChecked) {
  FaceFamily f;
  f.pairs.push_back(make_face_pair({kZ}, {kX}, kI2 * cplx(0.5)));
  f.pairs.push_back(make_face_pair({kZ}, {kX}, kI2 * cplx(0.5)));
  const BiFreeProduct p(f, 2);
  EXPECT_NO_THROW(p.letter_factor(L_(0, kZ)));
  EXPECT_THROW(p.letter_factor(L_(0, kX)), InvalidInput);
  EXPECT_THROW(p.letter_factor(R_(1, kZ)), InvalidInput);
  EXPECT_THROW(p.letter_factor(L_(2, kZ)), InvalidInput);
  EXPECT_EQ(p.with_truncation(3).trunc_len(), 3u);
}

// Derived free-probability identities for left letters of distinct faces.
TEST(BiFreeState, FreeMomentFormulas) {
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fam = random_m2_family(rng, 2);
    const auto& phi0 = fam.pairs[0].state;
    const auto& phi1 = fam.pairs[1].state;
    const BiFreeProduct p(fam, 4);
    const CMatrix a1 = random_matrix(rng, 2, 2), a2 = random_matrix(rng, 2, 2);
    const CMatrix b1 = random_matrix(rng, 2, 2), b2 = random_matrix(rng, 2, 2);

    const cplx aba = bifree_state(p, {L_(0, a1), L_(1, b1), L_(0, a2)}).value;
    EXPECT_LT(std::abs(aba - phi0(a1 * a2) * phi1(b1)), 1e-12);

    const cplx abab = bifree_state(p, {L_(0, a1), L_(1, b1), L_(0, a2), L_(1, b2)}).value;
    const cplx want = phi0(a1 * a2) * phi1(b1) * phi1(b2) + phi0(a1) * phi0(a2) * phi1(b1 * b2) -
                      phi0(a1) * phi0(a2) * phi1(b1) * phi1(b2);
    EXPECT_LT(std::abs(abab - want), 1e-12);

    // Mixed sides: same face multiplies in H_0, distinct faces factor.
    EXPECT_LT(std::abs(bifree_state(p, {L_(0, a1), R_(0, a2)}).value - phi0(a1 * a2)), 1e-12);
    EXPECT_LT(std::abs(bifree_state(p, {L_(0, a1), R_(1, b1), L_(0, a2)}).value - phi0(a1 * a2) * phi1(b1)), 1e-12);
    // Right letters of distinct faces are free as well but multiply in reverse order.
    EXPECT_LT(std::abs(bifree_state(p, {R_(0, a1), R_(1, b1), R_(0, a2)}).value - phi0(a1 * a2) * phi1(b1)), 1e-12);
  }
}

TEST(BiFreeState, BudgetWarning) {
  const BiFreeProduct p(pauli_family(2), 2);
  EXPECT_FALSE(bifree_state(p, {L_(0, kX), L_(1, kX)}).budget_warning);
  EXPECT_TRUE(bifree_state(p, {L_(0, kX), L_(1, kX), L_(0, kX)}).budget_warning);
}

TEST(Words, EnumerationCounts) {
  EXPECT_EQ(enumerate_words(3, 4).size(), 81u);
  EXPECT_EQ(enumerate_words(3, 0).size(), 1u);
  const auto upto = enumerate_words_upto(3, 3);
  EXPECT_EQ(upto.size(), 1u + 3 + 9 + 27);
  EXPECT_TRUE(upto.front().empty());
  const auto two = enumerate_words(2, 2);
  EXPECT_EQ(two[1], (std::vector<std::size_t>{0, 1}));
}

TEST(MomentEngine, AgreesWithSequentialEvaluation) {
  std::mt19937_64 rng(1102);
  const auto fam = random_m2_family(rng, 2);
  const auto p = std::make_shared<const BiFreeProduct>(fam, 4);
  const auto alphabet = generator_alphabet(fam);
  ASSERT_EQ(alphabet.size(), 8u);
  EXPECT_EQ(alphabet[2].label, "r0.0");
  std::vector<FaceFactor> factors;
  for (const auto& l : alphabet) factors.push_back(p->letter_factor(l));
  MomentEngine engine(p->basis_ptr(), factors);
  std::vector<std::vector<std::size_t>> words;
  for (int k = 0; k < 200; ++k) {
    std::vector<std::size_t> w(1 + rng() % 4);
    for (auto& x : w) x = rng() % alphabet.size();
    words.push_back(w);
  }
  const auto seq = BiFreeAmbient(p).moments(alphabet, words);
  for (std::size_t k = 0; k < words.size(); ++k) EXPECT_LT(std::abs(engine.moment(words[k]) - seq[k]), 1e-12);
  EXPECT_GT(engine.cached_vectors(), 0u);
  EXPECT_EQ(engine.moment({}), cplx(1.0));
}

TEST(MatrixAmbient, TraceMoments) {
  const MatrixAmbient amb(StateOnMatrices(CMatrix::diag({0.25, 0.75})));
  const std::vector<Letter> alpha{L_(0, kZ), L_(1, kX)};
  const auto m = amb.moments(alpha, {{0}, {1}, {1, 1}, {0, 1, 0, 1}});
  EXPECT_NEAR(std::abs(m[0] - cplx(-0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m[2] - cplx(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m[3] - cplx(-1.0)), 0.0, 1e-15);  // ZXZX = -I
}

TEST(BiIndependence, TautologicalInstanceHasZeroDefect) {
  std::mt19937_64 rng(1203);
  const auto fam = random_m2_family(rng, 2);
  const BiFreeAmbient amb(std::make_shared<const BiFreeProduct>(fam, 4));
  BiIndependenceOptions o;
  o.word_len_max = 3;
  o.trunc_len = 3;
  const auto rep = check_biindependence(fam, amb, generator_alphabet(fam), o);
  EXPECT_TRUE(rep.bifree);
  EXPECT_LT(rep.max_defect, 1e-12);
  EXPECT_EQ(rep.words_compared, 8u + 64 + 512);
  EXPECT_FALSE(rep.sampled);
}

TEST(BiIndependence, SingleCopyPauliFails) {
  FaceFamily fam;
  fam.pairs.push_back(make_face_pair({kX}, {}, kI2 * cplx(0.5)));
  fam.pairs.push_back(make_face_pair({kY}, {}, kI2 * cplx(0.5)));
  const MatrixAmbient amb(StateOnMatrices(kI2 * cplx(0.5)));
  BiIndependenceOptions o;
  o.words = {{0, 1, 0, 1}};
  const auto rep = check_biindependence(fam, amb, generator_alphabet(fam), o);
  EXPECT_NEAR(rep.max_defect, 1.0, 1e-10);
  EXPECT_NEAR(std::abs(rep.worst_ambient - cplx(-1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(rep.worst_bifree), 0.0, 1e-12);
  EXPECT_FALSE(rep.bifree);
}

TEST(BiIndependence, SamplingIsSeededAndBounded) {
  const auto fam = pauli_family(2);
  const BiFreeAmbient amb(std::make_shared<const BiFreeProduct>(fam, 4));
  BiIndependenceOptions o;
  o.word_len_max = 4;
  o.max_words = 50;
  o.seed = 99;
  const auto a = check_biindependence(fam, amb, generator_alphabet(fam), o);
  const auto b = check_biindependence(fam, amb, generator_alphabet(fam), o);
  EXPECT_TRUE(a.sampled);
  EXPECT_EQ(a.words_compared, 50u);
  EXPECT_EQ(a.worst_word, b.worst_word);
  EXPECT_EQ(a.max_defect, b.max_defect);
}
