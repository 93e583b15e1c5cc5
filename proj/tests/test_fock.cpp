#include <gtest/gtest.h>

#include <map>

#include "bfp/fock.h"
#include "test_util.h"

using namespace bfp;
using namespace bfp::test;

namespace {

// Word-keyed vectors for an oracle that follows the λ/ρ definitions literally.
using Key = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;  // faces, slots
using Sparse = std::map<Key, cplx>;

Sparse oracle_apply(Side side, std::size_t i, const CMatrix& t, const Key& e, std::size_t L) {
  Sparse out;
  const auto add = [&](Key k, cplx c) {
    if (k.first.size() <= L && c != cplx(0.0)) out[k] += c;
  };
  const auto& [f, s] = e;
  const std::size_t d = t.rows();
  const bool hits = !f.empty() && (side == Side::Left ? f.front() == i : f.back() == i);
  if (hits) {
    const std::size_t pos = side == Side::Left ? 0 : f.size() - 1;
    Key rest = e;
    rest.first.erase(rest.first.begin() + static_cast<long>(pos));
    rest.second.erase(rest.second.begin() + static_cast<long>(pos));
    for (std::size_t so = 0; so < d; ++so) {
      const cplx c = t(so, s[pos]);
      if (so == 0) {
        add(rest, c);
      } else {
        Key k = e;
        k.second[pos] = so;
        add(k, c);
      }
    }
  } else {
    add(e, t(0, 0));
    for (std::size_t so = 1; so < d; ++so) {
      Key k = e;
      if (side == Side::Left) {
        k.first.insert(k.first.begin(), i);
        k.second.insert(k.second.begin(), so);
      } else {
        k.first.push_back(i);
        k.second.push_back(so);
      }
      add(k, t(so, 0));
    }
  }
  return out;
}

CMatrix oracle_matrix(const FockBasis& basis, Side side, std::size_t i, const CMatrix& t) {
  const std::size_t n = basis.size();
  CMatrix m(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto e = basis.element(c);
    for (const auto& [k, v] : oracle_apply(side, i, t, {e.faces, e.slots}, basis.trunc_len())) {
      m(basis.index_of({k.first, k.second}), c) += v;
    }
  }
  return m;
}

std::shared_ptr<const FockBasis> make_basis(std::vector<std::size_t> dims, std::size_t L) {
  std::vector<FaceSpace> faces;
  for (std::size_t k = 0; k < dims.size(); ++k) faces.push_back({k, dims[k]});
  return std::make_shared<const FockBasis>(build_basis(std::move(faces), L));
}

// Indices of basis elements of length ≤ n.
std::vector<std::size_t> short_indices(const FockBasis& b, std::size_t n) {
  std::vector<std::size_t> out(b.size_upto(n));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
  return out;
}

}  // namespace

TEST(FockBasis, CountsByHand) {
  // Reduced dims (2,1): length 1 → 3, length 2 → (0,1):2 + (1,0):2, length 3 → (0,1,0):4 + (1,0,1):2.
  const auto b = make_basis({3, 2}, 3);
  EXPECT_EQ(b->size_upto(0), 1u);
  EXPECT_EQ(b->size_upto(1), 4u);
  EXPECT_EQ(b->size_upto(2), 8u);
  EXPECT_EQ(b->size(), 14u);
  // Three faces of reduced dim 1 at L = 2: 1 + 3 + 6.
  EXPECT_EQ(make_basis({2, 2, 2}, 2)->size(), 10u);
  // A scalar face contributes nothing.
  EXPECT_EQ(make_basis({1, 3}, 4)->size(), 3u);
}

TEST(FockBasis, ElementIndexRoundTripAndOrder) {
  const auto b = make_basis({3, 2, 2}, 3);
  std::size_t prev_len = 0;
  for (std::size_t k = 0; k < b->size(); ++k) {
    const auto e = b->element(k);
    EXPECT_EQ(b->index_of(e), k);
    EXPECT_GE(e.length(), prev_len);
    prev_len = e.length();
    for (std::size_t t = 1; t < e.length(); ++t) EXPECT_NE(e.faces[t], e.faces[t - 1]);
  }
  EXPECT_FALSE(b->find_block({0, 0}).has_value());
  EXPECT_TRUE(b->find_block({0, 1, 0}).has_value());
}

TEST(ApplyFace, MatchesLiteralDefinition) {
  std::mt19937_64 rng(404);
  const auto b = make_basis({3, 2, 2}, 3);
  for (Side side : {Side::Left, Side::Right}) {
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t d = b->faces()[i].dim;
      const CMatrix t = random_matrix(rng, d, d);
      const CMatrix got = face_op(b, side, i, t).matrix();
      EXPECT_LT(max_abs_diff(got, oracle_matrix(*b, side, i, t)), 1e-13) << to_string(side) << i;
    }
  }
}

TEST(FockOperator, RepresentationPropertiesOnShortWords) {
  std::mt19937_64 rng(505);
  const std::size_t L = 4;
  const auto b = make_basis({2, 3}, L);
  for (int trial = 0; trial < 6; ++trial) {
    const Side side = trial % 2 ? Side::Right : Side::Left;
    const std::size_t i = static_cast<std::size_t>(trial / 2) % 2;
    const std::size_t d = b->faces()[i].dim;
    const CMatrix s = random_matrix(rng, d, d), t = random_matrix(rng, d, d);
    const auto st = face_op(b, side, i, s) * face_op(b, side, i, t);
    const auto prod = face_op(b, side, i, s * t);
    // Multiplicative below the truncation edge.
    for (std::size_t k : short_indices(*b, L - 1)) {
      const auto v = FockVector::basis_vector(*b, k);
      const auto diff = st.apply(v).dense(*b);
      const auto want = prod.apply(v).dense(*b);
      for (std::size_t r = 0; r < diff.size(); ++r) EXPECT_LT(std::abs(diff[r] - want[r]), 1e-12);
    }
    // *-preserving on the whole truncated space.
    EXPECT_LT(max_abs_diff(face_op(b, side, i, s).matrix().adjoint(), face_op(b, side, i, s.adjoint()).matrix()),
              1e-13);
    EXPECT_LT(max_abs_diff(face_op(b, side, i, s).adjoint().matrix(), face_op(b, side, i, s.adjoint()).matrix()),
              1e-13);
  }
  EXPECT_LT(max_abs_diff(face_op(b, Side::Left, 0, kI2).matrix(), CMatrix::identity(b->size())), 1e-15);
}

TEST(FockOperator, LeftRightCommuteAcrossFaces) {
  std::mt19937_64 rng(606);
  const std::size_t L = 4;
  const auto b = make_basis({2, 3, 2}, L);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const auto a = lambda_op(b, i, random_matrix(rng, b->faces()[i].dim, b->faces()[i].dim));
      const auto c = rho_op(b, j, random_matrix(rng, b->faces()[j].dim, b->faces()[j].dim));
      const auto comm = a * c - c * a;
      for (std::size_t k : short_indices(*b, L - 2)) {
        EXPECT_LT(comm.apply(FockVector::basis_vector(*b, k)).norm(), 1e-12) << i << "," << j << " k=" << k;
      }
    }
  }
}

TEST(FockOperator, BudgetAndAlgebra) {
  const auto b = make_basis({2, 2}, 3);
  const auto x = lambda_op(b, 0, kX);
  EXPECT_EQ(x.exact_budget(), 1u);
  EXPECT_EQ((x * x * x).exact_budget(), 3u);
  EXPECT_EQ((x + x * x).exact_budget(), 2u);
  EXPECT_FALSE((x * x * x).budget_exceeded());
  EXPECT_TRUE((x * x * x * x).budget_exceeded());
  EXPECT_EQ(FockOperator::identity(b).exact_budget(), 0u);
  EXPECT_LT(max_abs_diff((x - x).matrix(), CMatrix(b->size(), b->size())), 1e-15);
  const auto other = make_basis({2, 2}, 3);
  auto y = lambda_op(other, 0, kX);
  EXPECT_THROW(y += x, InvalidInput);
  EXPECT_THROW(lambda_op(b, 0, CMatrix::identity(3)), InvalidInput);
}

TEST(VacuumExpectation, MatchesDenseAndWarnsPastBudget) {
  std::mt19937_64 rng(707);
  const auto b = make_basis({2, 3}, 4);
  std::vector<FockOperator> ops;
  for (int k = 0; k < 4; ++k) {
    const std::size_t i = static_cast<std::size_t>(k) % 2;
    const std::size_t d = b->faces()[i].dim;
    ops.push_back(face_op(b, k % 3 ? Side::Left : Side::Right, i, random_matrix(rng, d, d)));
  }
  const auto op = compose(ops);
  const auto dense = op.matrix();
  const auto ve = vacuum_expectation(op);
  EXPECT_LT(std::abs(ve.value - dense(0, 0)), 1e-12);
  EXPECT_FALSE(ve.budget_warning);
  EXPECT_TRUE(vacuum_expectation(op * ops[0]).budget_warning);
}

TEST(VacuumExpectation, TruncationExactness) {
  std::mt19937_64 rng(808);
  const auto b4 = make_basis({2, 2}, 4);
  const auto b6 = make_basis({2, 2}, 6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FockOperator> small, big;
    for (int k = 0; k < 4; ++k) {
      const Side side = rng() % 2 ? Side::Left : Side::Right;
      const std::size_t i = rng() % 2;
      const CMatrix t = random_matrix(rng, 2, 2);
      small.push_back(face_op(b4, side, i, t));
      big.push_back(face_op(b6, side, i, t));
    }
    EXPECT_LT(std::abs(vacuum_expectation(compose(small)).value - vacuum_expectation(compose(big)).value), 1e-11);
  }
}

TEST(Subspaces, LeftRightAndEmbedded) {
  const auto b = make_basis({2, 3}, 2);
  // vacuum + length1 on face 1 (2) + word (1,0) (2).
  EXPECT_EQ(subspace_left(*b, 0).size(), 5u);
  EXPECT_EQ(subspace_right(*b, 0).size(), 5u);
  EXPECT_EQ(embedded_face_space(*b, 1).size(), 3u);
  for (std::size_t k : subspace_left(*b, 0)) {
    const auto e = b->element(k);
    EXPECT_TRUE(e.length() == 0 || e.faces.front() != 0);
  }
}

TEST(EmbedSimpleTensor, IsometricOnProducts) {
  std::mt19937_64 rng(909);
  const auto b = make_basis({3, 2, 3}, 3);
  const std::vector<std::size_t> word{0, 2, 0};
  std::vector<std::vector<cplx>> slots;
  double prod_norm = 1.0;
  for (std::size_t f : word) {
    auto v = random_vector(rng, b->faces()[f].dim);
    v[0] = 0.0;
    prod_norm *= norm2(v);
    slots.push_back(v);
  }
  const auto e = embed_simple_tensor(*b, word, slots);
  EXPECT_NEAR(e.norm(), prod_norm, 1e-12);
  EXPECT_NEAR(embed_simple_tensor(*b, {}, {}).norm(), 1.0, 0.0);
  slots[1][0] = 1.0;
  EXPECT_THROW(embed_simple_tensor(*b, word, slots), InvalidInput);
}

TEST(FockOperator, MatrixSizeGuard) {
  const auto b = make_basis({5, 5}, 8);
  ASSERT_GT(b->size(), 8192u);
  EXPECT_THROW(lambda_op(b, 0, CMatrix::identity(5)).matrix(), InvalidInput);
}
