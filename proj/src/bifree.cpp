#include "bfp/bifree.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace bfp {

FacePair make_face_pair(const std::vector<CMatrix>& left_generators, const std::vector<CMatrix>& right_generators,
                        const CMatrix& density, const Tolerance& tol) {
  if (!density.is_square()) throw InvalidInput("face density is not square");
  const std::size_t d = density.rows();
  FacePair p;
  p.state = StateOnMatrices(density, tol);
  p.left = close_algebra(d, left_generators, tol);
  p.right = close_algebra(d, right_generators, tol);
  std::vector<CMatrix> all = left_generators;
  all.insert(all.end(), right_generators.begin(), right_generators.end());
  p.ambient = close_algebra(d, all, tol);
  p.gns = gns(p.ambient, p.state, tol);
  return p;
}

bool FaceFamily::nontrivial() const {
  if (pairs.size() < 2) return false;
  return std::all_of(pairs.begin(), pairs.end(), [](const FacePair& p) { return p.ambient.dim() > 1; });
}

namespace {

std::vector<FaceSpace> face_spaces(const FaceFamily& family) {
  std::vector<FaceSpace> faces;
  for (std::size_t i = 0; i < family.pairs.size(); ++i) faces.push_back({i, family.pairs[i].gns.gns_dim()});
  return faces;
}

}  // namespace

BiFreeProduct::BiFreeProduct(FaceFamily family, std::size_t trunc_len, Tolerance tol)
    : family_(std::move(family)), tol_(tol) {
  basis_ = std::make_shared<const FockBasis>(face_spaces(family_), trunc_len);
}

CMatrix BiFreeProduct::face_rep(std::size_t face, const CMatrix& x) const {
  if (face >= family_.pairs.size()) throw InvalidInput("unknown face " + std::to_string(face));
  const FacePair& p = family_.pairs[face];
  if (!p.ambient.contains(x, tol_)) {
    throw InvalidInput("element is not in the ambient algebra of face " + std::to_string(face));
  }
  return p.gns.rep(x);
}

FaceFactor BiFreeProduct::letter_factor(const Letter& letter) const {
  if (letter.face >= family_.pairs.size()) throw InvalidInput("unknown face " + std::to_string(letter.face));
  const FacePair& p = family_.pairs[letter.face];
  const MatrixStarAlgebra& side_alg = letter.side == Side::Left ? p.left : p.right;
  if (!side_alg.contains(letter.element, tol_)) {
    throw InvalidInput(std::string("element '") + letter.label + "' is not in the " +
                       (letter.side == Side::Left ? "left" : "right") + " algebra of face " +
                       std::to_string(letter.face));
  }
  return FaceFactor{letter.side, letter.face, p.gns.rep(letter.element)};
}

FockOperator BiFreeProduct::letter_op(const Letter& letter) const {
  return FockOperator::factor(basis_, letter_factor(letter));
}

FockOperator BiFreeProduct::left_rep(std::size_t face, const CMatrix& a) const {
  return letter_op(Letter{Side::Left, face, a, {}});
}

FockOperator BiFreeProduct::right_rep(std::size_t face, const CMatrix& b) const {
  return letter_op(Letter{Side::Right, face, b, {}});
}

BiFreeProduct BiFreeProduct::with_truncation(std::size_t trunc_len) const {
  return BiFreeProduct(family_, trunc_len, tol_);
}

BiFreeProduct reduced_bifree(FaceFamily family, std::size_t trunc_len, const Tolerance& tol) {
  return BiFreeProduct(std::move(family), trunc_len, tol);
}

VacuumExpectation bifree_state(const BiFreeProduct& prod, const std::vector<Letter>& word) {
  FockVector v = FockVector::vacuum(prod.basis());
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const FaceFactor f = prod.letter_factor(*it);
    v = apply_face(prod.basis(), f.side, f.face, f.matrix, v);
  }
  return VacuumExpectation{v.at(0), word.size() > prod.trunc_len()};
}

MomentEngine::MomentEngine(std::shared_ptr<const FockBasis> basis, std::vector<FaceFactor> alphabet)
    : basis_(std::move(basis)), alphabet_(std::move(alphabet)) {
  for (const auto& f : alphabet_) adjoints_.push_back(f.matrix.adjoint());
}

const FockVector& MomentEngine::ket(const std::vector<std::size_t>& suffix) {
  auto it = kets_.find(suffix);
  if (it != kets_.end()) return it->second;
  FockVector v;
  if (suffix.empty()) {
    v = FockVector::vacuum(*basis_);
  } else {
    const std::vector<std::size_t> rest(suffix.begin() + 1, suffix.end());
    const FaceFactor& f = alphabet_.at(suffix.front());
    v = apply_face(*basis_, f.side, f.face, f.matrix, ket(rest));
  }
  return kets_.emplace(suffix, std::move(v)).first->second;
}

const FockVector& MomentEngine::bra(const std::vector<std::size_t>& prefix) {
  auto it = bras_.find(prefix);
  if (it != bras_.end()) return it->second;
  FockVector v;
  if (prefix.empty()) {
    v = FockVector::vacuum(*basis_);
  } else {
    const std::vector<std::size_t> rest(prefix.begin(), prefix.end() - 1);
    const std::size_t last = prefix.back();
    const FaceFactor& f = alphabet_.at(last);
    v = apply_face(*basis_, f.side, f.face, adjoints_[last], bra(rest));
  }
  return bras_.emplace(prefix, std::move(v)).first->second;
}

cplx MomentEngine::moment(const std::vector<std::size_t>& word) {
  const std::size_t split = word.size() / 2;
  const std::vector<std::size_t> prefix(word.begin(), word.begin() + static_cast<long>(split));
  const std::vector<std::size_t> suffix(word.begin() + static_cast<long>(split), word.end());
  // Both references stay valid: std::map never relocates nodes.
  const FockVector& b = bra(prefix);
  const FockVector& k = ket(suffix);
  return inner(b, k);
}

std::vector<std::vector<std::size_t>> enumerate_words(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k == 0) return {{}};
  if (n == 0) return out;
  std::vector<std::size_t> w(k, 0);
  while (true) {
    out.push_back(w);
    std::size_t pos = k;
    while (pos > 0 && w[pos - 1] + 1 == n) w[--pos] = 0;
    if (pos == 0) break;
    ++w[pos - 1];
  }
  return out;
}

std::vector<std::vector<std::size_t>> enumerate_words_upto(std::size_t n, std::size_t k_max) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k <= k_max; ++k) {
    auto level = enumerate_words(n, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<cplx> MatrixAmbient::moments(const std::vector<Letter>& alphabet,
                                         const std::vector<std::vector<std::size_t>>& words) const {
  const std::size_t d = state_.dim();
  for (const auto& l : alphabet) {
    if (l.element.rows() != d || l.element.cols() != d) {
      throw InvalidInput("letter '" + l.label + "' does not act on the ambient space");
    }
  }
  std::vector<cplx> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    CMatrix x = CMatrix::identity(d);
    for (std::size_t idx : w) x = x * alphabet.at(idx).element;
    out.push_back(state_(x));
  }
  return out;
}

std::vector<cplx> BiFreeAmbient::moments(const std::vector<Letter>& alphabet,
                                         const std::vector<std::vector<std::size_t>>& words) const {
  const FockBasis& basis = prod_->basis();
  std::vector<FaceFactor> factors;
  std::vector<FockVector> first_bra;  // x* ξ per letter
  for (const auto& l : alphabet) {
    factors.push_back(prod_->letter_factor(l));
    const FaceFactor& f = factors.back();
    first_bra.push_back(apply_face(basis, f.side, f.face, f.matrix.adjoint(), FockVector::vacuum(basis)));
  }
  // x_2⋯x_k ξ by sequential application, cached per suffix; the first letter is
  // paired through its adjoint so that only length-1 components are needed.
  std::map<std::vector<std::size_t>, FockVector> cache;
  std::function<const FockVector&(const std::vector<std::size_t>&)> suffix_vec =
      [&](const std::vector<std::size_t>& s) -> const FockVector& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    FockVector v = FockVector::vacuum(basis);
    if (!s.empty()) {
      const FaceFactor& f = factors[s.front()];
      v = apply_face(basis, f.side, f.face, f.matrix, suffix_vec(std::vector<std::size_t>(s.begin() + 1, s.end())));
    }
    return cache.emplace(s, std::move(v)).first->second;
  };
  std::vector<cplx> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    if (w.empty()) {
      out.push_back(1.0);
      continue;
    }
    const FockVector& tail = suffix_vec(std::vector<std::size_t>(w.begin() + 1, w.end()));
    out.push_back(inner(first_bra[w.front()], tail));
  }
  return out;
}

std::vector<Letter> generator_alphabet(const FaceFamily& family) {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < family.pairs.size(); ++i) {
    const auto& p = family.pairs[i];
    for (std::size_t g = 0; g < p.left.generators().size(); ++g) {
      out.push_back({Side::Left, i, p.left.generators()[g], "l" + std::to_string(i) + "." + std::to_string(g)});
    }
    for (std::size_t g = 0; g < p.right.generators().size(); ++g) {
      out.push_back({Side::Right, i, p.right.generators()[g], "r" + std::to_string(i) + "." + std::to_string(g)});
    }
  }
  return out;
}

BiIndependenceReport check_biindependence(const FaceFamily& family, const MomentModel& ambient,
                                          const std::vector<Letter>& alphabet, const BiIndependenceOptions& options,
                                          const Tolerance& tol) {
  for (const auto& w : options.words)
    for (std::size_t idx : w)
      if (idx >= alphabet.size()) throw InvalidInput("word refers to a letter outside the alphabet");

  std::vector<std::vector<std::size_t>> words = options.words;
  BiIndependenceReport report;
  if (words.empty()) {
    std::size_t total = 0, level = 1;
    for (std::size_t k = 1; k <= options.word_len_max; ++k) {
      level *= alphabet.size();
      total += level;
      if (total > options.max_words) break;
    }
    if (total <= options.max_words) {
      for (std::size_t k = 1; k <= options.word_len_max; ++k) {
        auto lvl = enumerate_words(alphabet.size(), k);
        words.insert(words.end(), lvl.begin(), lvl.end());
      }
    } else {
      report.sampled = true;
      std::mt19937_64 rng(options.seed);
      std::uniform_int_distribution<std::size_t> len(1, options.word_len_max);
      std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
      for (std::size_t n = 0; n < options.max_words; ++n) {
        std::vector<std::size_t> w(len(rng));
        for (auto& x : w) x = letter(rng);
        words.push_back(std::move(w));
      }
    }
  }

  const BiFreeProduct prod(family, options.trunc_len, tol);
  std::vector<FaceFactor> factors;
  for (const auto& l : alphabet) factors.push_back(prod.letter_factor(l));
  MomentEngine engine(prod.basis_ptr(), std::move(factors));
  const auto amb = ambient.moments(alphabet, words);

  for (std::size_t n = 0; n < words.size(); ++n) {
    if (words[n].size() > options.trunc_len) report.budget_warning = true;
    const cplx pred = engine.moment(words[n]);
    const double defect = std::abs(amb[n] - pred);
    if (n == 0 || defect > report.max_defect) {
      report.max_defect = defect;
      report.worst_word = words[n];
      report.worst_ambient = amb[n];
      report.worst_bifree = pred;
    }
  }
  report.words_compared = words.size();
  report.bifree = report.max_defect <= tol.eq_tol;
  return report;
}

}  // namespace bfp
