#include "bfp/fock.h"

#include <algorithm>
#include <cmath>

namespace bfp {

const char* to_string(Side s) { return s == Side::Left ? "l" : "r"; }

FockBasis::FockBasis(std::vector<FaceSpace> faces, std::size_t trunc_len)
    : faces_(std::move(faces)), trunc_len_(trunc_len) {
  if (faces_.empty()) throw InvalidInput("FockBasis: at least one face is required");
  for (const auto& f : faces_)
    if (f.dim == 0) throw InvalidInput("FockBasis: face space of dimension 0");

  const std::size_t nf = faces_.size();
  Block vac;
  vac.size = 1;
  blocks_.push_back(std::move(vac));
  length_offsets_.push_back(0);
  std::size_t level_begin = 0, level_end = 1, offset = 1;
  for (std::size_t n = 1; n <= trunc_len_; ++n) {
    length_offsets_.push_back(offset);
    for (std::size_t b = level_begin; b < level_end; ++b) {
      for (std::size_t f = 0; f < nf; ++f) {
        if (faces_[f].reduced_dim() == 0) continue;
        if (!blocks_[b].word.empty() && blocks_[b].word.back() == f) continue;
        Block nb;
        nb.word = blocks_[b].word;
        nb.word.push_back(f);
        nb.size = blocks_[b].size * faces_[f].reduced_dim();
        nb.offset = offset;
        offset += nb.size;
        blocks_.push_back(std::move(nb));
      }
    }
    level_begin = level_end;
    level_end = blocks_.size();
  }
  length_offsets_.push_back(offset);
  total_ = offset;

  for (std::size_t b = 0; b < blocks_.size(); ++b) block_index_[blocks_[b].word] = b;
  auto lookup = [&](const std::vector<std::size_t>& w) -> long {
    auto it = block_index_.find(w);
    return it == block_index_.end() ? kNone : static_cast<long>(it->second);
  };
  for (auto& blk : blocks_) {
    const auto& w = blk.word;
    if (!w.empty()) {
      blk.tail = lookup(std::vector<std::size_t>(w.begin() + 1, w.end()));
      blk.head = lookup(std::vector<std::size_t>(w.begin(), w.end() - 1));
    }
    blk.prepend.assign(nf, kNone);
    blk.append.assign(nf, kNone);
    for (std::size_t f = 0; f < nf; ++f) {
      std::vector<std::size_t> pre{f};
      pre.insert(pre.end(), w.begin(), w.end());
      blk.prepend[f] = lookup(pre);
      std::vector<std::size_t> post = w;
      post.push_back(f);
      blk.append[f] = lookup(post);
    }
  }
}

std::size_t FockBasis::size_upto(std::size_t n) const {
  n = std::min(n, trunc_len_);
  return length_offsets_[n + 1];
}

std::optional<std::size_t> FockBasis::find_block(const std::vector<std::size_t>& word) const {
  auto it = block_index_.find(word);
  if (it == block_index_.end()) return std::nullopt;
  return it->second;
}

WordBasisElement FockBasis::element(std::size_t index) const {
  if (index >= total_) throw InvalidInput("FockBasis::element: index out of range");
  auto it = std::upper_bound(blocks_.begin(), blocks_.end(), index,
                             [](std::size_t idx, const Block& b) { return idx < b.offset; });
  const Block& blk = *(it - 1);
  WordBasisElement e;
  e.faces = blk.word;
  e.slots.resize(blk.word.size());
  std::size_t local = index - blk.offset;
  for (std::size_t t = blk.word.size(); t-- > 0;) {
    const std::size_t rd = faces_[blk.word[t]].reduced_dim();
    e.slots[t] = local % rd + 1;
    local /= rd;
  }
  return e;
}

std::size_t FockBasis::index_of(const WordBasisElement& e) const {
  if (e.faces.size() != e.slots.size()) throw InvalidInput("index_of: faces/slots length mismatch");
  auto b = find_block(e.faces);
  if (!b) throw InvalidInput("index_of: word is not an alternating word within the truncation");
  std::size_t local = 0;
  for (std::size_t t = 0; t < e.faces.size(); ++t) {
    const std::size_t rd = faces_[e.faces[t]].reduced_dim();
    if (e.slots[t] < 1 || e.slots[t] > rd) throw InvalidInput("index_of: slot out of range");
    local = local * rd + (e.slots[t] - 1);
  }
  return blocks_[*b].offset + local;
}

FockBasis build_basis(std::vector<FaceSpace> faces, std::size_t trunc_len) {
  return FockBasis(std::move(faces), trunc_len);
}

FockVector FockVector::vacuum(const FockBasis& basis) {
  FockVector v(basis, 0);
  v.coeffs_[0] = 1.0;
  return v;
}

FockVector FockVector::basis_vector(const FockBasis& basis, std::size_t index) {
  FockVector v(basis, basis.element(index).length());
  v.coeffs_[index] = 1.0;
  return v;
}

void FockVector::extend(const FockBasis& basis, std::size_t max_len) {
  max_len = std::min(max_len, basis.trunc_len());
  if (max_len <= max_len_) return;
  coeffs_.resize(basis.size_upto(max_len));
  max_len_ = max_len;
}

void FockVector::add_scaled(cplx alpha, const FockVector& other, const FockBasis& basis) {
  extend(basis, other.max_len_);
  axpy(alpha, other.coeffs_, coeffs_);
}

std::vector<cplx> FockVector::dense(const FockBasis& basis) const {
  std::vector<cplx> out(basis.size());
  std::copy(coeffs_.begin(), coeffs_.end(), out.begin());
  return out;
}

cplx inner(const FockVector& a, const FockVector& b) { return inner(a.data(), b.data()); }

FockVector apply_face(const FockBasis& basis, Side side, std::size_t face, const CMatrix& t, const FockVector& in) {
  if (face >= basis.face_count()) throw InvalidInput("apply_face: unknown face");
  const std::size_t d = basis.faces()[face].dim;
  if (t.rows() != d || t.cols() != d) throw InvalidInput("apply_face: operator does not match face dimension");
  const std::size_t rd = d - 1;
  const std::size_t in_len = in.max_len();
  FockVector out(basis, in_len + 1);
  const auto src = in.data();
  auto dst = out.data();
  const auto& blocks = basis.blocks();
  const cplx t00 = t(0, 0);

  for (const auto& blk : blocks) {
    if (blk.offset >= src.size()) break;
    const std::size_t n = blk.word.size();
    const bool hits = n > 0 && (side == Side::Left ? blk.word.front() == face : blk.word.back() == face);
    if (hits) {
      // Block ≅ H̊_i ⊗ rest (left) or rest ⊗ H̊_i (right).
      const std::size_t rest = blk.size / rd;
      const FockBasis::Block& shorter = blocks[static_cast<std::size_t>(side == Side::Left ? blk.tail : blk.head)];
      for (std::size_t r = 0; r < rest; ++r) {
        for (std::size_t s_in = 1; s_in <= rd; ++s_in) {
          const std::size_t src_idx =
              side == Side::Left ? blk.offset + (s_in - 1) * rest + r : blk.offset + r * rd + (s_in - 1);
          const cplx x = src[src_idx];
          if (x == cplx(0.0)) continue;
          dst[shorter.offset + r] += t(0, s_in) * x;
          for (std::size_t s_out = 1; s_out <= rd; ++s_out) {
            const std::size_t dst_idx =
                side == Side::Left ? blk.offset + (s_out - 1) * rest + r : blk.offset + r * rd + (s_out - 1);
            dst[dst_idx] += t(s_out, s_in) * x;
          }
        }
      }
    } else {
      // ξ_i ⊗ e (left) or e ⊗ ξ_i (right): T ξ_i splits into a vacuum part and a new slot.
      const long target = side == Side::Left ? blk.prepend[face] : blk.append[face];
      for (std::size_t r = 0; r < blk.size; ++r) {
        const cplx x = src[blk.offset + r];
        if (x == cplx(0.0)) continue;
        dst[blk.offset + r] += t00 * x;
        if (target == FockBasis::kNone) continue;
        const FockBasis::Block& longer = blocks[static_cast<std::size_t>(target)];
        if (longer.offset >= dst.size()) continue;
        for (std::size_t s = 1; s <= rd; ++s) {
          const std::size_t dst_idx =
              side == Side::Left ? longer.offset + (s - 1) * blk.size + r : longer.offset + r * rd + (s - 1);
          dst[dst_idx] += t(s, 0) * x;
        }
      }
    }
  }
  return out;
}

FockOperator FockOperator::identity(std::shared_ptr<const FockBasis> basis) {
  return FockOperator(std::move(basis), {OperatorTerm{1.0, {}}}, 0);
}

FockOperator FockOperator::zero(std::shared_ptr<const FockBasis> basis) {
  return FockOperator(std::move(basis), {}, 0);
}

FockOperator FockOperator::factor(std::shared_ptr<const FockBasis> basis, FaceFactor f) {
  if (f.face >= basis->face_count()) throw InvalidInput("FockOperator: unknown face");
  const std::size_t d = basis->faces()[f.face].dim;
  if (f.matrix.rows() != d || f.matrix.cols() != d) {
    throw InvalidInput("FockOperator: operator does not match face dimension");
  }
  std::vector<OperatorTerm> terms{OperatorTerm{1.0, {std::move(f)}}};
  return FockOperator(std::move(basis), std::move(terms), 1);
}

FockVector FockOperator::apply(const FockVector& v) const {
  FockVector out(*basis_, v.max_len());
  for (const auto& term : terms_) {
    FockVector w = v;
    for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
      w = apply_face(*basis_, it->side, it->face, it->matrix, w);
    }
    out.add_scaled(term.coef, w, *basis_);
  }
  return out;
}

CMatrix FockOperator::matrix() const {
  const std::size_t n = basis_->size();
  if (n > 8192) throw InvalidInput("FockOperator::matrix: basis too large to materialize");
  CMatrix m(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const FockVector col = apply(FockVector::basis_vector(*basis_, c));
    const auto data = col.data();
    for (std::size_t r = 0; r < data.size(); ++r) m(r, c) = data[r];
  }
  return m;
}

FockOperator FockOperator::adjoint() const {
  std::vector<OperatorTerm> terms;
  terms.reserve(terms_.size());
  for (const auto& term : terms_) {
    OperatorTerm t{std::conj(term.coef), {}};
    for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
      t.factors.push_back(FaceFactor{it->side, it->face, it->matrix.adjoint()});
    }
    terms.push_back(std::move(t));
  }
  return FockOperator(basis_, std::move(terms), budget_);
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  if (basis_ != o.basis_) throw InvalidInput("FockOperator: basis mismatch");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  budget_ = std::max(budget_, o.budget_);
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) { return *this += o * cplx(-1.0); }

FockOperator& FockOperator::operator*=(cplx s) {
  for (auto& t : terms_) t.coef *= s;
  return *this;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  if (a.basis_ != b.basis_) throw InvalidInput("FockOperator: basis mismatch");
  std::vector<OperatorTerm> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      OperatorTerm t{ta.coef * tb.coef, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      terms.push_back(std::move(t));
    }
  return FockOperator(a.basis_, std::move(terms), a.budget_ + b.budget_);
}

FockOperator face_op(std::shared_ptr<const FockBasis> basis, Side side, std::size_t face, const CMatrix& t) {
  return FockOperator::factor(std::move(basis), FaceFactor{side, face, t});
}

FockOperator lambda_op(std::shared_ptr<const FockBasis> basis, std::size_t face, const CMatrix& t) {
  return face_op(std::move(basis), Side::Left, face, t);
}

FockOperator rho_op(std::shared_ptr<const FockBasis> basis, std::size_t face, const CMatrix& t) {
  return face_op(std::move(basis), Side::Right, face, t);
}

FockOperator compose(std::span<const FockOperator> ops) {
  if (ops.empty()) throw InvalidInput("compose: no operators");
  FockOperator out = ops.front();
  for (std::size_t k = 1; k < ops.size(); ++k) out = out * ops[k];
  return out;
}

VacuumExpectation vacuum_expectation(const FockOperator& op) {
  const FockBasis& basis = op.basis();
  VacuumExpectation out{0.0, op.budget_exceeded()};
  const FockVector vac = FockVector::vacuum(basis);
  for (const auto& term : op.terms()) {
    const std::size_t k = term.factors.size();
    const std::size_t split = k / 2;  // factors[0..split) act through their adjoints on the bra
    FockVector ket = vac;
    for (std::size_t j = k; j-- > split;) {
      const auto& f = term.factors[j];
      ket = apply_face(basis, f.side, f.face, f.matrix, ket);
    }
    FockVector bra = vac;
    for (std::size_t j = 0; j < split; ++j) {
      const auto& f = term.factors[j];
      bra = apply_face(basis, f.side, f.face, f.matrix.adjoint(), bra);
    }
    out.value += term.coef * inner(bra, ket);
  }
  return out;
}

namespace {

template <class Pred>
std::vector<std::size_t> collect(const FockBasis& basis, Pred keep) {
  std::vector<std::size_t> out;
  for (const auto& blk : basis.blocks()) {
    if (!keep(blk)) continue;
    for (std::size_t r = 0; r < blk.size; ++r) out.push_back(blk.offset + r);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> subspace_left(const FockBasis& basis, std::size_t face) {
  return collect(basis, [&](const FockBasis::Block& b) { return b.word.empty() || b.word.front() != face; });
}

std::vector<std::size_t> subspace_right(const FockBasis& basis, std::size_t face) {
  return collect(basis, [&](const FockBasis::Block& b) { return b.word.empty() || b.word.back() != face; });
}

std::vector<std::size_t> embedded_face_space(const FockBasis& basis, std::size_t face) {
  return collect(basis, [&](const FockBasis::Block& b) {
    return b.word.empty() || (b.word.size() == 1 && b.word.front() == face);
  });
}

FockVector embed_simple_tensor(const FockBasis& basis, std::span<const std::size_t> faces,
                               std::span<const std::vector<cplx>> slots) {
  if (faces.size() != slots.size()) throw InvalidInput("embed_simple_tensor: faces/slots length mismatch");
  std::vector<std::size_t> word(faces.begin(), faces.end());
  if (word.size() > basis.trunc_len()) throw InvalidInput("embed_simple_tensor: word exceeds truncation");
  if (word.empty()) return FockVector::vacuum(basis);
  auto b = basis.find_block(word);
  if (!b) throw InvalidInput("embed_simple_tensor: not an alternating word");
  std::vector<cplx> coeffs{1.0};
  for (std::size_t t = 0; t < word.size(); ++t) {
    const auto& v = slots[t];
    const std::size_t d = basis.faces()[word[t]].dim;
    if (v.size() != d) throw InvalidInput("embed_simple_tensor: slot vector of wrong dimension");
    if (std::abs(v[0]) > 1e-12 * std::max(1.0, norm2(v))) {
      throw InvalidInput("embed_simple_tensor: slot vector has a component along the distinguished vector");
    }
    std::vector<cplx> next;
    next.reserve(coeffs.size() * (d - 1));
    for (const cplx c : coeffs)
      for (std::size_t s = 1; s < d; ++s) next.push_back(c * v[s]);
    coeffs = std::move(next);
  }
  FockVector out(basis, word.size());
  const auto& blk = basis.blocks()[*b];
  std::copy(coeffs.begin(), coeffs.end(), out.data().begin() + static_cast<long>(blk.offset));
  return out;
}

}  // namespace bfp
