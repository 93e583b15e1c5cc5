#include "bfp/factored.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bfp {

CMatrix FactoredFace::left_lift(const CMatrix& a) const {
  if (!left.contains(a)) throw InvalidInput("left_lift: element is not in the left algebra");
  return kron(left_gns.rep(a), CMatrix::identity(split.dr));
}

CMatrix FactoredFace::right_lift(const CMatrix& b) const {
  if (!right.contains(b)) throw InvalidInput("right_lift: element is not in the right algebra");
  return kron(CMatrix::identity(split.dl), right_gns.rep(b));
}

ProductStateDefects product_state_defects(const FacePair& pair) {
  ProductStateDefects out;
  for (const auto& x : pair.left.closure_basis()) {
    const cplx fx = pair.state(x);
    for (const auto& y : pair.right.closure_basis()) {
      const CMatrix xy = x * y;
      out.factorization = std::max(out.factorization, std::abs(pair.state(xy) - fx * pair.state(y)));
      out.commutation = std::max(out.commutation, frobenius_norm(xy - y * x));
    }
  }
  return out;
}

double split_density_defect(const CMatrix& density, std::size_t dl, std::size_t dr) {
  const CMatrix rl = partial_trace_right(density, dl, dr);
  const CMatrix rr = partial_trace_left(density, dl, dr);
  return max_abs_diff(density, kron(rl, rr));
}

FactoredFace factor_face(const FacePair& pair, std::size_t face_index, const Tolerance& tol) {
  const auto defects = product_state_defects(pair);
  if (defects.commutation > tol.eq_tol) {
    std::ostringstream os;
    os << "face " << face_index << ": left and right algebras do not commute (defect " << defects.commutation << ")";
    throw UnsupportedStructure(os.str());
  }
  if (defects.factorization > tol.eq_tol) {
    std::ostringstream os;
    os << "face " << face_index << ": state is not a product state (defect " << defects.factorization << ")";
    throw UnsupportedStructure(os.str());
  }
  FactoredFace f;
  f.left = pair.left;
  f.right = pair.right;
  f.left_gns = gns(pair.left, pair.state, tol);
  f.right_gns = gns(pair.right, pair.state, tol);
  f.split = Split{f.left_gns.gns_dim(), f.right_gns.gns_dim()};
  return f;
}

FactoredSetup make_factored(const FaceFamily& family, std::size_t trunc_len, std::size_t left_trunc,
                            std::size_t right_trunc, const Tolerance& tol) {
  FactoredSetup s;
  std::vector<FaceSpace> joint, left, right;
  for (std::size_t i = 0; i < family.pairs.size(); ++i) {
    s.faces.push_back(factor_face(family.pairs[i], i, tol));
    const Split sp = s.faces.back().split;
    s.splits.push_back(sp);
    joint.push_back({i, sp.joint()});
    left.push_back({i, sp.dl});
    right.push_back({i, sp.dr});
  }
  s.joint = std::make_shared<const FockBasis>(joint, trunc_len);
  s.left = std::make_shared<const FockBasis>(left, left_trunc);
  s.right = std::make_shared<const FockBasis>(right, right_trunc);
  return s;
}

namespace {

// Slots (full face indices, ≥ 1) of a local index inside the block of `faces`.
std::vector<std::size_t> decode_slots(const FockBasis& basis, const std::vector<std::size_t>& faces,
                                      std::size_t local) {
  std::vector<std::size_t> slots(faces.size());
  for (std::size_t t = faces.size(); t-- > 0;) {
    const std::size_t rd = basis.faces()[faces[t]].reduced_dim();
    slots[t] = local % rd + 1;
    local /= rd;
  }
  return slots;
}

std::size_t encode_slots(const FockBasis& basis, const std::vector<std::size_t>& faces,
                         const std::vector<std::size_t>& slots) {
  std::size_t local = 0;
  for (std::size_t t = 0; t < faces.size(); ++t) local = local * basis.faces()[faces[t]].reduced_dim() + slots[t] - 1;
  return local;
}

std::string describe_word(const std::vector<std::size_t>& faces) {
  std::ostringstream os;
  os << "(";
  for (std::size_t t = 0; t < faces.size(); ++t) os << (t ? "," : "") << faces[t];
  os << ")";
  return os.str();
}

// Adds scale · S_h(e ⊗ f) to out; records the target word when it exceeds the truncation.
void add_column(const SVector& h, const FactoredSetup& setup, const WordBasisElement& e,
                const WordBasisElement& f, cplx scale, FockVector& out, std::set<std::string>& dropped) {
  const FockBasis& joint = *setup.joint;
  const auto dr = [&](std::size_t face) { return setup.splits[face].dr; };
  const std::size_t m = e.length(), n = f.length();

  const bool vac = h.is_vacuum();
  const bool merge_mid = vac && m > 0 && n > 0 && e.faces.back() == f.faces.front();
  const bool merge_left = !vac && m > 0 && e.faces.back() == h.faces.front();
  const bool merge_right = !vac && n > 0 && f.faces.front() == h.faces.back();

  std::vector<std::size_t> faces, pre_slots, post_slots;
  const std::size_t m_keep = merge_left ? m - 1 : m;
  for (std::size_t t = 0; t < m_keep; ++t) {
    faces.push_back(e.faces[t]);
    pre_slots.push_back(e.slots[t] * dr(e.faces[t]));
  }
  if (merge_mid) pre_slots.back() += f.slots[0];
  faces.insert(faces.end(), h.faces.begin(), h.faces.end());
  const std::size_t n_skip = (merge_right || merge_mid) ? 1 : 0;
  for (std::size_t t = n_skip; t < n; ++t) {
    faces.push_back(f.faces[t]);
    post_slots.push_back(f.slots[t]);
  }
  if (faces.size() > joint.trunc_len()) {
    dropped.insert("word " + describe_word(faces) + " of length " + std::to_string(faces.size()) +
                   " exceeds truncation " + std::to_string(joint.trunc_len()));
    return;
  }
  const auto block = joint.find_block(faces);
  if (!block) throw InvalidInput("S_h: concatenation is not alternating");
  const std::size_t offset = joint.blocks()[*block].offset;
  auto dst = out.data();

  if (vac) {
    std::vector<std::size_t> slots = pre_slots;
    slots.insert(slots.end(), post_slots.begin(), post_slots.end());
    dst[offset + encode_slots(joint, faces, slots)] += scale;
    return;
  }
  for (std::size_t local = 0; local < h.coeffs.size(); ++local) {
    const cplx c = h.coeffs[local];
    if (c == cplx(0.0)) continue;
    std::vector<std::size_t> hs = decode_slots(joint, h.faces, local);
    if (merge_left) hs.front() += e.slots.back() * dr(h.faces.front());
    if (merge_right) hs.back() += f.slots.front();
    std::vector<std::size_t> slots = pre_slots;
    slots.insert(slots.end(), hs.begin(), hs.end());
    slots.insert(slots.end(), post_slots.begin(), post_slots.end());
    dst[offset + encode_slots(joint, faces, slots)] += scale * c;
  }
}

void check_s_vector(const SVector& h, const FactoredSetup& setup) {
  if (h.is_vacuum()) return;
  if (h.faces.size() < 2) throw InvalidInput("S vector: a nonempty word needs length ≥ 2");
  const auto block = setup.joint->find_block(h.faces);
  if (!block) throw InvalidInput("S vector: word is not in the joint basis");
  if (setup.joint->blocks()[*block].size != h.coeffs.size()) throw InvalidInput("S vector: coefficient size mismatch");
}

void throw_dropped(const std::set<std::string>& dropped) {
  std::vector<std::string> list(dropped.begin(), dropped.end());
  std::string msg = "S_h image leaves the truncated space; dropped: ";
  for (std::size_t k = 0; k < list.size() && k < 5; ++k) msg += (k ? "; " : "") + list[k];
  if (list.size() > 5) msg += "; ...";
  throw PartialMapError(msg, std::move(list));
}

}  // namespace

std::vector<SVector> enumerate_S(const FockBasis& joint, const std::vector<Split>& splits, std::size_t max_k) {
  if (splits.size() != joint.face_count()) throw InvalidInput("enumerate_S: one split per face is required");
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i].joint() != joint.faces()[i].dim) throw UnsupportedStructure("enumerate_S: face " + std::to_string(i) +
                                                                              " is not factored as H_l ⊗ H_r");
  }
  std::vector<SVector> out{SVector{}};
  max_k = std::min(max_k, joint.trunc_len());
  for (const auto& blk : joint.blocks()) {
    const std::size_t k = blk.word.size();
    if (k < 2 || k > max_k) continue;
    for (std::size_t local = 0; local < blk.size; ++local) {
      const auto slots = decode_slots(joint, blk.word, local);
      const std::size_t dr_first = splits[blk.word.front()].dr, dr_last = splits[blk.word.back()].dr;
      if (slots.front() / dr_first != 0) continue;  // first slot ξ_l ⊗ H̊_r
      if (slots.back() % dr_last != 0) continue;    // last slot H̊_l ⊗ ξ_r
      SVector s;
      s.faces = blk.word;
      s.coeffs.assign(blk.size, 0.0);
      s.coeffs[local] = 1.0;
      out.push_back(std::move(s));
    }
  }
  return out;
}

FockVector s_h_apply(const SVector& h, const FactoredSetup& setup, const FockVector& eta_l, const FockVector& eta_r,
                     bool allow_partial) {
  check_s_vector(h, setup);
  FockVector out(*setup.joint, setup.joint->trunc_len());
  std::set<std::string> dropped;
  const auto ld = eta_l.data(), rd = eta_r.data();
  for (std::size_t a = 0; a < ld.size(); ++a) {
    if (ld[a] == cplx(0.0)) continue;
    const auto e = setup.left->element(a);
    for (std::size_t b = 0; b < rd.size(); ++b) {
      if (rd[b] == cplx(0.0)) continue;
      add_column(h, setup, e, setup.right->element(b), ld[a] * rd[b], out, dropped);
    }
  }
  if (!dropped.empty() && !allow_partial) throw_dropped(dropped);
  return out;
}

CMatrix s_h_isometry(const SVector& h, const FactoredSetup& setup, bool allow_partial) {
  check_s_vector(h, setup);
  const std::size_t nl = setup.left->size(), nr = setup.right->size();
  CMatrix out(setup.joint->size(), nl * nr);
  std::set<std::string> dropped;
  for (std::size_t a = 0; a < nl; ++a) {
    const auto e = setup.left->element(a);
    for (std::size_t b = 0; b < nr; ++b) {
      FockVector col(*setup.joint, setup.joint->trunc_len());
      add_column(h, setup, e, setup.right->element(b), 1.0, col, dropped);
      const auto data = col.data();
      for (std::size_t r = 0; r < data.size(); ++r)
        if (data[r] != cplx(0.0)) out(r, a * nr + b) = data[r];
    }
  }
  if (!dropped.empty() && !allow_partial) throw_dropped(dropped);
  return out;
}

namespace {

enum class Along { Proportional, Orthogonal };

Along classify(const std::vector<cplx>& x, std::size_t slot, const char* side, const Tolerance& tol) {
  const double nx = norm2(x);
  if (nx == 0.0) throw InvalidInput("slot " + std::to_string(slot) + ": " + side + " component is zero");
  const double c = std::abs(x[0]);
  if (c >= (1.0 - tol.rank_tol) * nx) return Along::Proportional;
  if (c <= tol.eq_tol * nx) return Along::Orthogonal;
  throw InvalidInput("slot " + std::to_string(slot) + ": " + side +
                     " component is neither proportional nor orthogonal to the distinguished vector");
}

std::vector<cplx> scaled(const std::vector<cplx>& x, cplx s) {
  std::vector<cplx> out = x;
  for (auto& z : out) z *= s;
  return out;
}

std::vector<cplx> unit(std::size_t dim) {
  std::vector<cplx> out(dim);
  out[0] = 1.0;
  return out;
}

// Joint coordinates p·dr + q of l ⊗ r.
std::vector<cplx> kron_vec(const std::vector<cplx>& l, const std::vector<cplx>& r) {
  std::vector<cplx> out;
  out.reserve(l.size() * r.size());
  for (const cplx a : l)
    for (const cplx b : r) out.push_back(a * b);
  return out;
}

}  // namespace

EtaDecomposition decompose_eta(const std::vector<std::size_t>& faces, const std::vector<SlotPair>& slots,
                               const std::vector<Split>& splits, const Tolerance& tol) {
  const std::size_t m = faces.size();
  if (slots.size() != m) throw InvalidInput("decompose_eta: faces/slots length mismatch");
  std::vector<Along> al(m), ar(m);
  for (std::size_t t = 0; t < m; ++t) {
    if (faces[t] >= splits.size()) throw InvalidInput("decompose_eta: unknown face");
    if (t > 0 && faces[t] == faces[t - 1]) throw InvalidInput("decompose_eta: consecutive faces must differ");
    const Split sp = splits[faces[t]];
    if (slots[t].left.size() != sp.dl || slots[t].right.size() != sp.dr) {
      throw InvalidInput("decompose_eta: slot " + std::to_string(t + 1) + " has the wrong dimensions");
    }
    al[t] = classify(slots[t].left, t + 1, "left", tol);
    ar[t] = classify(slots[t].right, t + 1, "right", tol);
    if (al[t] == Along::Proportional && ar[t] == Along::Proportional) {
      throw InvalidInput("decompose_eta: slot " + std::to_string(t + 1) + " lies along the distinguished vector");
    }
  }

  EtaDecomposition d;
  d.m = m;
  d.v = 0;
  while (d.v < m && ar[d.v] == Along::Proportional) ++d.v;
  d.w = m + 1;
  while (d.w > 1 && al[d.w - 2] == Along::Proportional) --d.w;

  // Positions below are 0-based: slot t (1-based) is index t − 1.
  auto push_left = [&](std::size_t idx, std::vector<cplx> x) {
    d.left_faces.push_back(faces[idx]);
    d.left_slots.push_back(std::move(x));
  };
  auto push_right = [&](std::size_t idx, std::vector<cplx> x) {
    d.right_faces.push_back(faces[idx]);
    d.right_slots.push_back(std::move(x));
  };
  const std::size_t left_end = std::min(d.v, m);
  for (std::size_t t = 0; t < left_end; ++t) push_left(t, scaled(slots[t].left, slots[t].right[0]));
  if (d.v == m) return d;
  if (d.w == 1) {
    for (std::size_t t = 0; t < m; ++t) push_right(t, scaled(slots[t].right, slots[t].left[0]));
    return d;
  }

  const std::size_t first = d.v;      // slot v + 1
  const std::size_t last = d.w - 2;   // slot w − 1
  if (d.v + 1 == d.w) {
    // slots v and v + 1 belong to η_l and η_r respectively
  } else if (first == last) {
    push_left(first, slots[first].left);
    push_right(first, slots[first].right);
  } else {
    std::vector<std::vector<cplx>> hslots;
    const Split sf = splits[faces[first]], sl = splits[faces[last]];
    if (al[first] == Along::Proportional) {
      hslots.push_back(kron_vec(unit(sf.dl), scaled(slots[first].right, slots[first].left[0])));
    } else {
      push_left(first, slots[first].left);
      hslots.push_back(kron_vec(unit(sf.dl), slots[first].right));
    }
    for (std::size_t t = first + 1; t < last; ++t) hslots.push_back(kron_vec(slots[t].left, slots[t].right));
    if (ar[last] == Along::Proportional) {
      hslots.push_back(kron_vec(scaled(slots[last].left, slots[last].right[0]), unit(sl.dr)));
    } else {
      hslots.push_back(kron_vec(slots[last].left, unit(sl.dr)));
      push_right(last, slots[last].right);
    }
    std::vector<cplx> coeffs{1.0};
    for (const auto& hs : hslots) {
      std::vector<cplx> next;
      next.reserve(coeffs.size() * (hs.size() - 1));
      for (const cplx c : coeffs)
        for (std::size_t s = 1; s < hs.size(); ++s) next.push_back(c * hs[s]);
      coeffs = std::move(next);
    }
    d.h.faces.assign(faces.begin() + static_cast<long>(first), faces.begin() + static_cast<long>(last) + 1);
    d.scale = norm2(coeffs);
    for (auto& c : coeffs) c /= d.scale;
    d.h.coeffs = std::move(coeffs);
  }
  for (std::size_t t = d.w - 1; t < m; ++t) push_right(t, scaled(slots[t].right, slots[t].left[0]));
  return d;
}

FockVector embed_eta(const std::vector<std::size_t>& faces, const std::vector<SlotPair>& slots,
                     const FactoredSetup& setup) {
  if (faces.size() != slots.size()) throw InvalidInput("embed_eta: faces/slots length mismatch");
  std::vector<std::vector<cplx>> joint;
  for (const auto& s : slots) joint.push_back(kron_vec(s.left, s.right));
  return embed_simple_tensor(*setup.joint, faces, joint);
}

FockVector recompose(const EtaDecomposition& d, const FactoredSetup& setup) {
  const FockVector l = embed_simple_tensor(*setup.left, d.left_faces, d.left_slots);
  const FockVector r = embed_simple_tensor(*setup.right, d.right_faces, d.right_slots);
  FockVector out = s_h_apply(d.h, setup, l, r);
  for (auto& z : out.data()) z *= d.scale;
  return out;
}

}  // namespace bfp
