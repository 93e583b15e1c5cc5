#include "bfp/verify.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <tuple>

namespace bfp {

const char* to_string(WitnessVerdict v) {
  return v == WitnessVerdict::NonFaithfulWitnessed ? "non_faithful_witnessed" : "no_witness_found";
}

double commutation_defect(const FacePair& pair) {
  auto with_adjoints = [](const std::vector<CMatrix>& gens) {
    std::vector<CMatrix> out = gens;
    for (const auto& g : gens) out.push_back(g.adjoint());
    return out;
  };
  double worst = 0.0;
  for (const auto& x : with_adjoints(pair.left.generators()))
    for (const auto& y : with_adjoints(pair.right.generators()))
      worst = std::max(worst, operator_norm(commutator(x, y)));
  return worst;
}

namespace {

void check_face(const FaceFamily& family, std::size_t face, const char* what) {
  if (face >= family.pairs.size()) {
    throw InvalidInput(std::string(what) + ": face " + std::to_string(face) + " does not exist");
  }
}

}  // namespace

WitnessReport nonfaithfulness_witness(const FaceFamily& family, std::size_t trunc_len, const WitnessSpec& spec,
                                      const Tolerance& tol) {
  check_face(family, spec.face_i, "witness");
  check_face(family, spec.face_j, "witness");
  if (spec.face_i == spec.face_j) throw InvalidInput("witness precondition failed: face j must differ from face i");
  if (trunc_len < 4) throw InvalidInput("witness precondition failed: truncation must be at least 4");
  const FacePair& pj = family.pairs[spec.face_j];
  const MatrixStarAlgebra& b_alg = spec.b_side == Side::Left ? pj.left : pj.right;
  if (!b_alg.contains(spec.b, tol)) throw InvalidInput("witness precondition failed: b is not in the chosen face");
  const cplx phi_b = pj.state(spec.b);
  if (std::abs(phi_b) > tol.eq_tol) {
    std::ostringstream os;
    os << "witness precondition failed: b is not centered (|phi_j(b)| = " << std::abs(phi_b) << ")";
    throw InvalidInput(os.str());
  }

  const BiFreeProduct prod(family, trunc_len, tol);
  const FockOperator la = prod.left_rep(spec.face_i, spec.a_l);
  const FockOperator rb = prod.right_rep(spec.face_i, spec.a_r);
  const FockOperator opj = prod.letter_op(Letter{spec.b_side, spec.face_j, spec.b, "b"});

  WitnessReport out;
  out.y = (la * rb - rb * la) * opj;
  out.description = "[lambda_" + std::to_string(spec.face_i) + "(a_l), rho_" + std::to_string(spec.face_i) +
                    "(a_r)] * " + (spec.b_side == Side::Left ? "lambda_" : "rho_") + std::to_string(spec.face_j) +
                    "(b)";
  const FockBasis& basis = prod.basis();
  out.vacuum_norm = out.y.apply(FockVector::vacuum(basis)).norm();

  std::vector<cplx> bstar = pj.gns.vector_of(spec.b.adjoint());
  bstar[0] = 0.0;  // φ_j(b*) vanishes by the centering check
  const std::vector<std::size_t> word{spec.face_j};
  const FockVector probe = embed_simple_tensor(basis, word, std::span<const std::vector<cplx>>(&bstar, 1));
  const FockVector image = out.y.apply(probe);
  double s = 0.0;
  for (std::size_t idx : embedded_face_space(basis, spec.face_i)) s += std::norm(image.at(idx));
  out.witness_norm_lower = std::sqrt(s);

  const FacePair& pi = family.pairs[spec.face_i];
  const CMatrix c = commutator(spec.a_l, spec.a_r);
  const double comm_norm = std::sqrt(std::max(0.0, pi.state(c.adjoint() * c).real()));
  out.expected_lower = pj.state(spec.b * spec.b.adjoint()).real() * comm_norm;

  out.verdict = (out.vacuum_norm <= tol.eq_tol && out.witness_norm_lower >= 100.0 * tol.eq_tol)
                    ? WitnessVerdict::NonFaithfulWitnessed
                    : WitnessVerdict::NoWitnessFound;
  return out;
}

std::vector<std::vector<std::pair<std::size_t, cplx>>> vh_columns(const FockBasis& basis, std::size_t face_i,
                                                                   std::size_t face_j, const std::vector<cplx>& h) {
  const std::size_t di = basis.faces()[face_i].dim, dj = basis.faces()[face_j].dim;
  if (h.size() != dj) throw InvalidInput("V_h: h has the wrong dimension");
  auto offset = [&](std::vector<std::size_t> word) {
    const auto b = basis.find_block(word);
    if (!b) throw InvalidInput("V_h: truncation too small for the word (i, j, i)");
    return basis.blocks()[*b].offset;
  };
  const std::size_t o_j = offset({face_j});
  const std::size_t o_ij = offset({face_i, face_j});
  const std::size_t o_ji = offset({face_j, face_i});
  const std::size_t o_iji = offset({face_i, face_j, face_i});
  const std::size_t ri = di - 1, rj = dj - 1;

  std::vector<std::vector<std::pair<std::size_t, cplx>>> cols(di * di);
  for (std::size_t p = 0; p < di; ++p)
    for (std::size_t q = 0; q < di; ++q) {
      auto& col = cols[p * di + q];
      for (std::size_t s = 1; s < dj; ++s) {
        if (h[s] == cplx(0.0)) continue;
        std::size_t idx;
        if (p == 0 && q == 0) {
          idx = o_j + (s - 1);
        } else if (q == 0) {
          idx = o_ij + (p - 1) * rj + (s - 1);
        } else if (p == 0) {
          idx = o_ji + (s - 1) * ri + (q - 1);
        } else {
          idx = o_iji + ((p - 1) * rj + (s - 1)) * ri + (q - 1);
        }
        col.emplace_back(idx, h[s]);
      }
    }
  return cols;
}

VhReport vh_compression_check(const FaceFamily& family, std::size_t face_i, std::size_t face_j,
                              std::vector<cplx> h, std::size_t trunc_len, const Tolerance& tol) {
  check_face(family, face_i, "vh_compression");
  check_face(family, face_j, "vh_compression");
  if (face_i == face_j) throw InvalidInput("vh_compression: face j must differ from face i");
  if (trunc_len < 3) throw InvalidInput("vh_compression: truncation must be at least 3");
  const FacePair& pi = family.pairs[face_i];
  if (commutation_defect(pi) > tol.eq_tol) {
    throw InvalidInput("vh_compression: the faces of face " + std::to_string(face_i) + " do not commute");
  }
  const std::size_t dj = family.pairs[face_j].gns.gns_dim();
  if (dj < 2) throw InvalidInput("vh_compression: face j has no reduced space");
  if (h.empty()) {
    h.assign(dj, 0.0);
    h[1] = 1.0;
  }
  if (h.size() != dj) throw InvalidInput("vh_compression: h has the wrong dimension");
  if (std::abs(h[0]) > tol.eq_tol) throw InvalidInput("vh_compression: h must be orthogonal to xi_j");
  if (std::abs(norm2(h) - 1.0) > tol.eq_tol) throw InvalidInput("vh_compression: h must be a unit vector");

  const BiFreeProduct prod(family, trunc_len, tol);
  const FockBasis& basis = prod.basis();
  const auto cols = vh_columns(basis, face_i, face_j, h);
  const std::size_t n = cols.size();

  auto densify = [&](const std::vector<std::pair<std::size_t, cplx>>& col) {
    FockVector v(basis, 3);
    for (const auto& [idx, val] : col) v.data()[idx] = val;
    return v;
  };
  auto compress = [&](const FockOperator* x) {
    CMatrix m(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      const FockVector img = x ? x->apply(densify(cols[c])) : densify(cols[c]);
      for (std::size_t r = 0; r < n; ++r) {
        cplx s = 0.0;
        for (const auto& [idx, val] : cols[r]) s += std::conj(val) * img.at(idx);
        m(r, c) = s;
      }
    }
    return m;
  };

  VhReport out;
  out.isometry_defect = operator_norm(compress(nullptr) - CMatrix::identity(n));
  std::vector<CMatrix> as{CMatrix::identity(pi.state.dim())}, bs{CMatrix::identity(pi.state.dim())};
  for (const auto& a : pi.left.generators()) as.push_back(a);
  for (const auto& b : pi.right.generators()) bs.push_back(b);
  for (const auto& a : as)
    for (const auto& b : bs) {
      const FockOperator x = prod.left_rep(face_i, a) * prod.right_rep(face_i, b);
      const CMatrix expected = kron(pi.gns.rep(a), pi.gns.rep(b));
      out.defect = std::max(out.defect, operator_norm(compress(&x) - expected));
      ++out.pairs_checked;
    }
  return out;
}

InjectivityReport tensor_injectivity_defect(const FacePair& pair, const Tolerance& tol) {
  const auto& lb = pair.left.closure_basis();
  const auto& rb = pair.right.closure_basis();
  double comm = 0.0;
  for (const auto& x : lb)
    for (const auto& y : rb) comm = std::max(comm, frobenius_norm(commutator(x, y)));
  if (comm > tol.eq_tol) throw InvalidInput("tensor_injectivity: faces do not commute");
  InjectivityReport out;
  out.dim_kron = lb.size() * rb.size();
  std::vector<CMatrix> span;
  for (const auto& x : lb)
    for (const auto& y : rb) orthonormal_append(span, x * y, tol.eq_tol);
  out.dim_products = span.size();
  return out;
}

TensorOfFreeProducts::TensorOfFreeProducts(const FaceFamily& family, std::size_t trunc_len, const Tolerance& tol,
                                           std::vector<Letter> alphabet)
    : alphabet_(alphabet.empty() ? generator_alphabet(family) : std::move(alphabet)) {
  std::vector<FactoredFace> faces;
  std::vector<FaceSpace> left, right;
  for (std::size_t i = 0; i < family.pairs.size(); ++i) {
    faces.push_back(factor_face(family.pairs[i], i, tol));
    left.push_back({i, faces.back().split.dl});
    right.push_back({i, faces.back().split.dr});
  }
  left_basis_ = std::make_shared<const FockBasis>(left, trunc_len);
  right_basis_ = std::make_shared<const FockBasis>(right, trunc_len);
  // Both sides are realized by left representations λ on their own free product.
  for (const auto& l : alphabet_) {
    if (l.face >= faces.size()) throw InvalidInput("letter '" + l.label + "' refers to an unknown face");
    const FactoredFace& f = faces[l.face];
    const MatrixStarAlgebra& alg = l.side == Side::Left ? f.left : f.right;
    if (!alg.contains(l.element, tol)) throw InvalidInput("letter '" + l.label + "' is not in its face algebra");
    if (l.side == Side::Left) {
      local_index_.push_back(left_factors_.size());
      left_factors_.push_back({Side::Left, l.face, f.left_gns.rep(l.element)});
    } else {
      local_index_.push_back(right_factors_.size());
      right_factors_.push_back({Side::Left, l.face, f.right_gns.rep(l.element)});
    }
  }
  left_engine_ = std::make_unique<MomentEngine>(left_basis_, left_factors_);
  right_engine_ = std::make_unique<MomentEngine>(right_basis_, right_factors_);
}

void TensorOfFreeProducts::split(const std::vector<std::size_t>& word, std::vector<std::size_t>& l,
                                 std::vector<std::size_t>& r) const {
  for (std::size_t idx : word) {
    (alphabet_.at(idx).side == Side::Left ? l : r).push_back(local_index_[idx]);
  }
}

cplx TensorOfFreeProducts::moment(const std::vector<std::size_t>& word) {
  std::vector<std::size_t> l, r;
  split(word, l, r);
  return left_engine_->moment(l) * right_engine_->moment(r);
}

FockVector TensorOfFreeProducts::vec(std::size_t side, const std::vector<std::size_t>& word) {
  auto& cache = side == 0 ? left_vecs_ : right_vecs_;
  auto it = cache.find(word);
  if (it != cache.end()) return it->second;
  const FockBasis& basis = side == 0 ? *left_basis_ : *right_basis_;
  const auto& factors = side == 0 ? left_factors_ : right_factors_;
  FockVector v = FockVector::vacuum(basis);
  for (auto w = word.rbegin(); w != word.rend(); ++w) {
    const FaceFactor& f = factors[*w];
    v = apply_face(basis, f.side, f.face, f.matrix, v);
  }
  cache.emplace(word, v);
  return v;
}

cplx TensorOfFreeProducts::inner(const std::vector<std::size_t>& u, const std::vector<std::size_t>& w) {
  std::vector<std::size_t> ul, ur, wl, wr;
  split(u, ul, ur);
  split(w, wl, wr);
  return bfp::inner(vec(0, ul), vec(0, wl)) * bfp::inner(vec(1, ur), vec(1, wr));
}

namespace {

std::vector<FaceFactor> alphabet_factors(const BiFreeProduct& prod, const std::vector<Letter>& alphabet) {
  std::vector<FaceFactor> out;
  for (const auto& l : alphabet) out.push_back(prod.letter_factor(l));
  return out;
}

FockVector apply_word(const FockBasis& basis, const std::vector<FaceFactor>& factors,
                      const std::vector<std::size_t>& word, FockVector v) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const FaceFactor& f = factors[*it];
    v = apply_face(basis, f.side, f.face, f.matrix, v);
  }
  return v;
}

// Ranks of the Gram matrices of {wξ} for words of length ≤ m on both sides.
std::pair<std::size_t, std::size_t> word_span_dims(const BiFreeProduct& prod, const std::vector<FaceFactor>& factors,
                                                   TensorOfFreeProducts& tensor, std::size_t alphabet_size,
                                                   std::size_t m, const Tolerance& tol) {
  const auto words = enumerate_words_upto(alphabet_size, m);
  std::vector<FockVector> vecs;
  for (const auto& w : words) vecs.push_back(apply_word(prod.basis(), factors, w, FockVector::vacuum(prod.basis())));
  const std::size_t n = words.size();
  CMatrix ga(n, n), gb(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      ga(a, b) = inner(vecs[a], vecs[b]);
      ga(b, a) = std::conj(ga(a, b));
      gb(a, b) = tensor.inner(words[a], words[b]);
      gb(b, a) = std::conj(gb(a, b));
    }
  return {numeric_rank(ga, tol), numeric_rank(gb, tol)};
}

}  // namespace

IsoReport thm32_iso_check(const FaceFamily& family, std::size_t trunc_len, std::size_t word_len_max,
                          const Tolerance& tol) {
  TensorOfFreeProducts tensor(family, trunc_len, tol);
  const auto& alphabet = tensor.alphabet();
  const BiFreeProduct prod(family, trunc_len, tol);
  const auto factors = alphabet_factors(prod, alphabet);
  MomentEngine engine(prod.basis_ptr(), factors);

  IsoReport out;
  for (const auto& w : enumerate_words_upto(alphabet.size(), word_len_max)) {
    const double d = std::abs(engine.moment(w) - tensor.moment(w));
    if (out.words_compared == 0 || d > out.max_moment_defect) {
      out.max_moment_defect = d;
      out.worst_word = w;
    }
    ++out.words_compared;
  }
  std::tie(out.dim_a, out.dim_b) =
      word_span_dims(prod, factors, tensor, alphabet.size(), std::min(word_len_max / 2, trunc_len), tol);
  out.verdict = out.max_moment_defect <= tol.eq_tol && out.dim_a == out.dim_b;
  return out;
}

namespace {

// Largest eigenvalue of a positive semidefinite matrix by power iteration.
double top_eigenvalue(const CMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 0.0;
  std::vector<cplx> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = 1.0 + 0.01 * static_cast<double>(k % 7);
  double nx = norm2(x);
  for (auto& z : x) z /= nx;
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    std::vector<cplx> y = m * std::span<const cplx>(x);
    const double next = inner(x, y).real();
    const double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    for (std::size_t k = 0; k < n; ++k) x[k] = y[k] / ny;
    if (it > 10 && std::abs(next - lambda) <= 1e-13 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace

KernelProbeReport state_kernel_probe(const BiFreeProduct& prod, std::size_t word_len_max, std::uint64_t seed,
                                     const Tolerance& /*tol*/) {
  KernelProbeReport out;
  const auto alphabet = generator_alphabet(prod.family());
  if (word_len_max == 0) {
    out.words = 1;
    out.rank = 1;
    return out;
  }
  const BiFreeProduct probe = prod.with_truncation(word_len_max);
  const FockBasis& basis = probe.basis();
  out.probe_trunc = word_len_max;
  const auto factors = alphabet_factors(probe, alphabet);

  FockVector v(basis, 1);
  {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (std::size_t k = basis.size_upto(0); k < basis.size_upto(1); ++k) v.data()[k] = cplx(g(rng), g(rng));
    const double nv = v.norm();
    if (nv > 0.0)
      for (auto& z : v.data()) z /= nv;
  }

  const auto words = enumerate_words_upto(alphabet.size(), word_len_max);
  out.words = words.size();
  const double dep_tol = 1e-8;

  std::vector<std::vector<cplx>> e, s, c;  // orthonormal p-basis, matching x·v images, word coefficients
  std::map<std::vector<std::size_t>, std::pair<FockVector, FockVector>> store;
  double best_dep = 2.0;
  std::vector<cplx> best_coeffs;

  for (std::size_t widx = 0; widx < words.size(); ++widx) {
    const auto& w = words[widx];
    FockVector p, q;
    if (w.empty()) {
      p = FockVector::vacuum(basis);
      q = v;
    } else {
      const auto& tail = store.at(std::vector<std::size_t>(w.begin() + 1, w.end()));
      const FaceFactor& f = factors[w.front()];
      p = apply_face(basis, f.side, f.face, f.matrix, tail.first);
      q = apply_face(basis, f.side, f.face, f.matrix, tail.second);
    }
    if (w.size() < word_len_max) store.emplace(w, std::make_pair(p, q));

    std::vector<cplx> r = p.dense(basis), qr = q.dense(basis);
    const double pn = norm2(r), qn0 = norm2(qr);
    std::vector<cplx> alpha(e.size());
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < e.size(); ++k) {
        const cplx a = inner(e[k], r);
        axpy(-a, e[k], r);
        alpha[k] += a;
      }
    for (std::size_t k = 0; k < e.size(); ++k) axpy(-alpha[k], s[k], qr);
    const double rn = norm2(r);

    auto combination = [&](double scale) {
      std::vector<cplx> coeffs(words.size());
      coeffs[widx] = 1.0;
      for (std::size_t k = 0; k < e.size(); ++k) axpy(-alpha[k], c[k], coeffs);
      for (auto& z : coeffs) z /= scale;
      return coeffs;
    };

    if (rn <= dep_tol * std::max(1.0, pn)) {
      const double qn = norm2(qr);
      if (qn <= dep_tol * std::max(1.0, qn0)) {
        ++out.genuine_relations;  // x vanishes on ξ and v alike
        continue;
      }
      const double ratio = rn / std::sqrt((rn * rn + qn * qn) / 2.0);
      if (ratio < best_dep) {
        best_dep = ratio;
        best_coeffs = combination(1.0);
      }
      continue;
    }
    for (auto& z : r) z /= rn;
    for (auto& z : qr) z /= rn;
    c.push_back(combination(rn));
    e.push_back(std::move(r));
    s.push_back(std::move(qr));
  }
  out.rank = e.size();

  CMatrix gram(e.size(), e.size());
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a; b < s.size(); ++b) {
      gram(a, b) = inner(s[a], s[b]);
      gram(b, a) = std::conj(gram(a, b));
    }
  const double sigma2 = top_eigenvalue(gram);
  const double indep = std::sqrt(2.0 / (1.0 + sigma2));
  out.min_ratio = std::min(indep, best_dep);

  if (!best_coeffs.empty() && best_dep <= indep) {
    double cmax = 0.0;
    for (const auto& z : best_coeffs) cmax = std::max(cmax, std::abs(z));
    FockOperator x = FockOperator::zero(probe.basis_ptr());
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (std::abs(best_coeffs[k]) <= 1e-14 * cmax) continue;
      out.witness.push_back({best_coeffs[k], words[k]});
      FockOperator term = FockOperator::identity(probe.basis_ptr());
      for (std::size_t idx : words[k]) term = term * FockOperator::factor(probe.basis_ptr(), factors[idx]);
      x += term * best_coeffs[k];
    }
    const double xn = x.apply(FockVector::vacuum(basis)).norm();
    out.witness_value = xn * xn;
  }
  return out;
}

CorollaryReport corollary_report(const FaceFamily& family, const MomentModel& ambient,
                                 const std::vector<Letter>& alphabet, const CorollaryOptions& options,
                                 const Tolerance& tol) {
  CorollaryReport out;
  BiIndependenceOptions bo;
  bo.trunc_len = options.trunc_len;
  bo.word_len_max = options.word_len_max;
  bo.seed = options.seed;
  const auto bi = check_biindependence(family, ambient, alphabet, bo, tol);
  out.biindependence_defect = bi.max_defect;
  if (!bi.bifree) {
    std::ostringstream os;
    os << "corollary precondition failed: family is not bi-free in the ambient (max defect " << bi.max_defect << ")";
    throw InvalidInput(os.str());
  }

  if (const auto* m = dynamic_cast<const MatrixAmbient*>(&ambient)) {
    std::vector<CMatrix> gens;
    for (const auto& l : alphabet) gens.push_back(l.element);
    const auto alg = close_algebra(m->state().dim(), gens, tol);
    CMatrix g(alg.dim(), alg.dim());
    for (std::size_t a = 0; a < alg.dim(); ++a)
      for (std::size_t b = 0; b < alg.dim(); ++b)
        g(b, a) = m->state()(alg.closure_basis()[b].adjoint() * alg.closure_basis()[a]);
    out.faithfulness_margin = hermitian_eig(g, tol).values.front();
    if (!is_faithful(m->state(), alg, tol).faithful) {
      throw InvalidInput("corollary precondition failed: ambient state is not faithful on the generated algebra");
    }
  } else if (const auto* b = dynamic_cast<const BiFreeAmbient*>(&ambient)) {
    const auto probe = state_kernel_probe(b->product(), options.probe_word_len, options.seed, tol);
    out.faithfulness_margin = probe.min_ratio;
    if (probe.min_ratio <= 1e-6) {
      throw InvalidInput("corollary precondition failed: kernel probe found a state-kernel witness");
    }
  } else {
    throw InvalidInput("corollary: unsupported ambient model");
  }

  for (std::size_t i = 0; i < family.pairs.size(); ++i) {
    const FacePair& p = family.pairs[i];
    factor_face(p, i, tol);
    const auto inj = tensor_injectivity_defect(p, tol);
    if (!inj.injective() || p.ambient.dim() != inj.dim_kron) {
      throw UnsupportedStructure("corollary precondition failed: face " + std::to_string(i) +
                                 " is not the minimal tensor product of its two faces");
    }
  }

  const auto words = enumerate_words_upto(alphabet.size(), options.word_len_max);
  const auto amb = ambient.moments(alphabet, words);
  const BiFreeProduct prod(family, options.trunc_len, tol);
  const auto factors = alphabet_factors(prod, alphabet);
  MomentEngine engine(prod.basis_ptr(), factors);
  TensorOfFreeProducts tensor(family, options.trunc_len, tol, alphabet);
  for (std::size_t n = 0; n < words.size(); ++n) {
    const cplx bf = engine.moment(words[n]);
    const cplx tp = tensor.moment(words[n]);
    const double d1 = std::abs(amb[n] - bf), d2 = std::abs(bf - tp), d3 = std::abs(amb[n] - tp);
    out.ambient_vs_bifree = std::max(out.ambient_vs_bifree, d1);
    out.bifree_vs_tensor = std::max(out.bifree_vs_tensor, d2);
    out.ambient_vs_tensor = std::max(out.ambient_vs_tensor, d3);
    const double d = std::max({d1, d2, d3});
    if (n == 0 || d > out.iso.max_moment_defect) {
      out.iso.max_moment_defect = d;
      out.iso.worst_word = words[n];
    }
  }
  out.iso.words_compared = words.size();
  std::tie(out.iso.dim_a, out.iso.dim_b) = word_span_dims(
      prod, factors, tensor, alphabet.size(), std::min(options.word_len_max / 2, options.trunc_len), tol);
  out.iso.verdict = out.iso.max_moment_defect <= tol.eq_tol && out.iso.dim_a == out.iso.dim_b;
  return out;
}

}  // namespace bfp
