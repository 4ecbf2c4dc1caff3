#include "grlab/grfunctors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace grlab {

// ------------------------------------------------------------------ group algebra

QGVec right_average(const MatGroup& G, const QGVec& x, const std::vector<int>& S) {
  QGVec y(G.order());
  Rat w(1, static_cast<long>(S.size()));
  for (int g = 0; g < G.order(); ++g) {
    if (sgn(x[g]) == 0) continue;
    Rat c = x[g] * w;
    for (int s : S) y[G.mul(g, s)] += c;
  }
  return y;
}

GAElem support_projection(const MatGroup& G, const std::vector<int>& A, const std::vector<int>& B) {
  int N = G.order();
  auto apply_a = [&](const QGVec& x) { return right_average(G, right_average(G, right_average(G, x, A), B), A); };
  QGVec one(N);
  one[G.identity()] = 1;
  std::vector<QGVec> pw;  // pw[t] = a^{t+1}
  std::vector<QGVec> rows;
  std::vector<int> piv;
  std::vector<std::vector<Rat>> comb;
  std::vector<Rat> rel;
  QGVec cur = one;
  for (;;) {
    cur = apply_a(cur);
    pw.push_back(cur);
    int j = static_cast<int>(pw.size()) - 1;
    QGVec r = cur;
    std::vector<Rat> cb(j + 1);
    cb[j] = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (sgn(r[piv[i]]) == 0) continue;
      Rat f = r[piv[i]] / rows[i][piv[i]];
      for (int g = 0; g < N; ++g)
        if (sgn(rows[i][g]) != 0) r[g] -= f * rows[i][g];
      for (std::size_t t = 0; t < comb[i].size(); ++t) cb[t] -= f * comb[i][t];
    }
    int p = 0;
    while (p < N && sgn(r[p]) == 0) ++p;
    if (p == N) {
      rel = cb;
      break;
    }
    rows.push_back(std::move(r));
    piv.push_back(p);
    comb.push_back(std::move(cb));
  }
  // sum_t rel[t] a^{t+1} = 0, rel.back() = 1; nu(t) = sum_t rel[t] t^t.
  if (sgn(rel[0]) == 0) throw std::logic_error("support_projection: a is not semisimple");
  QGVec pi(N);
  for (std::size_t t = 1; t < rel.size(); ++t) {
    if (sgn(rel[t]) == 0) continue;
    Rat f = -rel[t] / rel[0];
    for (int g = 0; g < N; ++g)
      if (sgn(pw[t - 1][g]) != 0) pi[g] += f * pw[t - 1][g];
  }
  if (right_average(G, pi, A) != pi) throw std::logic_error("support_projection: not absorbed by e_A");
  GAElem out;
  for (int g = 0; g < N; ++g)
    if (sgn(pi[g]) != 0) out[g] = pi[g];
  return out;
}

std::vector<std::vector<Rat>> image_weights(const MatGroup& G, const GAElem& pi, const std::vector<int>& lreps) {
  std::vector<std::vector<Rat>> w(lreps.size(), std::vector<Rat>(G.num_classes()));
  for (std::size_t r = 0; r < lreps.size(); ++r)
    for (const auto& [g, c] : pi) w[r][G.class_of(G.mul(lreps[r], g))] += c;
  return w;
}

CycNum ga_trace(const GAElem& x, const Character& chi) {
  std::vector<Rat> per(chi.group->num_classes());
  for (const auto& [g, c] : x) per[chi.group->class_of(g)] += c;
  CycNum s(0);
  for (std::size_t k = 0; k < per.size(); ++k)
    if (sgn(per[k]) != 0) s += chi.vals[k] * CycNum(per[k]);
  return s;
}

// ------------------------------------------------------------------ elements

GRElem& GRElem::operator+=(const GRElem& o) {
  for (const auto& [k, v] : o.terms) terms[k] += v;
  prune();
  return *this;
}

GRElem& GRElem::operator-=(const GRElem& o) {
  for (const auto& [k, v] : o.terms) terms[k] -= v;
  prune();
  return *this;
}

GRElem GRElem::scaled(long s) const {
  GRElem r = *this;
  for (auto& [k, v] : r.terms) v *= s;
  r.prune();
  return r;
}

void GRElem::prune() {
  for (auto it = terms.begin(); it != terms.end();) it = it->second == 0 ? terms.erase(it) : std::next(it);
}

std::string GRElem::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms) {
    if (!first) os << " + ";
    first = false;
    if (v != 1) os << v << "*";
    os << "[" << k.first << ":" << k.second << "]";
  }
  return os.str();
}

GRElem operator+(GRElem a, const GRElem& b) { return a += b; }
GRElem operator-(GRElem a, const GRElem& b) { return a -= b; }

GRTensor& GRTensor::operator+=(const GRTensor& o) {
  for (const auto& [k, v] : o.terms) terms[k] += v;
  prune();
  return *this;
}

GRTensor& GRTensor::operator-=(const GRTensor& o) {
  for (const auto& [k, v] : o.terms) terms[k] -= v;
  prune();
  return *this;
}

void GRTensor::prune() {
  for (auto it = terms.begin(); it != terms.end();) it = it->second == 0 ? terms.erase(it) : std::next(it);
}

std::string GRTensor::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms) {
    if (!first) os << " + ";
    first = false;
    if (v != 1) os << v << "*";
    for (std::size_t f = 0; f < k.size(); ++f) {
      if (f) os << "#";
      os << "[" << k[f].first << ":" << k[f].second << "]";
    }
  }
  return os.str();
}

// ------------------------------------------------------------------ compositions

std::vector<int> Composition::decode(int lam) const {
  std::vector<int> c(radix.size());
  for (int f = static_cast<int>(radix.size()) - 1; f >= 0; --f) {
    c[f] = lam % radix[f];
    lam /= radix[f];
  }
  return c;
}

int Composition::encode(const std::vector<int>& cls) const {
  int id = 0;
  for (std::size_t f = 0; f < radix.size(); ++f) id = id * radix[f] + cls[f];
  return id;
}

GRContext::GRContext(RingPtr R, int max_n, EnumCaps caps) : ring_(std::move(R)), max_n_(max_n), caps_(caps) {}

GroupPtr GRContext::group(int n) const {
  if (n < 1 || n > max_n_) throw std::out_of_range("group degree out of range");
  auto it = groups_.find(n);
  if (it != groups_.end()) return it->second;
  auto G = MatGroup::general_linear(ring_, n, caps_);
  groups_[n] = G;
  return G;
}

TablePtr GRContext::table(int n) const { return character_table(group(n)); }

int GRContext::num_irr(int n) const { return n == 0 ? 1 : table(n)->size(); }

const Character& GRContext::character(int n, int label) const { return table(n)->irr.at(label); }

Character GRContext::character_of(int n, const GRElem& a) const {
  std::vector<long> c(num_irr(n), 0);
  for (const auto& [k, v] : a.terms)
    if (k.first == n) c[k.second] = v;
  return table(n)->combine(c);
}

const Composition& GRContext::composition(const std::vector<int>& parts) const {
  auto it = comps_.find(parts);
  if (it != comps_.end()) return *it->second;
  auto C = std::make_unique<Composition>();
  C->parts = parts;
  C->n = std::accumulate(parts.begin(), parts.end(), 0);
  for (int p : parts)
    if (p < 1) throw std::invalid_argument("composition parts must be positive");
  GroupPtr G = group(C->n);
  C->tri = standard_subgroups(G, parts);
  std::string nm = "L";
  for (int p : parts) nm += "_" + std::to_string(p);
  C->Lemb = make_embedding(C->tri.L, nm);
  for (int p : parts) C->radix.push_back(group(p)->num_classes());
  int nl = 1;
  for (int r : C->radix) nl *= r;
  C->lrep.assign(nl, -1);
  C->lsize.assign(nl, 0);
  C->lorder = C->tri.L.order();
  C->lclass_of.resize(C->tri.L.elems.size());
  for (std::size_t pos = 0; pos < C->tri.L.elems.size(); ++pos) {
    int g = C->tri.L.elems[pos];
    RMat M = G->element(g);
    std::vector<int> cls;
    int off = 0;
    for (int p : parts) {
      GroupPtr Gp = group(p);
      cls.push_back(Gp->class_of(Gp->find(sub_block(M, off, off, p, p))));
      off += p;
    }
    int id = C->encode(cls);
    C->lclass_of[pos] = id;
    ++C->lsize[id];
    if (C->lrep[id] < 0) C->lrep[id] = g;
  }
  C->piL = support_projection(*G, C->tri.U.elems, C->tri.V.elems);
  C->piR = support_projection(*G, C->tri.V.elems, C->tri.U.elems);
  C->w = image_weights(*G, C->piL, C->lrep);
  C->wp.assign(G->num_classes(), std::vector<Rat>(nl));
  const auto& Lel = C->tri.L.elems;
  for (const auto& [z, c] : C->piR) {
    int zi = G->inv(z);
    for (std::size_t pos = 0; pos < Lel.size(); ++pos)
      C->wp[G->class_of(G->mul(Lel[pos], zi))][C->lclass_of[pos]] += c;
  }
  for (int c = 0; c < G->num_classes(); ++c)
    for (int l = 0; l < nl; ++l)
      if (sgn(C->wp[c][l]) != 0) C->wp[c][l] *= Rat(G->order()) / Rat(G->class_size(c) * C->lorder);
  // bi-adjointness at the level of weights
  for (int c = 0; c < G->num_classes(); ++c)
    for (int l = 0; l < nl; ++l)
      if (C->wp[c][l] * G->class_size(c) * C->lorder != C->w[l][c] * C->lsize[l] * G->order())
        throw std::logic_error("pres/pind weights are not adjoint");
  auto& ref = *C;
  comps_[parts] = std::move(C);
  return ref;
}

std::vector<CycNum> GRContext::pres_values(const Character& theta, const Composition& C) const {
  std::vector<CycNum> v(C.num_lclasses(), CycNum(0));
  for (int l = 0; l < C.num_lclasses(); ++l)
    for (std::size_t c = 0; c < C.w[l].size(); ++c)
      if (sgn(C.w[l][c]) != 0) v[l] += theta.vals[c] * CycNum(C.w[l][c]);
  return v;
}

Character GRContext::pind_values(const std::vector<CycNum>& X, const Composition& C) const {
  GroupPtr G = group(C.n);
  std::vector<CycNum> v(G->num_classes(), CycNum(0));
  for (int c = 0; c < G->num_classes(); ++c)
    for (int l = 0; l < C.num_lclasses(); ++l)
      if (sgn(C.wp[c][l]) != 0 && !X[l].is_zero()) v[c] += X[l] * CycNum(C.wp[c][l]);
  return Character(G, std::move(v));
}

std::vector<CycNum> GRContext::outer_product(const std::vector<int>& labels, const Composition& C) const {
  std::vector<CycNum> X(C.num_lclasses());
  for (int l = 0; l < C.num_lclasses(); ++l) {
    auto cls = C.decode(l);
    CycNum v(1);
    for (std::size_t f = 0; f < cls.size(); ++f) v *= character(C.parts[f], labels[f]).vals[cls[f]];
    X[l] = v;
  }
  return X;
}

namespace {

// Drops zero parts; returns positions of the nonzero ones.
std::vector<int> nonzero_positions(const std::vector<int>& parts) {
  std::vector<int> pos;
  for (std::size_t f = 0; f < parts.size(); ++f)
    if (parts[f] > 0) pos.push_back(static_cast<int>(f));
  return pos;
}

}  // namespace

GRTensor GRContext::pres(int n, int label, const std::vector<int>& parts) const {
  auto key = std::make_pair(parts, std::make_pair(n, label));
  auto it = pres_cache_.find(key);
  if (it != pres_cache_.end()) return it->second;
  if (std::accumulate(parts.begin(), parts.end(), 0) != n) throw std::invalid_argument("pres: composition mismatch");
  GRTensor out;
  auto pos = nonzero_positions(parts);
  std::vector<Basis> base(parts.size(), Basis{0, 0});
  if (n == 0) {
    out.terms[base] = 1;
  } else if (pos.size() == 1) {
    base[pos[0]] = {n, label};
    out.terms[base] = 1;
  } else {
    std::vector<int> nz;
    for (int f : pos) nz.push_back(parts[f]);
    const Composition& C = composition(nz);
    auto V = pres_values(character(n, label), C);
    // coefficients <V, chi_a1 x ... x chi_ak>_L
    int k = static_cast<int>(nz.size());
    std::vector<int> sizes;
    for (int p : nz) sizes.push_back(num_irr(p));
    std::vector<int> idx(k, 0);
    for (;;) {
      CycNum s(0);
      for (int l = 0; l < C.num_lclasses(); ++l) {
        if (V[l].is_zero()) continue;
        auto cls = C.decode(l);
        CycNum t = V[l] * CycNum(C.lsize[l]);
        for (int f = 0; f < k; ++f) t *= character(nz[f], idx[f]).vals[cls[f]].conj();
        s += t;
      }
      s /= CycNum(C.lorder);
      long m = s.rational_integer_value();
      if (m < 0) throw std::logic_error("pres produced a negative multiplicity");
      if (m) {
        auto key2 = base;
        for (int f = 0; f < k; ++f) key2[pos[f]] = {nz[f], idx[f]};
        out.terms[key2] = m;
      }
      int f = k - 1;
      while (f >= 0 && ++idx[f] == sizes[f]) idx[f--] = 0;
      if (f < 0) break;
    }
  }
  pres_cache_[key] = out;
  return out;
}

GRElem GRContext::pind(const std::vector<Basis>& factors) const {
  auto it = pind_cache_.find(factors);
  if (it != pind_cache_.end()) return it->second;
  std::vector<int> nz, labels;
  for (const auto& [n, l] : factors)
    if (n > 0) {
      nz.push_back(n);
      labels.push_back(l);
    }
  GRElem out;
  if (nz.empty()) {
    out = GRElem::unit();
  } else if (nz.size() == 1) {
    out = GRElem::basis(nz[0], labels[0]);
  } else {
    const Composition& C = composition(nz);
    Character chi = pind_values(outer_product(labels, C), C);
    auto m = table(C.n)->decompose(chi);
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] < 0) throw std::logic_error("pind produced a negative multiplicity");
      if (m[k]) out.terms[{C.n, static_cast<int>(k)}] = m[k];
    }
    if (character_of(C.n, out) != chi) throw std::logic_error("pind character is not a combination of irreducibles");
  }
  pind_cache_[factors] = out;
  return out;
}

GRElem GRContext::pind_adjoint(const std::vector<Basis>& factors) const {
  std::vector<int> parts;
  int n = 0;
  for (const auto& [m, l] : factors) {
    parts.push_back(m);
    n += m;
  }
  if (n == 0) return GRElem::unit();
  std::vector<int> cands;
  int i = grading_level();
  if (i >= 1) {
    RMat M;
    bool have = false;
    for (const auto& [m, l] : factors) {
      if (m == 0) continue;
      RMat g = grading(m, l, i);
      M = have ? block_sum(M, g) : g;
      have = true;
    }
    cands = block(n, canonical_rep(M, caps_));
  } else {
    cands.resize(num_irr(n));
    std::iota(cands.begin(), cands.end(), 0);
  }
  GRElem out;
  for (int th : cands) {
    GRTensor p = pres(n, th, parts);
    auto it = p.terms.find(factors);
    if (it != p.terms.end()) out.terms[{n, th}] = it->second;
  }
  return out;
}

// ------------------------------------------------------------------ gradings

RMat GRContext::grading(int n, int label, int i) const {
  if (i < 1 || 2 * i > ell()) throw std::invalid_argument("grading level must satisfy 1 <= i <= l/2");
  auto key = std::make_tuple(n, label, i);
  auto it = gradings_.find(key);
  if (it != gradings_.end()) return it->second;
  auto kit = kdata_.find({n, i});
  if (kit == kdata_.end()) {
    GroupPtr G = group(n);
    Embedding K = make_embedding(congruence_kernel(G, ell() - i), "K");
    std::vector<std::pair<RMat, Character>> phis;
    for (const auto& sc : similarity_classes(ring_, n, i, caps_))
      phis.emplace_back(sc.rep, phi_star_character(K.sub, sc.rep, ell()));
    kit = kdata_.emplace(std::make_pair(n, i), std::make_pair(std::move(K), std::move(phis))).first;
  }
  const auto& [K, phis] = kit->second;
  Character res = restrict(character(n, label), K);
  std::vector<RMat> hits;
  for (const auto& [rep, phi] : phis)
    if (!inner_product_cyc(res, phi).is_zero()) hits.push_back(rep);
  if (hits.size() != 1) throw std::logic_error("irreducible does not have a unique grading class");
  gradings_[key] = hits[0];
  return hits[0];
}

std::vector<int> GRContext::block(int n, const RMat& cls) const {
  int i = cls.ring->ell();
  RMat c = canonical_rep(cls, caps_);
  std::vector<int> out;
  for (int k = 0; k < num_irr(n); ++k)
    if (grading(n, k, i) == c) out.push_back(k);
  return out;
}

// ------------------------------------------------------------------ product and coproduct

GRElem GRContext::circle(const GRElem& a, const GRElem& b) const {
  GRElem out;
  for (const auto& [ka, va] : a.terms)
    for (const auto& [kb, vb] : b.terms) out += pind({ka, kb}).scaled(va * vb);
  return out;
}

GRTensor GRContext::delta(const GRElem& c) const {
  GRTensor out;
  for (const auto& [k, v] : c.terms) {
    int n = k.first;
    for (int j = 0; j <= n; ++j) {
      GRTensor p = pres(n, k.second, {j, n - j});
      for (const auto& [kk, vv] : p.terms) out.terms[kk] += v * vv;
    }
  }
  out.prune();
  return out;
}

GRTensor GRContext::delta_tensor(const GRTensor& t, int slot) const {
  GRTensor out;
  for (const auto& [k, v] : t.terms) {
    GRTensor d = delta(GRElem::basis(k[slot].first, k[slot].second));
    for (const auto& [dk, dv] : d.terms) {
      std::vector<Basis> nk(k.begin(), k.begin() + slot);
      nk.insert(nk.end(), dk.begin(), dk.end());
      nk.insert(nk.end(), k.begin() + slot + 1, k.end());
      out.terms[nk] += v * dv;
    }
  }
  out.prune();
  return out;
}

GRTensor GRContext::circle_tensor(const GRTensor& x, const GRTensor& y) const {
  GRTensor out;
  for (const auto& [kx, vx] : x.terms)
    for (const auto& [ky, vy] : y.terms) {
      if (kx.size() != ky.size()) throw std::invalid_argument("tensor ranks differ");
      GRTensor cur;
      cur.terms[{}] = vx * vy;
      for (std::size_t f = 0; f < kx.size(); ++f) {
        GRElem p = pind({kx[f], ky[f]});
        GRTensor nx;
        for (const auto& [ck, cv] : cur.terms)
          for (const auto& [pk, pv] : p.terms) {
            auto nk = ck;
            nk.push_back(pk);
            nx.terms[nk] += cv * pv;
          }
        cur = std::move(nx);
      }
      out += cur;
    }
  out.prune();
  return out;
}

long GRContext::form(const GRElem& a, const GRElem& b) const {
  long s = 0;
  for (const auto& [k, v] : a.terms) {
    auto it = b.terms.find(k);
    if (it != b.terms.end()) s += v * it->second;
  }
  return s;
}

long GRContext::form(const GRTensor& a, const GRTensor& b) const {
  long s = 0;
  for (const auto& [k, v] : a.terms) {
    auto it = b.terms.find(k);
    if (it != b.terms.end()) s += v * it->second;
  }
  return s;
}

HopfReport GRContext::verify_hopf(const GRElem& a, const GRElem& b) const {
  HopfReport r;
  r.a = a;
  r.b = b;
  r.lhs = delta(circle(a, b));
  r.rhs = circle_tensor(delta(a), delta(b));
  r.diff = r.lhs;
  r.diff -= r.rhs;
  r.holds = r.diff.is_zero();
  return r;
}

// ------------------------------------------------------------------ level change

GRElem GRContext::inflate_from(const GRContext& low, const GRElem& a) const {
  if (low.ring()->p() != ring_->p() || low.ring()->d() != ring_->d() || low.ell() > ell())
    throw std::invalid_argument("inflate: incompatible rings");
  GRElem out;
  for (const auto& [k, v] : a.terms) {
    auto [n, label] = k;
    if (n == 0) {
      out.terms[k] += v;
      continue;
    }
    GroupPtr G = group(n), Gl = low.group(n);
    const Character& chi = low.character(n, label);
    std::vector<CycNum> vals(G->num_classes());
    for (int c = 0; c < G->num_classes(); ++c)
      vals[c] = chi.at(Gl->find(G->element(G->class_rep(c)).reduce(low.ell())));
    int idx = table(n)->index_of(Character(G, std::move(vals)));
    if (idx < 0) throw std::logic_error("inflation is not irreducible");
    out.terms[{n, idx}] += v;
  }
  out.prune();
  return out;
}

// ------------------------------------------------------------------ bimodule oracle

const ExplicitRep& GRContext::model(int n, int label) const {
  auto it = models_.find({n, label});
  if (it != models_.end()) return it->second;
  return models_.emplace(std::make_pair(n, label), explicit_model(character(n, label))).first->second;
}

namespace {

DMat<CycNum> kron(const DMat<CycNum>& A, const DMat<CycNum>& B) {
  DMat<CycNum> K(A.rows * B.rows, A.cols * B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      if (A(i, j).is_zero()) continue;
      for (int k = 0; k < B.rows; ++k)
        for (int l = 0; l < B.cols; ++l)
          if (!B(k, l).is_zero()) K(i * B.rows + k, j * B.cols + l) = A(i, j) * B(k, l);
    }
  return K;
}

}  // namespace

PindOracleResult GRContext::pind_oracle(const std::vector<Basis>& factors) const {
  std::vector<int> nz, labels;
  for (const auto& [n, l] : factors)
    if (n > 0) {
      nz.push_back(n);
      labels.push_back(l);
    }
  if (nz.size() < 2) throw std::invalid_argument("pind_oracle needs at least two nonzero factors");
  const Composition& C = composition(nz);
  GroupPtr G = group(C.n);
  const MatGroup& Gr = *G;
  // X on L
  std::vector<int> lpos(G->order(), -1);
  for (std::size_t p = 0; p < C.tri.L.elems.size(); ++p) lpos[C.tri.L.elems[p]] = static_cast<int>(p);
  std::vector<const ExplicitRep*> fm;
  int dx = 1;
  for (std::size_t f = 0; f < nz.size(); ++f) {
    fm.push_back(&model(nz[f], labels[f]));
    dx *= fm.back()->dim;
  }
  std::map<int, DMat<CycNum>> xcache;
  auto X = [&](int g) -> const DMat<CycNum>& {
    auto it = xcache.find(g);
    if (it != xcache.end()) return it->second;
    RMat M = Gr.element(g);
    DMat<CycNum> K = DMat<CycNum>::identity(1);
    int off = 0;
    for (std::size_t f = 0; f < nz.size(); ++f) {
      GroupPtr Gf = group(nz[f]);
      K = kron(K, fm[f]->mats[Gf->find(sub_block(M, off, off, nz[f], nz[f]))]);
      off += nz[f];
    }
    return xcache.emplace(g, std::move(K)).first->second;
  };
  // cosets G/L
  std::vector<int> coset(G->order(), -1), reps;
  for (int g = 0; g < G->order(); ++g) {
    if (coset[g] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int l : C.tri.L.elems) coset[Gr.mul(g, l)] = id;
  }
  int nc = static_cast<int>(reps.size());
  int D = nc * dx;
  // x = t_i l
  auto split = [&](int x) {
    int i = coset[x];
    return std::make_pair(i, Gr.mul(Gr.inv(reps[i]), x));
  };
  // matrix of right multiplication by e_U e_V on Ind
  DMat<CycNum> Rb(D, D);
  Rat wgt(1, static_cast<long>(C.tri.U.order()) * C.tri.V.order());
  std::vector<int> uv;
  for (int u : C.tri.U.elems)
    for (int v : C.tri.V.elems) uv.push_back(Gr.mul(u, v));
  for (int j = 0; j < nc; ++j) {
    std::map<std::pair<int, int>, Rat> acc;  // (coset, l) -> weight
    for (int y : uv) {
      auto [i, l] = split(Gr.mul(reps[j], y));
      acc[{i, l}] += wgt;
    }
    for (const auto& [il, c] : acc) {
      const auto& Xl = X(il.second);
      for (int a = 0; a < dx; ++a)
        for (int b = 0; b < dx; ++b)
          if (!Xl(a, b).is_zero()) Rb(il.first * dx + a, j * dx + b) += Xl(a, b) * CycNum(c);
    }
  }
  DMat<CycNum> B = select_columns(Rb, independent_columns(Rb));
  int r = B.cols;
  auto rows = independent_columns(transpose(B));
  DMat<CycNum> BI(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) BI(a, b) = B(rows[a], b);
  DMat<CycNum> BIinv = inverse(BI);
  // g acting on the image, in the basis B
  auto apply_ind = [&](int g, const DMat<CycNum>& M) {
    DMat<CycNum> out(D, M.cols);
    for (int j = 0; j < nc; ++j) {
      auto [i, l] = split(Gr.mul(g, reps[j]));
      const auto& Xl = X(l);
      for (int a = 0; a < dx; ++a)
        for (int b = 0; b < dx; ++b) {
          if (Xl(a, b).is_zero()) continue;
          for (int c = 0; c < M.cols; ++c)
            if (!M(j * dx + b, c).is_zero()) out(i * dx + a, c) += Xl(a, b) * M(j * dx + b, c);
        }
    }
    return out;
  };
  ExplicitRep Y{G, r, {}};
  Y.fn = [&, rows](int g) {
    DMat<CycNum> gB = apply_ind(g, B);
    DMat<CycNum> gBI(r, r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) gBI(a, b) = gB(rows[a], b);
    return BIinv * gBI;
  };
  for (int s : G->generators()) {
    if ((B * Y.rho(s)).a != apply_ind(s, B).a) throw std::logic_error("pind oracle: image is not G-stable");
  }
  PindOracleResult res;
  res.ind_dim = D;
  res.image_dim = r;
  Character chi = Y.character();
  auto m = table(C.n)->decompose(chi);
  for (std::size_t k = 0; k < m.size(); ++k)
    if (m[k]) res.product.terms[{C.n, static_cast<int>(k)}] = m[k];
  // e_U e_V versus e_V e_U on the module, and against pres through the support projection
  GAElem eU = subgroup_average(C.tri.U.elems), eV = subgroup_average(C.tri.V.elems);
  Character imUV = operator_image(Y, ga_mul(Gr, eU, eV), C.Lemb);
  Character imVU = operator_image(Y, ga_mul(Gr, eV, eU), C.Lemb);
  res.uv_equals_vu = imUV == imVU;
  auto V = pres_values(chi, C);
  bool ok = true;
  const MatGroup& Lg = *C.Lemb.sub;
  for (int d = 0; d < Lg.num_classes(); ++d) {
    int g = C.Lemb.to_parent[Lg.class_rep(d)];
    if (imUV.vals[d] != V[C.lclass_of[lpos[g]]]) ok = false;
  }
  res.image_matches_pres = ok;
  return res;
}

}  // namespace grlab
