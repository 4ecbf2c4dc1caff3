#include "grlab/basechange.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "grlab/exactla.hpp"
#include "grlab/repkit.hpp"

namespace grlab {

// ---------------------------------------------------------------- Z[zeta_p]

namespace {

long pmod(long a, long p) { return ((a % p) + p) % p; }

// Sum c_j zeta_e^j = 0 for e = q^a iff coefficients are constant along each residue class
// mod q^{a-1}.
bool zz_is_zero(const ZZ& a) {
  const int e = static_cast<int>(a.size());
  int q = 2;
  while (e % q != 0) ++q;
  const int step = e / q;
  for (int r = 0; r < step; ++r)
    for (int t = 1; t < q; ++t)
      if (a[r + t * step] != a[r]) return false;
  return true;
}

ZZ zz_mul(const ZZ& a, const ZZ& b) {
  const int p = static_cast<int>(a.size());
  ZZ r(p, 0);
  for (int i = 0; i < p; ++i)
    if (a[i] != 0)
      for (int j = 0; j < p; ++j) r[(i + j) % p] += a[i] * b[j];
  return r;
}

CycNum cyc_pow(CycNum x, long e) {
  CycNum r(1);
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= x;
    x *= x;
  }
  return r;
}

}  // namespace

bool zz_equal(const ZZ& a, const ZZ& b) {
  ZZ d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
  return zz_is_zero(d);
}

CycNum zz_value(const ZZ& a) {
  const int p = static_cast<int>(a.size());
  CycNum s(0);
  for (int j = 0; j < p; ++j)
    if (a[j] != 0) s += CycNum::zeta(p, j) * CycNum(a[j]);
  return s;
}

// ---------------------------------------------------------------- Heisenberg data

int HeisenbergData::code_of(const RMat& zb) const {
  auto it = index_.find(zb.key());
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> HeisenbergData::block_part(int i, int j) const {
  std::vector<int> out;
  for (int c = 0; c < sizeN; ++c) {
    const RMat& z = zbar[c];
    bool ok = true;
    for (int a = 0; a < z.rows && ok; ++a)
      for (int b = 0; b < z.cols && ok; ++b)
        if (z(a, b) != 0 && (a / d != i || b / d != j)) ok = false;
    if (ok) out.push_back(c);
  }
  return out;
}

HeisenbergData heisenberg(const RMat& M, int ell) {
  HeisenbergData H;
  const ChainRing& O = *M.ring;
  H.p = O.p();
  H.k = O.ell();
  H.d = O.d();
  H.m = M.n();
  H.ell = ell;
  if (ell != 2 * H.k + 1) throw std::invalid_argument("heisenberg: need l = 2k + 1 with M over level k");
  H.M = M;
  RingPtr ol = make_ring(H.p, ell, 1);
  H.az = az_split(ol, H.m, H.d);
  H.az1 = az_split(ring_at_level(ol, H.k + 1), H.m, H.d);
  H.M_emb = H.az.embed(M.lift(H.az.galois)).reduce(H.k);

  std::vector<RMat> zb;
  for (const auto& z : H.az.Z_basis) zb.push_back(z.reduce(1));
  H.dimN = static_cast<int>(zb.size());
  H.sizeN = 1;
  for (int i = 0; i < H.dimN; ++i) H.sizeN *= H.p;
  const int n = H.m * H.d;
  RingPtr F = zb.empty() ? ring_at_level(ol, 1) : zb[0].ring;
  for (int c = 0; c < H.sizeN; ++c) {
    RMat s(F, n, n), t(ol, n, n);
    int x = c;
    for (int i = 0; i < H.dimN; ++i, x /= H.p) {
      int digit = x % H.p;
      if (digit == 0) continue;
      s = s + zb[i].scaled(F->from_int(digit));
      t = t + H.az.Z_basis[i].scaled(ol->from_int(digit));
    }
    H.index_.emplace(s.key(), c);
    H.zbar.push_back(s);
    H.zlift.push_back(t);
  }
  H.add_.resize(static_cast<std::size_t>(H.sizeN) * H.sizeN);
  H.neg_.resize(H.sizeN);
  for (int a = 0; a < H.sizeN; ++a) {
    int na = 0, pw = 1;
    for (int i = 0, x = a; i < H.dimN; ++i, x /= H.p, pw *= H.p) na += pmod(-(x % H.p), H.p) * pw;
    H.neg_[a] = na;
    for (int b = 0; b < H.sizeN; ++b) {
      int s = 0;
      pw = 1;
      for (int i = 0, x = a, y = b; i < H.dimN; ++i, x /= H.p, y /= H.p, pw *= H.p)
        s += ((x % H.p + y % H.p) % H.p) * pw;
      H.add_[static_cast<std::size_t>(a) * H.sizeN + b] = s;
    }
  }
  RMat Mbar = H.M_emb.reduce(1);
  H.e = H.p == 2 ? 4 : H.p;
  H.beta_.resize(static_cast<std::size_t>(H.sizeN) * H.sizeN);
  for (int a = 0; a < H.sizeN; ++a)
    for (int b = 0; b < H.sizeN; ++b)
      H.beta_[static_cast<std::size_t>(a) * H.sizeN + b] = phi_exponent(Mbar, H.zbar[a] * H.zbar[b]);
  // the commutator pairing must be nondegenerate (M regular enough that the centralizer is A)
  for (int a = 1; a < H.sizeN; ++a) {
    bool hit = false;
    for (int i = 0, pw = 1; i < H.dimN && !hit; ++i, pw *= H.p) hit = H.pairing(a, pw) != 0;
    if (!hit) throw std::invalid_argument("heisenberg: degenerate pairing, M_emb has centralizer larger than A");
  }
  return H;
}

GroupPtr odd_stabilizer(const HeisenbergData& H) {
  GroupPtr GL = MatGroup::general_linear(H.az1.galois, H.m);
  return stabilizer(GL, H.M).as_group("G(M)");
}

GAction g_action(const HeisenbergData& H, const GroupPtr& G) {
  GAction A;
  A.G = G;
  A.sizeN = H.sizeN;
  A.act.resize(static_cast<std::size_t>(G->order()) * H.sizeN);
  for (int g = 0; g < G->order(); ++g) {
    RMat ge = H.az1.embed(G->element(g));
    RMat gk = ge.reduce(H.k);
    if (gk * H.M_emb != H.M_emb * gk) throw std::invalid_argument("g_action: element does not fix M");
    RMat gb = ge.reduce(1), gi = mat_inverse(gb);
    for (int h = 0; h < H.sizeN; ++h) {
      int c = H.code_of(gb * H.zbar[h] * gi);
      if (c < 0) throw std::logic_error("g_action: Z-bar not stable");
      A.act[static_cast<std::size_t>(g) * H.sizeN + h] = c;
    }
  }
  return A;
}

namespace {

// Elements of GN as (g, h) with section value s(g) s(h).
struct Section {
  const HeisenbergData* H;
  const GAction* A;
  std::vector<RMat> glift;  // embedded digit lifts, by group index
  std::vector<RMat> hlift;  // 1 + p^k z, by code

  RMat value(int g, int h) const { return glift[g] * hlift[h]; }
  std::pair<int, int> mul(std::pair<int, int> x, std::pair<int, int> y) const {
    const MatGroup& G = *A->G;
    int g = G.mul(x.first, y.first);
    int h = H->add((*A)(G.inv(y.first), x.second), y.second);
    return {g, h};
  }
  CycNum cocycle(std::pair<int, int> x, std::pair<int, int> y) const {
    auto xy = mul(x, y);
    RMat e = value(x.first, x.second) * value(y.first, y.second) * mat_inverse(value(xy.first, xy.second));
    return phi_star(H->M_emb, e, H->ell);
  }
};

Section make_section(const HeisenbergData& H, const GAction& A, bool alternative) {
  Section S{&H, &A, {}, {}};
  RingPtr ol = H.az.base;
  const int n = H.m * H.d;
  long pk = 1;
  for (int i = 0; i < H.k; ++i) pk *= H.p;
  RMat I = RMat::identity(ol, n);
  // the alternative perturbs the G-lift by p^{k+1} (an A-element) and the N-lift by p * Z,
  // keeping s(1) = 1
  RMat shiftA = H.az.A_basis.back().scaled(ol->from_int(pk * H.p));
  for (int g = 0; g < A.G->order(); ++g) {
    RMat x = H.az.embed(A.G->element(g).lift(H.az.galois));
    if (x.reduce(H.k + 1) != H.az1.embed(A.G->element(g))) throw std::logic_error("section: lift mismatch");
    if (alternative && g != A.G->identity()) x = x * (I + shiftA);
    S.glift.push_back(x);
  }
  for (int h = 0; h < H.sizeN; ++h) {
    RMat z = H.zlift[h];
    if (alternative && h != 0)
      z = z + H.az.Z_basis[h % H.az.Z_basis.size()].scaled(ol->from_int(H.p));
    S.hlift.push_back(I + z.scaled(ol->from_int(pk)));
  }
  return S;
}

}  // namespace

BetaReport check_beta(const HeisenbergData& H, const GAction& A, int max_group_pairs) {
  BetaReport r;
  const int N = H.sizeN, p = H.p;
  std::vector<int> basis;
  for (int i = 0, pw = 1; i < H.dimN; ++i, pw *= p) basis.push_back(pw);

  r.bimultiplicative = true;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c : basis) {
        if (pmod(H.beta(a, H.add(b, c)) - H.beta(a, b) - H.beta(a, c), p) != 0) r.bimultiplicative = false;
        if (pmod(H.beta(H.add(b, c), a) - H.beta(b, a) - H.beta(c, a), p) != 0) r.bimultiplicative = false;
      }

  const MatGroup& G = *A.G;
  std::vector<int> gs = G.generators();
  if (static_cast<long>(G.order()) * N * N <= 50000000L) {
    gs.resize(G.order());
    std::iota(gs.begin(), gs.end(), 0);
  }
  r.g_invariant = true;
  for (int g : gs)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (H.beta(A(g, a), A(g, b)) != H.beta(a, b)) r.g_invariant = false;

  r.nondegenerate = true;
  for (int a = 1; a < N; ++a) {
    bool hit = false;
    for (int b = 0; b < N && !hit; ++b) hit = H.pairing(a, b) != 0;
    if (!hit) r.nondegenerate = false;
  }

  Section S = make_section(H, A, false), S2 = make_section(H, A, true);
  const int e = G.identity();
  r.section_formula = r.section_independent = r.section_g_trivial = true;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      CycNum v = S.cocycle({e, a}, {e, b});
      if (v != CycNum::zeta(p, H.beta(a, b))) r.section_formula = false;
      if (S2.cocycle({e, a}, {e, b}) != v) r.section_independent = false;
      ++r.pairs_checked;
    }
  long budget = max_group_pairs;
  for (int g = 0; g < G.order() && budget > 0; ++g)
    for (int h = 0; h < N && budget > 0; ++h, --budget) {
      CycNum v1 = S.cocycle({g, 0}, {e, h}), v2 = S.cocycle({e, h}, {g, 0});
      if (v1 != CycNum(1) || v2 != CycNum(1)) r.section_g_trivial = false;
      if (S2.cocycle({g, 0}, {e, h}) != v1 || S2.cocycle({e, h}, {g, 0}) != v2) r.section_independent = false;
      r.pairs_checked += 2;
    }
  return r;
}

// ---------------------------------------------------------------- twisted algebra

TwElem tw_basis(const HeisenbergData& H, int h) {
  TwElem x(static_cast<std::size_t>(H.sizeN) * H.e, 0);
  x[static_cast<std::size_t>(h) * H.e] = 1;
  return x;
}

TwElem tw_mul(const HeisenbergData& H, const TwElem& x, const TwElem& y) {
  const int N = H.sizeN, e = H.e;
  std::vector<int> sx, sy;
  for (int h = 0; h < N; ++h) {
    bool nx = false, ny = false;
    for (int j = 0; j < e; ++j) {
      nx |= x[h * e + j] != 0;
      ny |= y[h * e + j] != 0;
    }
    if (nx) sx.push_back(h);
    if (ny) sy.push_back(h);
  }
  TwElem out(x.size(), 0);
  for (int a : sx)
    for (int b : sy) {
      int z = H.add(a, b), s = H.bexp(a, b);
      for (int i = 0; i < e; ++i) {
        long xa = x[a * e + i];
        if (xa == 0) continue;
        for (int j = 0; j < e; ++j) out[z * e + (i + j + s) % e] += xa * y[b * e + j];
      }
    }
  return out;
}

CycNum tw_coeff(const HeisenbergData& H, const TwElem& x, int h) {
  ZZ c(x.begin() + static_cast<long>(h) * H.e, x.begin() + static_cast<long>(h + 1) * H.e);
  return zz_value(c);
}

bool tw_proportional(const HeisenbergData& H, const TwElem& x, const TwElem& y, CycNum* ratio) {
  const int e = H.e;
  auto coeff = [&](const TwElem& v, int h) { return ZZ(v.begin() + h * e, v.begin() + (h + 1) * e); };
  int piv = -1;
  for (int h = 0; h < H.sizeN && piv < 0; ++h)
    if (!zz_is_zero(coeff(y, h))) piv = h;
  if (piv < 0) return false;
  ZZ a = coeff(x, piv), b = coeff(y, piv);
  // x_h b == y_h a for every h
  for (int h = 0; h < H.sizeN; ++h)
    if (!zz_equal(zz_mul(coeff(x, h), b), zz_mul(coeff(y, h), a))) return false;
  if (ratio) *ratio = zz_value(a) / zz_value(b);
  return true;
}

TwElem s_element(const HeisenbergData& H, const GAction& A, int g) {
  const int e = H.e;
  TwElem s(static_cast<std::size_t>(H.sizeN) * e, 0);
  for (int a = 0; a < H.sizeN; ++a) {
    int na = H.neg(a), ga = A(g, a);
    // T_{gag^-1} T_a^-1 = zeta^{-beta(a,-a)} T_{gag^-1} T_{-a}
    int x = pmod(H.bexp(ga, na) - H.bexp(a, na), e);
    s[H.add(ga, na) * e + x] += 1;
  }
  return s;
}

TwElem s_element_commutator(const HeisenbergData& H, const GAction& A, int g) {
  const int e = H.e;
  TwElem s(static_cast<std::size_t>(H.sizeN) * e, 0);
  for (int a = 0; a < H.sizeN; ++a) {
    int c = H.add(A(g, a), H.neg(a));
    s[c * e + H.bexp(c, H.neg(a))] += 1;
  }
  return s;
}

// ---------------------------------------------------------------- Lagrangian and I

namespace {

// Span of codes (N is an F_p vector space in the digit coordinates).
std::vector<int> span_of(const HeisenbergData& H, const std::vector<int>& gens) {
  std::vector<int> S{0};
  for (int g : gens) {
    std::vector<int> next;
    for (int s : S) {
      int x = s;
      for (int t = 0; t < H.p; ++t, x = H.add(x, g)) next.push_back(x);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    S = std::move(next);
  }
  return S;
}

bool beta_trivial_on(const HeisenbergData& H, const std::vector<int>& S) {
  for (int a : S)
    for (int b : S)
      if (H.beta(a, b) != 0) return false;
  return true;
}

// Isotropic subgroup of a block, of the wanted size, by backtracking over generators.
bool lagrangian_search(const HeisenbergData& H, const std::vector<int>& block, std::vector<int>& gens,
                       std::size_t want) {
  std::vector<int> cur = span_of(H, gens);
  if (cur.size() == want) return true;
  if (cur.size() > want) return false;
  for (int v : block) {
    if (std::binary_search(cur.begin(), cur.end(), v) || v < (gens.empty() ? 0 : gens.back())) continue;
    bool ok = true;
    for (int g : gens) ok = ok && H.pairing(v, g) == 0;
    if (!ok) continue;
    gens.push_back(v);
    if (lagrangian_search(H, block, gens, want)) return true;
    gens.pop_back();
  }
  return false;
}

long isqrt_exact(long n) {
  long r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n ? r : -1;
}

}  // namespace

LagrangianChoice lagrangian_from(const HeisenbergData& H, const std::vector<int>& gens) {
  LagrangianChoice L;
  L.elems = span_of(H, gens);
  if (static_cast<long>(L.elems.size()) * static_cast<long>(L.elems.size()) != H.sizeN)
    throw std::logic_error("lagrangian: wrong size");
  for (int a : L.elems)
    for (int b : L.elems)
      if (H.pairing(a, b) != 0) throw std::logic_error("lagrangian: not isotropic");
  L.beta_trivial = beta_trivial_on(H, L.elems);
  // chi(a) chi(b) = beta(a,b) chi(a+b): on a generator chi(v)^p = prod_j beta(v, j v)
  L.chi.assign(H.sizeN, -1);
  L.chi[0] = 0;
  std::vector<int> queue{0};
  std::vector<int> gchi;
  for (int v : gens) {
    int sum = 0;
    for (int j = 1, x = v; j < H.p; ++j, x = H.add(x, v)) sum += H.bexp(v, x);
    // need p * c = sum mod e; for odd p, e = p and sum = 0; for p = 2, e = 4 and sum is even
    if (sum % H.p != 0) throw std::logic_error("lagrangian: generator has no twisted character value");
    gchi.push_back(pmod(sum / H.p, H.e));
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int a = queue[q];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int b = H.add(a, gens[i]);
      int v = pmod(L.chi[a] + gchi[i] - H.bexp(a, gens[i]), H.e);
      if (L.chi[b] < 0) {
        L.chi[b] = v;
        queue.push_back(b);
      } else if (L.chi[b] != v) {
        throw std::logic_error("lagrangian: twisted character inconsistent");
      }
    }
  }
  return L;
}

LagrangianChoice block_lagrangian(const HeisenbergData& H) {
  std::vector<int> gens;
  for (int i = 0; i < H.m; ++i)
    for (int j = i + 1; j < H.m; ++j)
      for (int c : H.block_part(i, j))
        if (c != 0) gens.push_back(c);
  for (int i = 0; i < H.m; ++i) {
    auto blk = H.block_part(i, i);
    long half = isqrt_exact(static_cast<long>(blk.size()));
    if (half < 0) throw std::logic_error("block_lagrangian: diagonal block not a square");
    std::vector<int> g;
    if (!lagrangian_search(H, blk, g, static_cast<std::size_t>(half)))
      throw std::logic_error("block_lagrangian: no Lagrangian in a diagonal block");
    gens.insert(gens.end(), g.begin(), g.end());
  }
  // reduce to an independent generating set
  std::vector<int> basis;
  for (int g : gens) {
    auto cur = span_of(H, basis);
    if (!std::binary_search(cur.begin(), cur.end(), g)) basis.push_back(g);
  }
  return lagrangian_from(H, basis);
}

IrrModel irr_model(const HeisenbergData& H, const LagrangianChoice& L) {
  IrrModel I;
  I.H = &H;
  I.L = L;
  I.coset_of.assign(H.sizeN, -1);
  for (int c = 0; c < H.sizeN; ++c) {
    if (I.coset_of[c] >= 0) continue;
    int idx = static_cast<int>(I.reps.size());
    I.reps.push_back(c);
    for (int z : L.elems) I.coset_of[H.add(c, z)] = idx;
  }
  return I;
}

std::vector<long> IrrModel::matrix(const TwElem& x) const {
  const int e = H->e, n = dim();
  std::vector<long> out(static_cast<std::size_t>(n) * n * e, 0);
  for (int h = 0; h < H->sizeN; ++h) {
    bool nz = false;
    for (int c = 0; c < e; ++c) nz |= x[h * e + c] != 0;
    if (!nz) continue;
    for (int j = 0; j < n; ++j) {
      // T_h T_rj e_L = beta(h, rj) T_s e_L, T_s = beta(ri, z0)^-1 T_ri T_z0, T_z0 e_L = chi(z0) e_L
      int rj = reps[j], s = H->add(h, rj);
      int i = coset_of[s], ri = reps[i];
      int z0 = H->add(s, H->neg(ri));
      int t = H->bexp(h, rj) - H->bexp(ri, z0) + L.chi[z0];
      for (int c = 0; c < e; ++c)
        if (x[h * e + c] != 0) out[(static_cast<std::size_t>(i) * n + j) * e + pmod(c + t, e)] += x[h * e + c];
    }
  }
  return out;
}

bool IrrModel::is_full_matrix_algebra() const {
  // irreducible of dimension sqrt|N| (sum of |tr T_h|^2 equals |N|) gives Mat_dim by Burnside
  const int n = dim(), e = H->e;
  if (static_cast<long>(n) * n != H->sizeN) return false;
  CycNum s(0);
  for (int h = 0; h < H->sizeN; ++h) {
    auto m = matrix(tw_basis(*H, h));
    ZZ tr(e, 0);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < e; ++c) tr[c] += m[(static_cast<std::size_t>(i) * n + i) * e + c];
    CycNum t = zz_value(tr);
    s += t * t.conj();
  }
  return s == CycNum(static_cast<long>(H->sizeN));
}

namespace {

using ZMat = std::vector<long>;  // flat (i * n + j) * p + c

ZZ zm_entry(const ZMat& A, int n, int p, int i, int j) {
  auto it = A.begin() + (static_cast<long>(i) * n + j) * p;
  return ZZ(it, it + p);
}

ZMat zm_mul(const ZMat& A, const ZMat& B, int n, int p) {
  ZMat C(A.size(), 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < p; ++a) {
        long x = A[(static_cast<std::size_t>(i) * n + k) * p + a];
        if (x == 0) continue;
        for (int j = 0; j < n; ++j)
          for (int b = 0; b < p; ++b) {
            long y = B[(static_cast<std::size_t>(k) * n + j) * p + b];
            if (y != 0) C[(static_cast<std::size_t>(i) * n + j) * p + (a + b) % p] += x * y;
          }
      }
  return C;
}

ZZ zm_column_entry_apply(const ZMat& A, const std::vector<ZZ>& v, int n, int p, int i) {
  ZZ r(p, 0);
  for (int k = 0; k < n; ++k) {
    ZZ t = zz_mul(zm_entry(A, n, p, i, k), v[k]);
    for (int c = 0; c < p; ++c) r[c] += t[c];
  }
  return r;
}

std::vector<ZZ> zm_apply(const ZMat& A, const std::vector<ZZ>& v, int n, int p) {
  std::vector<ZZ> out;
  for (int i = 0; i < n; ++i) out.push_back(zm_column_entry_apply(A, v, n, p, i));
  return out;
}

std::vector<ZZ> zm_column(const ZMat& A, int n, int p, int j) {
  std::vector<ZZ> v;
  for (int i = 0; i < n; ++i) v.push_back(zm_entry(A, n, p, i, j));
  return v;
}

// x = c y for vectors over Z[zeta_p]; ratio as cyclotomic.
bool zv_ratio(const std::vector<ZZ>& x, const std::vector<ZZ>& y, CycNum* ratio, ZZ* num = nullptr,
              ZZ* den = nullptr) {
  int piv = -1;
  for (std::size_t i = 0; i < y.size() && piv < 0; ++i)
    if (!zz_is_zero(y[i])) piv = static_cast<int>(i);
  if (piv < 0) return false;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!zz_equal(zz_mul(x[i], y[piv]), zz_mul(y[i], x[piv]))) return false;
  if (ratio) *ratio = zz_value(x[piv]) / zz_value(y[piv]);
  if (num) *num = x[piv];
  if (den) *den = y[piv];
  return true;
}

// A * den == B * num entrywise, i.e. A = (num/den) B.
bool zm_scaled_equal(const ZMat& A, const ZMat& B, const ZZ& num, const ZZ& den, int n, int p) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!zz_equal(zz_mul(zm_entry(A, n, p, i, j), den), zz_mul(zm_entry(B, n, p, i, j), num))) return false;
  return true;
}

CycNum zm_det(const ZMat& A, int n, int p) {
  DMat<CycNum> D(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) D(i, j) = zz_value(zm_entry(A, n, p, i, j));
  return determinant(D);
}

long fixed_points(const HeisenbergData& H, const GAction& A, int g) {
  long c = 0;
  for (int h = 0; h < H.sizeN; ++h) c += A(g, h) == h;
  return c;
}

}  // namespace

SReport check_s_elements(const HeisenbergData& H, const GAction& A, const IrrModel& I) {
  SReport r;
  const MatGroup& G = *A.G;
  const int p = H.p, e = H.e, n = I.dim();
  std::vector<TwElem> S;
  std::vector<ZMat> Sm;
  std::vector<CycNum> det;
  r.forms_agree = r.invertible = r.intertwining = r.identity_coefficient = true;
  std::vector<int> basis;
  for (int i = 0, pw = 1; i < H.dimN; ++i, pw *= p) basis.push_back(pw);
  for (int g = 0; g < G.order(); ++g) {
    TwElem s = s_element(H, A, g);
    if (s != s_element_commutator(H, A, g)) r.forms_agree = false;
    if (tw_coeff(H, s, 0) != CycNum(fixed_points(H, A, g))) r.identity_coefficient = false;
    for (int h : basis) {
      TwElem lhs = tw_mul(H, s, tw_basis(H, h)), rhs = tw_mul(H, tw_basis(H, A(g, h)), s);
      if (lhs != rhs) r.intertwining = false;
    }
    Sm.push_back(I.matrix(s));
    det.push_back(zm_det(Sm.back(), n, e));
    if (det.back().is_zero()) r.invertible = false;
    S.push_back(std::move(s));
  }

  r.gamma_scalar = r.gamma_formula_as_printed = r.gamma_formula_corrected = r.det_split = true;
  for (int g1 = 0; g1 < G.order(); ++g1)
    for (int g2 = 0; g2 < G.order(); ++g2) {
      int g12 = G.mul(g1, g2);
      CycNum gamma;
      if (!tw_proportional(H, tw_mul(H, S[g1], S[g2]), S[g12], &gamma)) {
        r.gamma_scalar = false;
        continue;
      }
      ++r.pairs;
      CycNum printed(0), corrected(0);
      for (int a = 0; a < H.sizeN; ++a) {
        int x = H.add(A(g1, a), H.neg(a));
        for (int b = 0; b < H.sizeN; ++b) {
          int y = H.add(A(g2, b), H.neg(b));
          if (H.add(x, y) != 0) continue;
          int t = H.beta(x, H.neg(a)) + H.beta(y, H.neg(b));
          printed += CycNum::zeta(p, pmod(t, p));
          corrected += CycNum::zeta(p, pmod(t + H.beta(x, y), p));
        }
      }
      CycNum cn(fixed_points(H, A, g12));
      if (printed / cn != gamma) r.gamma_formula_as_printed = false;
      if (corrected / cn != gamma) r.gamma_formula_corrected = false;
      if (det[g1] * det[g2] != cyc_pow(gamma, n) * det[g12]) r.det_split = false;
    }
  return r;
}

// ---------------------------------------------------------------- roots

namespace {

long legendre(long a, long q) {
  long r = 1, b = pmod(a, q);
  for (long e = (q - 1) / 2; e > 0; e >>= 1) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
  }
  return r == 1 ? 1 : -1;
}

// sqrt of a positive integer inside a cyclotomic field (Gauss sums).
CycNum cyc_sqrt_int(mpz_class n) {
  std::map<long, int> f;
  for (long q = 2; q * q <= n; ++q)
    while (n % q == 0) {
      n /= q;
      ++f[q];
    }
  if (n > 1) ++f[n.get_si()];
  CycNum out(1);
  for (auto [q, e] : f) {
    for (int i = 0; i < e / 2; ++i) out *= CycNum(q);
    if (e % 2 == 0) continue;
    if (q == 2) {
      out *= CycNum::zeta(8, 1) + CycNum::zeta(8, 7);
      continue;
    }
    CycNum g(0);
    for (long a = 1; a < q; ++a) g += CycNum::zeta(static_cast<int>(q), a) * CycNum(legendre(a, q));
    if (q % 4 == 3) g *= CycNum::zeta(4, 3);  // g^2 = -q
    out *= g;
  }
  return out;
}

bool rat_root(const mpq_class& q, int r, mpq_class* out) {
  mpz_class a = q.get_num(), b = q.get_den(), ra, rb;
  if (mpz_root(ra.get_mpz_t(), a.get_mpz_t(), r) == 0) return false;
  if (mpz_root(rb.get_mpz_t(), b.get_mpz_t(), r) == 0) return false;
  *out = mpq_class(ra, rb);
  out->canonicalize();
  return true;
}

}  // namespace

bool cyc_root(const CycNum& c, int r, CycNum* out) {
  if (c.is_zero() || r < 1) return false;
  int M = c.conductor();
  int L = M % 2 == 0 ? M : 2 * M;
  for (int j = 0; j < L; ++j) {
    CycNum q = c * CycNum::zeta(L, L - j);
    if (!q.is_rational()) continue;
    mpq_class v = q.rational_value();
    CycNum root = CycNum::zeta(L * r, j);
    if (v < 0) {
      v = -v;
      root *= CycNum::zeta(2 * r, 1);
    }
    mpq_class w;
    if (rat_root(v, r, &w)) {
      root *= CycNum(Rat(w));
    } else if (r == 2) {
      // sqrt(a/b) = sqrt(ab) / b
      root *= cyc_sqrt_int(v.get_num() * v.get_den()) / CycNum(Rat(v.get_den()));
    } else {
      return false;
    }
    if (cyc_pow(root, r) != c) return false;
    *out = root;
    return true;
  }
  return false;
}

// ---------------------------------------------------------------- trivialization

std::vector<CycNum> Trivialization::Q(const HeisenbergData& H, int g) const {
  std::vector<CycNum> v(H.sizeN);
  for (int h = 0; h < H.sizeN; ++h) v[h] = lambda[g] * tw_coeff(H, S[g], h);
  return v;
}

namespace {

struct GammaTable {
  // gamma(g, s_j) = num/den for each element g and generator index j
  std::vector<std::vector<ZZ>> num, den;
  std::vector<std::vector<CycNum>> val;
};

CycNum gamma_pair(const std::vector<ZMat>& Sm, const MatGroup& G, int g, int h, int n, int p, ZZ* num = nullptr,
                  ZZ* den = nullptr) {
  auto v = zm_column(Sm[h], n, p, 0);
  auto w = zm_apply(Sm[g], v, n, p);
  auto u = zm_column(Sm[G.mul(g, h)], n, p, 0);
  CycNum c;
  if (!zv_ratio(w, u, &c, num, den)) throw std::logic_error("gamma: S_g S_h not proportional to S_gh");
  return c;
}

// lambda on the closure of the first i generators, from generator values; false on inconsistency.
bool propagate(const MatGroup& G, const std::vector<int>& gens, int i, const std::vector<CycNum>& lam_gen,
               const GammaTable& T, CycNum one, std::vector<CycNum>& lam, std::vector<char>& set) {
  lam.assign(G.order(), CycNum(0));
  set.assign(G.order(), 0);
  lam[G.identity()] = one;
  set[G.identity()] = 1;
  std::vector<int> queue{G.identity()};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int g = queue[q];
    for (int j = 0; j < i; ++j) {
      int gs = G.mul(g, gens[j]);
      CycNum v = lam[g] * lam_gen[j] * T.val[g][j];
      if (!set[gs]) {
        lam[gs] = v;
        set[gs] = 1;
        queue.push_back(gs);
      } else if (lam[gs] != v) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

Trivialization trivialize(const HeisenbergData& H, const GAction& A, const IrrModel& I,
                          const std::function<bool(const RMat&)>& pred_P) {
  Trivialization t;
  t.G = A.G;
  const MatGroup& G = *A.G;
  const int p = H.e, n = I.dim();  // p is the coefficient root order here
  std::vector<ZMat> Sm;
  for (int g = 0; g < G.order(); ++g) {
    t.S.push_back(s_element(H, A, g));
    Sm.push_back(I.matrix(t.S.back()));
  }
  const std::vector<int>& gens = G.generators();
  const int r = static_cast<int>(gens.size());
  GammaTable T;
  T.num.resize(G.order());
  T.den.resize(G.order());
  T.val.resize(G.order());
  for (int g = 0; g < G.order(); ++g)
    for (int s : gens) {
      ZZ a, b;
      T.val[g].push_back(gamma_pair(Sm, G, g, s, n, p, &a, &b));
      T.num[g].push_back(a);
      T.den[g].push_back(b);
    }
  CycNum one = CycNum(1) / CycNum(static_cast<long>(H.sizeN));

  // (b) eigenvalue scalars on the P-preimage: S_g fixes the line of e_L
  std::vector<int> P;
  for (int g = 0; g < G.order(); ++g)
    if (pred_P(G.element(g))) P.push_back(g);
  bool stable = true;
  for (int g : P)
    for (int z : I.L.elems)
      stable = stable && I.L.chi[A(g, z)] == I.L.chi[z];
  std::vector<CycNum> lamP(G.order());
  t.lagrangian_p_stable = stable;
  t.p_sylow_eigen = stable;
  for (int g : P) {
    auto col = zm_column(Sm[g], n, p, 0);
    for (int i = 1; i < n; ++i) t.p_sylow_eigen = t.p_sylow_eigen && zz_is_zero(col[i]);
    if (!t.p_sylow_eigen) break;
    lamP[g] = CycNum(1) / zz_value(col[0]);
  }
  if (t.p_sylow_eigen) {
    // gamma is a cocycle, so checking against generators of P suffices
    std::vector<int> pgens;
    std::vector<char> in(G.order(), 0);
    in[G.identity()] = 1;
    std::vector<int> closure{G.identity()};
    for (int g : P) {
      if (in[g]) continue;
      pgens.push_back(g);
      for (std::size_t q = 0; q < closure.size(); ++q)
        for (int s : pgens) {
          int x = G.mul(closure[q], s);
          if (!in[x]) {
            in[x] = 1;
            closure.push_back(x);
          }
        }
    }
    for (int g : P)
      for (int s : pgens)
        if (lamP[g] * lamP[s] * gamma_pair(Sm, G, g, s, n, p) != lamP[G.mul(g, s)]) t.p_sylow_eigen = false;
  }

  if (t.p_sylow_eigen && static_cast<int>(P.size()) == G.order()) {
    t.method = "lagrangian";
    t.lambda = lamP;
  } else {
    // (c) generator roots, searched over the torsor of root choices with backtracking
    t.method = "torsor";
    std::vector<std::vector<CycNum>> cand(r);
    for (int j = 0; j < r; ++j) {
      int s = gens[j], o = G.elem_order(s);
      CycNum c(static_cast<long>(H.sizeN));  // S_s^o = c T_1
      for (int i = 1, x = s; i < o; ++i, x = G.mul(x, s)) c *= T.val[x][j];
      CycNum root;
      if (!cyc_root(CycNum(1) / c, o, &root))
        throw std::runtime_error("trivialize: no cyclotomic root for a generator scalar");
      for (int u = 0; u < o; ++u) cand[j].push_back(root * CycNum::zeta(o, u));
    }
    std::vector<CycNum> lam_gen(r), lam;
    std::vector<char> set;
    std::function<bool(int)> search = [&](int j) -> bool {
      if (j == r) return true;
      for (const CycNum& c : cand[j]) {
        lam_gen[j] = c;
        ++t.candidates_tried;
        if (propagate(G, gens, j + 1, lam_gen, T, one, lam, set) && search(j + 1)) return true;
      }
      return false;
    };
    if (!search(0)) throw std::runtime_error("trivialize: no trivialization found (counterexample)");
    propagate(G, gens, r, lam_gen, T, one, lam, set);
    t.lambda = lam;
  }

  // exact verification: Q_g Q_s = Q_gs for every g and generator s, and intertwining
  t.homomorphism = true;
  for (int g = 0; g < G.order() && t.homomorphism; ++g)
    for (int j = 0; j < r; ++j) {
      int s = gens[j];
      if (!zm_scaled_equal(zm_mul(Sm[g], Sm[s], n, p), Sm[G.mul(g, s)], T.num[g][j], T.den[g][j], n, p) ||
          t.lambda[g] * t.lambda[s] * T.val[g][j] != t.lambda[G.mul(g, s)]) {
        t.homomorphism = false;
        break;
      }
    }
  if (t.lambda[G.identity()] * CycNum(static_cast<long>(H.sizeN)) != CycNum(1)) t.homomorphism = false;
  t.intertwining = true;
  for (int g = 0; g < G.order() && t.intertwining; ++g)
    for (int i = 0, pw = 1; i < H.dimN; ++i, pw *= H.p)
      if (tw_mul(H, t.S[g], tw_basis(H, pw)) != tw_mul(H, tw_basis(H, A(g, pw)), t.S[g])) t.intertwining = false;
  return t;
}

// ---------------------------------------------------------------- coherent family

namespace {

RMat block_diag_of(const RingPtr& R, const RMat& a, const RMat& b) {
  const int m1 = a.n();
  RMat g(R, 2 * m1, 2 * m1);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m1; ++j) {
      g(i, j) = a(i, j);
      g(m1 + i, m1 + j) = b(i, j);
    }
  return g;
}

RMat sub_block(const RMat& g, int r0, int c0, int m1) {
  RMat s(g.ring, m1, m1);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m1; ++j) s(i, j) = g(r0 + i, c0 + j);
  return s;
}

// Codes of N(M1) placed in diagonal block i of N(M1 + M1).
std::vector<int> embed_codes(const HeisenbergData& H1, const HeisenbergData& H, int i) {
  const int n1 = H1.m * H1.d, off = i * n1;
  std::vector<int> out(H1.sizeN);
  for (int c = 0; c < H1.sizeN; ++c) {
    RMat z(H.zbar[0].ring, H.m * H.d, H.m * H.d);
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n1; ++b) z(off + a, off + b) = H1.zbar[c](a, b);
    out[c] = H.code_of(z);
    if (out[c] < 0) throw std::logic_error("coherent_pair: diagonal block not in Z-bar");
  }
  return out;
}

TwElem embed_tw(const HeisenbergData& H, const std::vector<int>& codes, const TwElem& x) {
  TwElem y(static_cast<std::size_t>(H.sizeN) * H.e, 0);
  for (std::size_t h = 0; h < codes.size(); ++h)
    for (int j = 0; j < H.e; ++j) y[codes[h] * H.e + j] += x[h * H.e + j];
  return y;
}

TwElem block_sum_elem(const HeisenbergData& H, int i, int j) {
  TwElem y(static_cast<std::size_t>(H.sizeN) * H.e, 0);
  for (int c : H.block_part(i, j)) y[c * H.e] += 1;
  return y;
}

GroupPtr borel(const HeisenbergData& H1, const GroupPtr& G1, bool upper, const std::string& name) {
  const RingPtr& R = H1.az1.galois;
  const int m1 = H1.m;
  RMat one = RMat::identity(R, m1);
  std::vector<RMat> gens;
  for (int g : G1->generators()) {
    gens.push_back(block_diag_of(R, G1->element(g), one));
    gens.push_back(block_diag_of(R, one, G1->element(g)));
  }
  // unipotent radical: X with X M1 = M1 X at level k
  RMat Mk = H1.M;
  long total = 1;
  for (int i = 0; i < m1 * m1; ++i) total *= R->size();
  for (long x = 1; x < total; ++x) {
    RMat X = RMat::from_key(R, m1, m1, static_cast<uint64_t>(x));
    RMat Xk = X.reduce(H1.k);
    if (Xk * Mk != Mk * Xk) continue;
    RMat u = RMat::identity(R, 2 * m1);
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < m1; ++j) (upper ? u(i, m1 + j) : u(m1 + i, j)) = X(i, j);
    gens.push_back(u);
  }
  GroupPtr B = MatGroup::generated_by(R, 2 * m1, gens, name);
  return MatGroup::from_keys(R, 2 * m1, B->keys(), name);  // rebuilds a short generating set
}

bool is_unitriangular_mod_p(const RMat& g, bool upper) {
  RMat b = g.reduce(1);
  for (int i = 0; i < b.n(); ++i)
    for (int j = 0; j < b.n(); ++j) {
      int want = i == j ? 1 : 0;
      bool free = upper ? j > i : j < i;
      if (!free && b(i, j) != want) return false;
    }
  return true;
}

}  // namespace

CoherentReport coherent_pair(const RMat& M1, int ell) {
  CoherentReport rep;
  HeisenbergData H1 = heisenberg(M1, ell);
  HeisenbergData H = heisenberg(block_sum(M1, M1), ell);
  GroupPtr G1 = odd_stabilizer(H1);
  GAction A1 = g_action(H1, G1);
  const RingPtr& R = H1.az1.galois;
  const int m1 = H1.m;
  RMat one = RMat::identity(R, m1);
  rep.levi_order = static_cast<long>(G1->order()) * G1->order();

  GroupPtr B = borel(H1, G1, true, "B");
  rep.borel_order = B->order();
  GAction A = g_action(H, B);
  IrrModel I = irr_model(H, block_lagrangian(H));
  Trivialization t = trivialize(H, A, I, [](const RMat& g) { return is_unitriangular_mod_p(g, true); });
  rep.big_trivialized = t.homomorphism && t.intertwining;
  rep.method = t.method;

  auto c1 = embed_codes(H1, H, 0), c2 = embed_codes(H1, H, 1);
  for (int a = 0; a < H1.sizeN; ++a)
    for (int b = 0; b < H1.sizeN; ++b)
      if (H.beta(c1[a], c1[b]) != H1.beta(a, b) || H.beta(c2[a], c2[b]) != H1.beta(a, b))
        throw std::logic_error("coherent_pair: beta does not restrict blockwise");
  TwElem e12 = block_sum_elem(H, 0, 1), e21 = block_sum_elem(H, 1, 0);
  TwElem E = tw_mul(H, e12, e21);
  std::vector<TwElem> S1;
  for (int g = 0; g < G1->order(); ++g) S1.push_back(s_element(H1, A1, g));

  auto diag = [&](int g1, int g2) {
    RMat a = g1 < 0 ? one : G1->element(g1), b = g2 < 0 ? one : G1->element(g2);
    return B->find(block_diag_of(R, a, b));
  };
  // lambda(g) c where Q^M_g E = lambda(g) c emb(S1) E
  auto component = [&](const std::vector<CycNum>& lam, int g, const TwElem& y, CycNum* out) {
    CycNum c;
    if (!tw_proportional(H, tw_mul(H, t.S[g], E), tw_mul(H, y, E), &c)) return false;
    *out = lam[g] * c;
    return true;
  };
  auto derive = [&](const std::vector<CycNum>& lam, std::vector<CycNum>& l1, std::vector<CycNum>& l2) {
    l1.assign(G1->order(), CycNum(0));
    l2.assign(G1->order(), CycNum(0));
    for (int g = 0; g < G1->order(); ++g)
      if (!component(lam, diag(g, -1), embed_tw(H, c1, S1[g]), &l1[g]) ||
          !component(lam, diag(-1, g), embed_tw(H, c2, S1[g]), &l2[g]))
        return false;
    for (int g1 = 0; g1 < G1->order(); ++g1)
      for (int g2 = 0; g2 < G1->order(); ++g2) {
        CycNum c;
        TwElem y = tw_mul(H, embed_tw(H, c1, S1[g1]), embed_tw(H, c2, S1[g2]));
        if (!component(lam, diag(g1, g2), y, &c) || c != l1[g1] * l2[g2]) return false;
      }
    return true;
  };
  auto multiplicative = [&](const std::vector<CycNum>& l) {
    if (l[G1->identity()] * CycNum(static_cast<long>(H1.sizeN)) != CycNum(1)) return false;
    for (int a = 0; a < G1->order(); ++a)
      for (int b = 0; b < G1->order(); ++b) {
        CycNum gam;
        int ab = G1->mul(a, b);
        if (!tw_proportional(H1, tw_mul(H1, S1[a], S1[b]), S1[ab], &gam)) return false;
        if (l[a] * l[b] * gam != l[ab]) return false;
      }
    return true;
  };

  std::vector<CycNum> l1, l2;
  rep.components_derived = rep.big_trivialized && derive(t.lambda, l1, l2);
  if (!rep.components_derived) return rep;
  rep.components_multiplicative = multiplicative(l1) && multiplicative(l2);

  // Weyl symmetrization: twist by chi = lambda2 / lambda1 on the (2,2) Levi block
  std::vector<CycNum> chi(G1->order());
  bool is_char = true;
  for (int g = 0; g < G1->order(); ++g) chi[g] = l2[g] / l1[g];
  for (int a = 0; a < G1->order() && is_char; ++a)
    for (int b = 0; b < G1->order(); ++b)
      if (chi[a] * chi[b] != chi[G1->mul(a, b)]) {
        is_char = false;
        break;
      }
  if (is_char) {
    for (int g = 0; g < B->order(); ++g) {
      int g22 = G1->find(sub_block(B->element(g), m1, m1, m1));
      t.lambda[g] = t.lambda[g] / chi[g22];
    }
    std::vector<CycNum> w1, w2;
    rep.weyl_symmetric = derive(t.lambda, w1, w2) && w1 == w2 && w1 == l1;
    if (rep.weyl_symmetric) rep.method += " + weyl twist";
  }

  // Q_u e12 = e12 on U'
  rep.reducing_u = true;
  for (int g = 0; g < B->order() && rep.reducing_u; ++g) {
    RMat x = B->element(g);
    if (sub_block(x, 0, 0, m1) != one || sub_block(x, m1, m1, m1) != one) continue;
    CycNum c;
    rep.reducing_u = tw_proportional(H, tw_mul(H, t.S[g], e12), e12, &c) && t.lambda[g] * c == CycNum(1);
  }

  GroupPtr Bl = borel(H1, G1, false, "B-");
  GAction Al = g_action(H, Bl);
  Trivialization tl = trivialize(H, Al, I, [](const RMat& g) { return is_unitriangular_mod_p(g, true); });
  rep.reducing_v = tl.homomorphism && tl.intertwining;
  for (int g = 0; g < Bl->order() && rep.reducing_v; ++g) {
    RMat x = Bl->element(g);
    if (sub_block(x, 0, 0, m1) != one || sub_block(x, m1, m1, m1) != one) continue;
    CycNum c;
    rep.reducing_v = tw_proportional(H, tw_mul(H, tl.S[g], e21), e21, &c) && tl.lambda[g] * c == CycNum(1);
  }
  return rep;
}

}  // namespace grlab
