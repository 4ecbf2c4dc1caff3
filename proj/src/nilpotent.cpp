#include "grlab/nilpotent.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "grlab/grfunctors.hpp"

namespace grlab {

namespace {

// Residue field data: q = p^d with p prime.
std::pair<int, int> prime_power(int q) {
  for (int p = 2; p <= q; ++p) {
    if (q % p) continue;
    int d = 0, x = q;
    while (x % p == 0) x /= p, ++d;
    if (x != 1) break;
    return {p, d};
  }
  throw std::invalid_argument("q must be a prime power");
}

// Level-one contexts shared by every C_{r,n} over the same field, so that labels in Irr(GL_m(k))
// agree with the coproduct.
const GRContext& level_one(int q) {
  static std::map<int, std::unique_ptr<GRContext>> cache;
  auto it = cache.find(q);
  if (it == cache.end()) {
    auto [p, d] = prime_power(q);
    it = cache.emplace(q, std::make_unique<GRContext>(make_ring(p, 1, d), 6)).first;
  }
  return *it->second;
}

CycNum psi_add(const ChainRing& k, int a) { return CycNum::zeta(k.p(), k.trace(a)); }

int dot(const ChainRing& k, const std::vector<int>& x, const std::vector<int>& y) {
  int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s = k.add(s, k.mul(x[i], y[i]));
  return s;
}

std::vector<int> unit_vec(int J, int i, int val = 1) {
  std::vector<int> e(J, 0);
  if (i < J) e[i] = val;
  return e;
}

std::vector<int> digits(int v, int q, int J) {
  std::vector<int> d(J);
  for (int i = 0; i < J; ++i) d[i] = v % q, v /= q;
  return d;
}

int undigits(const std::vector<int>& d, int q) {
  int v = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) v = v * q + d[i];
  return v;
}

// Coordinates read from a raw matrix in C_{r,n}.
std::vector<int> b_of(const RMat& M, int r, int J) {
  std::vector<int> b(J);
  for (int i = 0; i < J; ++i) b[i] = M(0, r + i);
  return b;
}

std::vector<int> c_of(const RMat& M, int r, int J) {
  std::vector<int> c(J);
  for (int i = 0; i < J; ++i) c[i] = M(r + i, r - 1);
  return c;
}

// lambda_(f,v)(h) = f.c + v.b as an element of k
int lambda_val(const ChainRing& k, const RMat& h, int r, int J, const std::vector<int>& f,
               const std::vector<int>& v) {
  return k.add(dot(k, f, c_of(h, r, J)), dot(k, v, b_of(h, r, J)));
}

RMat levi_part(const RMat& g, int r, int J) {
  return block_sum(sub_block(g, 0, 0, r, r), sub_block(g, r, r, J, J));
}

// g' = a0^-1 D
RMat g_prime(const RMat& g, int r, int J) {
  return sub_block(g, r, r, J, J).scaled(g.ring->inv(g(0, 0)));
}

// Shape predicates on GL_J for the orbit representatives.
bool row_is_unit(const RMat& g, int row) {
  for (int j = 0; j < g.n(); ++j)
    if (g(row, j) != (j == row ? 1 : 0)) return false;
  return true;
}

bool col_is_unit(const RMat& g, int col) {
  for (int i = 0; i < g.n(); ++i)
    if (g(i, col) != (i == col ? 1 : 0)) return false;
  return true;
}

// Basis of V and V* as group elements of C_{r,n}.
std::vector<RMat> heis_basis(const CrnGroup& C) {
  std::vector<RMat> out;
  for (int i = 0; i < C.J; ++i) {
    RMat u = RMat::identity(C.k, C.n);
    u(0, C.r + i) = 1;
    out.push_back(u);
    RMat w = RMat::identity(C.k, C.n);
    w(C.r + i, C.r - 1) = 1;
    out.push_back(w);
  }
  return out;
}

bool stabilizes(const CrnGroup& C, const RMat& g, const std::vector<RMat>& basis, const std::vector<int>& f,
                const std::vector<int>& v) {
  RMat gi = mat_inverse(g);
  for (const RMat& h : basis)
    if (lambda_val(*C.k, g * h * gi, C.r, C.J, f, v) != lambda_val(*C.k, h, C.r, C.J, f, v)) return false;
  return true;
}

CycNum gl_char(const GRContext& ctx, int delta, int Y, const RMat& B) {
  if (delta == 0) return CycNum(1);
  return ctx.table(delta)->irr[Y].at(ctx.group(delta)->find(B));
}

int gl_irr_count(const GRContext& ctx, int delta) { return delta == 0 ? 1 : ctx.num_irr(delta); }

struct ATable {
  GroupPtr A;
  TablePtr T;
};

ATable a_table(const CrnGroup& C) {
  ATable t;
  t.A = C.A.as_group("A");
  t.T = character_table(t.A);
  return t;
}

CycNum psi_at(const CrnGroup& C, const ATable& t, int psi, const RMat& g) {
  RMat pad = RMat::identity(C.k, C.n);
  for (int i = 0; i < C.r; ++i)
    for (int j = 0; j < C.r; ++j) pad(i, j) = g(i, j);
  return t.T->irr[psi].at(t.A->find(pad));
}

}  // namespace

// ------------------------------------------------------------------ C_{r,n}

int CrnGroup::a0(int g) const { return G->element(g)(0, 0); }
std::vector<int> CrnGroup::b(int g) const { return b_of(G->element(g), r, J); }
std::vector<int> CrnGroup::c(int g) const { return c_of(G->element(g), r, J); }
int CrnGroup::z(int g) const { return G->element(g)(0, r - 1); }
RMat CrnGroup::D(int g) const { return sub_block(G->element(g), r, r, J, J); }
RMat CrnGroup::a_block(int g) const { return sub_block(G->element(g), 0, 0, r, r); }

CrnGroup build_crn(int r, int n, int q, long cap) {
  if (r < 2 || n < r) throw std::invalid_argument("build_crn: need n >= r >= 2");
  auto [p, d] = prime_power(q);
  CrnGroup C;
  C.r = r, C.n = n, C.q = q, C.J = n - r;
  C.k = make_ring(p, 1, d);
  const int J = C.J;
  C.eta = RMat(C.k, n, n);
  for (int i = 0; i + 1 < r; ++i) C.eta(i, i + 1) = 1;

  long glJ = J == 0 ? 1 : gl_order_formula(q, 1, J);
  long qr = 1;
  for (int i = 0; i < r - 1 + 2 * J; ++i) qr *= q;
  C.predicted_order = (q - 1) * qr * glJ;
  if (C.predicted_order > cap) throw std::length_error("build_crn: group exceeds the enumeration cap");

  std::vector<RMat> Ds;
  if (J == 0) {
    Ds.push_back(RMat(C.k, 0, 0));
  } else {
    GroupPtr GL = level_one(q).group(J);
    for (int g = 0; g < GL->order(); ++g) Ds.push_back(GL->element(g));
  }
  long nfree = 1;
  for (int i = 0; i < r - 2 + 2 * J; ++i) nfree *= q;  // a_2..a_{r-1}, b, c
  std::vector<uint64_t> keys;
  keys.reserve(C.predicted_order);
  for (int a0 = 1; a0 < q; ++a0)
    for (int a1 = 0; a1 < q; ++a1)
      for (long rest = 0; rest < nfree; ++rest) {
        std::vector<int> x = digits(static_cast<int>(rest), q, r - 2 + 2 * J);
        std::vector<int> a(r);
        a[0] = a0, a[1] = a1;
        for (int i = 2; i < r; ++i) a[i] = x[i - 2];
        for (const RMat& Dm : Ds) {
          RMat M(C.k, n, n);
          for (int i = 0; i < r; ++i)
            for (int j = i; j < r; ++j) M(i, j) = a[j - i];
          for (int i = 0; i < J; ++i) {
            M(0, r + i) = x[r - 2 + i];
            M(r + i, r - 1) = x[r - 2 + J + i];
          }
          for (int i = 0; i < J; ++i)
            for (int j = 0; j < J; ++j) M(r + i, r + j) = Dm(i, j);
          keys.push_back(M.key());
        }
      }
  C.G = MatGroup::from_keys(C.k, n, keys, "C_{" + std::to_string(r) + "," + std::to_string(n) + "}");
  C.order_matches = C.G->order() == C.predicted_order;

  auto is_levi = [r, J](const RMat& M) {
    for (int i = 0; i < J; ++i)
      if (M(0, r + i) != 0 || M(r + i, r - 1) != 0) return false;
    return true;
  };
  auto d_is_one = [r, J](const RMat& M) {
    for (int i = 0; i < J; ++i)
      for (int j = 0; j < J; ++j)
        if (M(r + i, r + j) != (i == j ? 1 : 0)) return false;
    return true;
  };
  auto a_is_one = [r](const RMat& M, bool with_top) {
    if (M(0, 0) != 1) return false;
    for (int j = 1; j < r - 1; ++j)
      if (M(0, j) != 0) return false;
    return !with_top || M(0, r - 1) == 0;
  };
  C.H = subgroup_by_predicate(C.G, SubgroupKind::Other,
                              [=](const RMat& M) { return a_is_one(M, false) && d_is_one(M); });
  C.center = subgroup_by_predicate(C.G, SubgroupKind::Other,
                                   [=](const RMat& M) { return a_is_one(M, false) && d_is_one(M) && is_levi(M); });
  C.V = subgroup_by_predicate(C.G, SubgroupKind::Other, [=](const RMat& M) {
    if (!a_is_one(M, true) || !d_is_one(M)) return false;
    for (int i = 0; i < J; ++i)
      if (M(r + i, r - 1) != 0) return false;
    return true;
  });
  C.Vstar = subgroup_by_predicate(C.G, SubgroupKind::Other, [=](const RMat& M) {
    if (!a_is_one(M, true) || !d_is_one(M)) return false;
    for (int i = 0; i < J; ++i)
      if (M(0, r + i) != 0) return false;
    return true;
  });
  C.levi = subgroup_by_predicate(C.G, SubgroupKind::Levi, is_levi);
  C.A = subgroup_by_predicate(C.G, SubgroupKind::Other, [=](const RMat& M) { return is_levi(M) && d_is_one(M); });

  if (gl_order_formula(q, 1, n) <= 60000) {
    SubgroupHandle S = stabilizer(level_one(q).group(n), C.eta);
    std::vector<uint64_t> a, b = C.G->keys();
    for (int g : S.elems) a.push_back(S.parent->key(g));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    C.matches_centralizer = a == b;
  }

  const MatGroup& G = *C.G;
  std::set<int> prods;
  long total = 0;
  for (int w : C.Vstar.elems)
    for (int l : C.levi.elems)
      for (int v : C.V.elems) {
        prods.insert(G.mul(G.mul(w, l), v));
        ++total;
      }
  C.iwahori_bijective = total == G.order() && static_cast<long>(prods.size()) == total;

  C.h_normal = true;
  for (int s : G.generators())
    for (int h : C.H.elems)
      if (!C.H.contains(G.conj(s, h))) C.h_normal = false;
  C.quotient_order = G.order() / C.H.order();
  return C;
}

// ------------------------------------------------------------------ Heisenberg irreducibles

HeisReport heis_irreps(const CrnGroup& C) {
  HeisReport rep;
  const ChainRing& k = *C.k;
  const int q = C.q, J = C.J, r = C.r;
  rep.H = C.H.as_group("H");
  const MatGroup& H = *rep.H;
  long qJ = 1;
  for (int i = 0; i < J; ++i) qJ *= q;

  rep.models_hom = true;
  for (int x = 1; x < q; ++x) {
    ExplicitRep W;
    W.group = rep.H;
    W.dim = static_cast<int>(qJ);
    for (int g = 0; g < H.order(); ++g) {
      RMat h = H.element(g);
      std::vector<int> b = b_of(h, r, J), c = c_of(h, r, J);
      int a = k.sub(h(0, r - 1), dot(k, b, c));
      DMat<CycNum> m(W.dim, W.dim);
      for (int vi = 0; vi < W.dim; ++vi) {
        std::vector<int> v = digits(vi, q, J), vb(J);
        for (int i = 0; i < J; ++i) vb[i] = k.add(v[i], b[i]);
        int e = k.sub(k.mul(x, a), k.mul(x, dot(k, v, c)));
        m.a[static_cast<std::size_t>(undigits(vb, q)) * W.dim + vi] = psi_add(k, e);
      }
      W.mats.push_back(std::move(m));
    }
    if (!W.is_homomorphism()) rep.models_hom = false;
    HeisIrrep I;
    I.x = x;
    I.chi = W.character();
    rep.irreps.push_back(std::move(I));
  }
  rep.big = q - 1;

  for (long fv = 0; fv < qJ * qJ; ++fv) {
    std::vector<int> d = digits(static_cast<int>(fv), q, 2 * J);
    HeisIrrep I;
    I.f.assign(d.begin(), d.begin() + J);
    I.v.assign(d.begin() + J, d.end());
    std::vector<CycNum> vals(H.num_classes());
    for (int cl = 0; cl < H.num_classes(); ++cl)
      vals[cl] = psi_add(k, lambda_val(k, H.element(H.class_rep(cl)), r, J, I.f, I.v));
    I.chi = Character(rep.H, std::move(vals));
    rep.irreps.push_back(std::move(I));
  }
  rep.small = qJ * qJ;

  rep.sum_squares = 0;
  for (const auto& I : rep.irreps) {
    long d = I.chi.degree().rational_integer_value();
    rep.sum_squares += d * d;
  }
  rep.central_characters = true;
  for (const auto& I : rep.irreps) {
    if (I.x == 0) continue;
    for (int zg : C.center.elems) {
      RMat z = C.G->element(zg);
      CycNum want = CycNum(qJ) * psi_add(k, k.mul(I.x, z(0, r - 1)));
      if (I.chi.at(H.find(z)) != want) rep.central_characters = false;
    }
  }
  rep.orthonormal = true;
  for (std::size_t i = 0; i < rep.irreps.size(); ++i)
    for (std::size_t j = i; j < rep.irreps.size(); ++j)
      if (inner_product(rep.irreps[i].chi, rep.irreps[j].chi) != (i == j ? 1 : 0)) rep.orthonormal = false;
  return rep;
}

// ------------------------------------------------------------------ orbits

OrbitReport crn_orbits(const CrnGroup& C) {
  OrbitReport rep;
  const int J = C.J, q = C.q;
  const MatGroup& G = *C.G;
  std::vector<RMat> basis = heis_basis(C);
  long qJ = 1, ar1 = q - 1;
  for (int i = 0; i < J; ++i) qJ *= q;
  for (int i = 0; i < C.r - 2; ++i) ar1 *= q;

  struct Rep {
    std::string type;
    std::vector<int> f, v;
    std::function<bool(const RMat&)> shape;
  };
  std::vector<Rep> reps;
  reps.push_back({"1", std::vector<int>(J, 0), std::vector<int>(J, 0), [](const RMat&) { return true; }});
  if (J >= 1) {
    for (int y = 1; y < q; ++y)
      reps.push_back({"3", unit_vec(J, 0), unit_vec(J, 0, y),
                      [](const RMat& g) { return row_is_unit(g, 0) && col_is_unit(g, 0); }});
    reps.push_back({"4a", unit_vec(J, 0), std::vector<int>(J, 0), [](const RMat& g) { return row_is_unit(g, 0); }});
    reps.push_back({"4b", std::vector<int>(J, 0), unit_vec(J, 0), [](const RMat& g) { return col_is_unit(g, 0); }});
  }
  if (J >= 2)
    reps.push_back({"5", unit_vec(J, 1), unit_vec(J, 0),
                    [](const RMat& g) { return col_is_unit(g, 0) && row_is_unit(g, 1); }});

  std::vector<RMat> glJ;
  if (J >= 1) {
    GroupPtr GL = level_one(q).group(J);
    for (int g = 0; g < GL->order(); ++g) glJ.push_back(GL->element(g));
  } else {
    glJ.push_back(RMat(C.k, 0, 0));
  }

  rep.all_match = true;
  long total = 0;
  for (const Rep& R : reps) {
    OrbitCheck o;
    o.type = R.type;
    o.f = R.f, o.v = R.v;
    std::set<uint64_t> comp, pred;
    for (int g = 0; g < G.order(); ++g) {
      RMat M = G.element(g);
      if (!stabilizes(C, M, basis, R.f, R.v)) continue;
      ++o.stabilizer;
      comp.insert(g_prime(M, C.r, J).key());
    }
    for (const RMat& g : glJ)
      if (R.shape(g)) pred.insert(g.key());
    o.predicted = static_cast<long>(C.H.order()) * ar1 * static_cast<long>(pred.size());
    o.shape_matches = comp == pred;
    o.orbit = G.order() / o.stabilizer;
    if (!o.shape_matches || o.predicted != o.stabilizer) rep.all_match = false;
    total += o.orbit;
    rep.orbits.push_back(std::move(o));
  }
  rep.partition = total == qJ * qJ;
  return rep;
}


// ------------------------------------------------------------------ labels

namespace {

using Term = BranchingLabel::Terminal;

int restriction_of(const CrnGroup& C, const ATable& t, int psi) {
  const ChainRing& k = *C.k;
  for (int x = 0; x < C.q; ++x) {
    bool ok = true;
    for (int a = 0; a < C.q && ok; ++a) {
      RMat e = RMat::identity(C.k, C.r);
      e(0, C.r - 1) = a;
      ok = psi_at(C, t, psi, e) == psi_add(k, k.mul(x, a));
    }
    if (ok) return x;
  }
  throw std::logic_error("psi is not a multiple of phi on A^{r-1}");
}

// Matrix with the V and V* coordinates cleared: the Levi part of g.
RMat levi_of(const RMat& g, int r, int J) {
  RMat l = g;
  for (int i = 0; i < J; ++i) l(0, r + i) = 0, l(r + i, r - 1) = 0;
  return l;
}

}  // namespace

std::string BranchingLabel::str() const {
  std::string out = "c^" + std::to_string(t);
  switch (term) {
    case Term::OneH: out += " 1_H"; break;
    case Term::X: out += " X(" + std::to_string(param) + ")"; break;
    case Term::Y: out += " Y(" + std::to_string(param) + ")"; break;
    case Term::D: out += " d^" + std::to_string(s) + (param ? " (0,v)" : " (f,0)"); break;
  }
  return out + " psi" + std::to_string(psi) + " GL_" + std::to_string(delta) + "[" + std::to_string(Y) + "]";
}

int psi_restriction(const CrnGroup& C, int psi) { return restriction_of(C, a_table(C), psi); }

Classification classify_crn(const CrnGroup& C) {
  Classification out;
  const GRContext& ctx = level_one(C.q);
  ATable t = a_table(C);
  std::vector<std::vector<int>> byx(C.q);
  for (int psi = 0; psi < t.T->size(); ++psi) byx[restriction_of(C, t, psi)].push_back(psi);
  const int J = C.J;
  auto push = [&](int tt, int s, Term term, int param, int x, int delta) {
    for (int psi : byx[x])
      for (int Y = 0; Y < gl_irr_count(ctx, delta); ++Y) {
        BranchingLabel L;
        L.t = tt, L.s = s, L.term = term, L.param = param, L.psi = psi, L.delta = delta, L.Y = Y;
        out.labels.push_back(L);
      }
  };
  for (int tt = 0; 2 * tt <= J; ++tt) {
    push(tt, 0, Term::OneH, 0, 0, J - 2 * tt);
    for (int x = 1; x < C.q; ++x) push(tt, 0, Term::X, x, x, J - 2 * tt);
    if (2 * tt + 1 <= J)
      for (int y = 1; y < C.q; ++y) push(tt, 0, Term::Y, y, 0, J - 2 * tt - 1);
    for (int s = 1; 2 * tt + s <= J; ++s)
      for (int side = 0; side < 2; ++side) push(tt, s, Term::D, side, 0, J - 2 * tt - s);
  }
  out.irr_count = C.G->num_classes();
  out.counts_match = static_cast<long>(out.labels.size()) == out.irr_count;
  out.orbits = crn_orbits(C);

  // Lie algebra of C: Toeplitz powers, the V and V* entries, the gl_J block
  std::vector<RMat> lie;
  const int r = C.r, n = C.n;
  for (int j = 0; j < r; ++j) {
    RMat T(C.k, n, n);
    for (int i = 0; i + j < r; ++i) T(i, i + j) = 1;
    lie.push_back(T);
  }
  for (int i = 0; i < J; ++i) {
    RMat u(C.k, n, n), w(C.k, n, n);
    u(0, r + i) = 1;
    w(r + i, r - 1) = 1;
    lie.push_back(u);
    lie.push_back(w);
    for (int j = 0; j < J; ++j) {
      RMat e(C.k, n, n);
      e(r + i, r + j) = 1;
      lie.push_back(e);
    }
  }
  out.beta_trivial = true;
  for (const RMat& c : lie)
    for (const RMat& d : lie) {
      if (mat_trace(C.eta * c * d) != 0) out.beta_trivial = false;
      ++out.beta_pairs;
    }
  return out;
}

// ------------------------------------------------------------------ rho(gamma, psi, Y)

bool rho_supported(const BranchingLabel& L) {
  if (L.t != 0) return false;
  return L.term != Term::D || L.s == 1;
}

Character rho_construct(const CrnGroup& C, const BranchingLabel& L) {
  if (!rho_supported(L)) throw std::invalid_argument("rho_construct: label outside the constructed types");
  const GRContext& ctx = level_one(C.q);
  const ChainRing& k = *C.k;
  const MatGroup& G = *C.G;
  const int r = C.r, J = C.J, q = C.q;
  ATable t = a_table(C);
  const int x = restriction_of(C, t, L.psi);
  const bool top = L.term == Term::OneH || L.term == Term::X;
  if (L.delta != (top ? J : J - 1) || L.delta < 0) throw std::invalid_argument("rho_construct: delta does not match n");
  if ((L.term == Term::X) != (x != 0) || (L.term == Term::X && x != L.param))
    throw std::invalid_argument("rho_construct: psi does not restrict as the label requires");

  if (L.term == Term::OneH) {
    std::vector<CycNum> v(G.num_classes());
    for (int cl = 0; cl < G.num_classes(); ++cl) {
      int g = G.class_rep(cl);
      v[cl] = psi_at(C, t, L.psi, C.a_block(g)) * gl_char(ctx, J, L.Y, C.D(g));
    }
    return Character(C.G, std::move(v), L.str());
  }

  if (L.term == Term::X) {
    // W_psi extended through the Levi part, tensored with Y(D)
    long qJ = 1;
    for (int i = 0; i < J; ++i) qJ *= q;
    ExplicitRep W;
    W.group = C.G;
    W.dim = static_cast<int>(qJ);
    W.fn = [&C, &t, &k, psi = L.psi, x, r, J, q, dim = W.dim](int g) {
      RMat M = C.G->element(g);
      RMat l = levi_of(M, r, J);
      RMat h = M * mat_inverse(l);
      std::vector<int> bh = b_of(h, r, J), ch = c_of(h, r, J);
      int ah = k.sub(h(0, r - 1), dot(k, bh, ch));
      CycNum pa = psi_at(C, t, psi, sub_block(M, 0, 0, r, r)) * psi_add(k, k.mul(x, ah));
      int a0 = M(0, 0);
      RMat Dinv = J ? mat_inverse(sub_block(M, r, r, J, J)) : RMat();
      DMat<CycNum> m(dim, dim);
      for (int vi = 0; vi < dim; ++vi) {
        std::vector<int> v = digits(vi, q, J), vp(J), out(J);
        for (int j = 0; j < J; ++j) {
          int s = 0;
          for (int i = 0; i < J; ++i) s = k.add(s, k.mul(v[i], Dinv(i, j)));
          vp[j] = k.mul(a0, s);
          out[j] = k.add(vp[j], bh[j]);
        }
        m.a[static_cast<std::size_t>(undigits(out, q)) * dim + vi] = pa * psi_add(k, k.neg(k.mul(x, dot(k, vp, ch))));
      }
      return m;
    };
    if (G.order() <= 5000 && !W.is_homomorphism()) throw std::logic_error("rho_construct: W_psi model is not a homomorphism");
    std::vector<CycNum> yv(G.num_classes());
    for (int cl = 0; cl < G.num_classes(); ++cl) yv[cl] = gl_char(ctx, J, L.Y, C.D(G.class_rep(cl)));
    Character chi = W.character() * Character(C.G, std::move(yv));
    chi.label = L.str();
    return chi;
  }

  // Y and the first d step: induced from the stabilizer of lambda_(f,v)
  if (x != 0) throw std::invalid_argument("rho_construct: psi must be trivial on A^{r-1}");
  std::vector<int> f = unit_vec(J, 0), v(J, 0);
  if (L.term == Term::Y) v = unit_vec(J, 0, L.param);
  if (L.term == Term::D && L.param) f.assign(J, 0), v = unit_vec(J, 0);
  std::vector<RMat> basis = heis_basis(C);
  SubgroupHandle Sh =
      subgroup_by_predicate(C.G, SubgroupKind::Stabilizer, [&](const RMat& M) { return stabilizes(C, M, basis, f, v); });
  Embedding E = make_embedding(Sh, "Stab");
  const MatGroup& S = *E.sub;
  const int dl = L.delta;
  std::vector<CycNum> lin(S.order());
  std::vector<uint64_t> bkey(S.order());
  for (int s = 0; s < S.order(); ++s) {
    RMat M = S.element(s);
    RMat h = M * mat_inverse(levi_of(M, r, J));
    lin[s] = psi_add(k, lambda_val(k, h, r, J, f, v)) * psi_at(C, t, L.psi, sub_block(M, 0, 0, r, r));
    bkey[s] = sub_block(g_prime(M, r, J), 1, 1, dl, dl).key();
  }
  for (int s = 0; s < S.order(); ++s)
    for (int gen : S.generators()) {
      int p = S.mul(s, gen);
      if (lin[p] != lin[s] * lin[gen]) throw std::logic_error("rho_construct: extension of lambda is not linear");
      RMat Bs = RMat::from_key(C.k, dl, dl, bkey[s]), Bg = RMat::from_key(C.k, dl, dl, bkey[gen]);
      if (dl && (Bs * Bg).key() != bkey[p]) throw std::logic_error("rho_construct: reduced block is not multiplicative");
    }
  std::vector<CycNum> sv(S.num_classes());
  for (int cl = 0; cl < S.num_classes(); ++cl) {
    int s = S.class_rep(cl);
    sv[cl] = lin[s] * gl_char(ctx, dl, L.Y, RMat::from_key(C.k, dl, dl, bkey[s]));
  }
  Character chi = induce(Character(E.sub, std::move(sv)), E);
  if (inner_product(chi, chi) != 1) throw std::logic_error("rho_construct: induced character is reducible");
  chi.label = L.str();
  return chi;
}

// ------------------------------------------------------------------ products

namespace {

struct ProdData {
  GroupPtr G;  // keeps the key alive
  Embedding L;
  std::vector<int> U, V;
  std::vector<std::vector<Rat>> w;
  GAElem eUV;
};

const ProdData& prod_data(const CrnGroup& big, int n) {
  static std::map<std::pair<const MatGroup*, int>, std::unique_ptr<ProdData>> cache;
  auto key = std::make_pair(big.G.get(), n);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  const int N = big.n;
  auto zero = [N](const RMat& M, int r0, int r1, int c0, int c1) {
    for (int i = r0; i < r1; ++i)
      for (int j = c0; j < c1; ++j)
        if (M(i, j) != 0) return false;
    return true;
  };
  auto ident = [N, n](const RMat& M) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        bool same = (i < n) == (j < n);
        if (same && M(i, j) != (i == j ? 1 : 0)) return false;
      }
    return true;
  };
  auto d = std::make_unique<ProdData>();
  d->G = big.G;
  d->L = make_embedding(subgroup_by_predicate(big.G, SubgroupKind::Levi,
                                              [=](const RMat& M) { return zero(M, 0, n, n, N) && zero(M, n, N, 0, n); }),
                        "L");
  d->U = subgroup_by_predicate(big.G, SubgroupKind::U, [=](const RMat& M) { return ident(M) && zero(M, n, N, 0, n); }).elems;
  d->V = subgroup_by_predicate(big.G, SubgroupKind::V, [=](const RMat& M) { return ident(M) && zero(M, 0, n, n, N); }).elems;
  const MatGroup& G = *big.G;
  GAElem pi = support_projection(G, d->U, d->V);
  std::vector<int> lreps;
  for (int c = 0; c < d->L.sub->num_classes(); ++c) lreps.push_back(d->L.to_parent[d->L.sub->class_rep(c)]);
  d->w = image_weights(G, pi, lreps);
  d->eUV = ga_mul(G, subgroup_average(d->U), subgroup_average(d->V));
  return *cache.emplace(key, std::move(d)).first->second;
}

}  // namespace

namespace {

// Subgroups offered to explicit_model: Borel-type conditions on D, alone and inside the
// stabilizers of the orbit representatives.
std::vector<GroupPtr> monomial_candidates(const CrnGroup& C) {
  const int r = C.r, J = C.J;
  auto tri = [r, J](const RMat& M, bool upper) {
    for (int i = 0; i < J; ++i)
      for (int j = 0; j < J; ++j)
        if ((upper ? i > j : i < j) && M(r + i, r + j) != 0) return false;
    return true;
  };
  std::vector<RMat> basis = heis_basis(C);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> fv{{std::vector<int>(J, 0), std::vector<int>(J, 0)}};
  if (J >= 1) {
    fv.push_back({unit_vec(J, 0), unit_vec(J, 0)});
    fv.push_back({unit_vec(J, 0), std::vector<int>(J, 0)});
    fv.push_back({std::vector<int>(J, 0), unit_vec(J, 0)});
  }
  if (J >= 2) fv.push_back({unit_vec(J, 1), unit_vec(J, 0)});
  std::vector<GroupPtr> out;
  for (const auto& [f, v] : fv)
    for (int mode = 0; mode < 3; ++mode)
      out.push_back(subgroup_by_predicate(C.G, SubgroupKind::Other, [&, mode](const RMat& M) {
                      if (mode < 2 && !tri(M, mode == 0)) return false;
                      return stabilizes(C, M, basis, f, v);
                    }).as_group("P"));
  // Lagrangian-type: one of V, V* dropped
  for (int side = 0; side < 2; ++side)
    for (int mode = 0; mode < 3; ++mode)
      out.push_back(subgroup_by_predicate(C.G, SubgroupKind::Other, [&, side, mode](const RMat& M) {
                      if (mode < 2 && !tri(M, mode == 0)) return false;
                      for (int i = 0; i < J; ++i)
                        if ((side ? M(r + i, r - 1) : M(0, r + i)) != 0) return false;
                      return true;
                    }).as_group("P"));
  return out;
}

}  // namespace

CentralizerProduct centralizer_product(const CrnGroup& big, const CrnGroup& small, const Character& rho,
                                       const Character& W, bool with_oracle) {
  const int n = small.n, m = big.n - small.n;
  if (m < 1 || big.r != small.r || big.q != small.q) throw std::invalid_argument("centralizer_product: shapes do not fit");
  if (rho.group != small.G) throw std::invalid_argument("centralizer_product: rho is not on C_{r,n}");
  if (W.group->n() != m) throw std::invalid_argument("centralizer_product: W is not on GL_m");
  const ProdData& d = prod_data(big, n);
  const MatGroup& L = *d.L.sub;
  std::vector<CycNum> xv(L.num_classes());
  for (int c = 0; c < L.num_classes(); ++c) {
    RMat M = L.element(L.class_rep(c));
    xv[c] = rho.at(small.G->find(sub_block(M, 0, 0, n, n))) * W.at(W.group->find(sub_block(M, n, n, m, m)));
  }
  Character X(d.L.sub, std::move(xv));
  TablePtr T = character_table(big.G);
  std::vector<GroupPtr> extra;
  if (with_oracle) extra = monomial_candidates(big);
  CentralizerProduct out;
  for (const Character& th : T->irr) {
    std::vector<CycNum> pv(L.num_classes(), CycNum(0));
    for (int c = 0; c < L.num_classes(); ++c)
      for (std::size_t cl = 0; cl < d.w[c].size(); ++cl)
        if (sgn(d.w[c][cl]) != 0) pv[c] += th.vals[cl] * CycNum(d.w[c][cl]);
    out.mult.push_back(inner_product(X, Character(d.L.sub, std::move(pv))));
    if (with_oracle) out.mult_oracle.push_back(inner_product(X, operator_image(explicit_model(th, extra), d.eUV, d.L)));
  }
  out.character = T->combine(out.mult);
  return out;
}

std::vector<FreenessReport> freeness_check(int r, int n, int m, int q) {
  if (m < 1) throw std::invalid_argument("freeness_check: m >= 1");
  const GRContext& ctx = level_one(q);
  std::map<int, CrnGroup> groups;
  auto get = [&](int np) -> const CrnGroup& {
    auto it = groups.find(np);
    if (it == groups.end()) it = groups.emplace(np, build_crn(r, np, q)).first;
    return it->second;
  };
  const CrnGroup& small = get(n);
  const CrnGroup& big = get(n + m);
  Classification cls = classify_crn(small);
  std::vector<FreenessReport> out;
  for (const BranchingLabel& L0 : cls.labels) {
    if (L0.delta != 0 || !rho_supported(L0)) continue;
    Character rho = rho_construct(small, L0);
    // W2 o rho at every intermediate size, shared by all W
    std::map<std::pair<int, int>, Character> lower;
    auto lower_prod = [&](int b, int W2) -> const Character& {
      auto key = std::make_pair(b, W2);
      auto it = lower.find(key);
      if (it == lower.end())
        it = lower.emplace(key, centralizer_product(get(n + b), small, rho, ctx.table(b)->irr[W2], false).character).first;
      return it->second;
    };
    for (int w = 0; w < ctx.num_irr(m); ++w) {
      FreenessReport R;
      R.label = L0;
      R.W = w;
      CentralizerProduct P = centralizer_product(big, small, rho, ctx.table(m)->irr[w], true);
      BranchingLabel L1 = L0;
      L1.delta = L0.delta + m;
      L1.Y = w;
      R.product_matches = P.character == rho_construct(big, L1);
      R.oracle_agrees = P.mult == P.mult_oracle;

      GRTensor dW = ctx.delta(GRElem::basis(m, w));
      R.hopf = true;
      for (int a = 0; a <= m; ++a) {
        const int np = n + m - a;
        if (np < r) continue;
        const CrnGroup& Cp = get(np);
        for (int W1 = 0; W1 < gl_irr_count(ctx, a); ++W1)
          for (const Character& Y : character_table(Cp.G)->irr) {
            long lhs = a == 0 ? inner_product(P.character, Y)
                              : inner_product(P.character,
                                              centralizer_product(big, Cp, Y, ctx.table(a)->irr[W1], false).character);
            long rhs = 0;
            for (int W2 = 0; W2 < gl_irr_count(ctx, m - a); ++W2) {
              std::vector<Basis> key{{a, a ? W1 : 0}, {m - a, m - a ? W2 : 0}};
              auto it = dW.terms.find(key);
              if (it == dW.terms.end()) continue;
              long pair = m - a == 0 ? inner_product(rho, Y) : inner_product(lower_prod(m - a, W2), Y);
              rhs += it->second * pair;
            }
            ++R.hopf_pairs;
            if (lhs != rhs) R.hopf = false;
          }
      }
      out.push_back(std::move(R));
    }
  }
  return out;
}

}  // namespace grlab
