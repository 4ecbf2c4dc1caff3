#include "grlab/repkit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace grlab {

namespace {

Rat i128_to_rat(__int128 x) {
  bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x);
  mpz_class hi(static_cast<unsigned long>(u >> 64));
  mpz_class lo(static_cast<unsigned long>(u & ~0ULL));
  mpz_class r = (hi << 64) + lo;
  if (neg) r = -r;
  return Rat(r);
}

// Values as sparse integer combinations of zeta_M^e.
struct SparseForm {
  int M = 1;
  bool integral = true;
  std::vector<std::vector<std::pair<int, long>>> v;
};

SparseForm sparse_of(const Character& a) {
  SparseForm S;
  long M = 1;
  for (const auto& x : a.vals) M = lcm_long(M, x.conductor());
  S.M = static_cast<int>(M);
  S.v.resize(a.vals.size());
  for (std::size_t c = 0; c < a.vals.size(); ++c) {
    const auto& x = a.vals[c];
    int s = S.M / x.conductor();
    const auto& co = x.coeffs();
    for (std::size_t j = 0; j < co.size(); ++j) {
      if (sgn(co[j]) == 0) continue;
      if (co[j].get_den() != 1 || !co[j].get_num().fits_slong_p()) {
        S.integral = false;
        return S;
      }
      S.v[c].emplace_back(static_cast<int>((j * s) % S.M), co[j].get_num().get_si());
    }
  }
  return S;
}

}  // namespace

Character::Character(GroupPtr G, std::vector<CycNum> v, std::string l)
    : group(std::move(G)), vals(std::move(v)), label(std::move(l)) {
  if (static_cast<int>(vals.size()) != group->num_classes())
    throw std::invalid_argument("class function has wrong length");
}

Character Character::conj() const {
  Character r = *this;
  for (int c = 0; c < group->num_classes(); ++c) r.vals[c] = vals[group->class_inverse(c)];
  return r;
}

Character& Character::operator+=(const Character& o) {
  if (group != o.group) throw std::invalid_argument("class functions on different groups");
  for (std::size_t c = 0; c < vals.size(); ++c) vals[c] += o.vals[c];
  return *this;
}

Character& Character::operator-=(const Character& o) {
  if (group != o.group) throw std::invalid_argument("class functions on different groups");
  for (std::size_t c = 0; c < vals.size(); ++c) vals[c] -= o.vals[c];
  return *this;
}

Character Character::scaled(const CycNum& s) const {
  Character r = *this;
  for (auto& x : r.vals) x *= s;
  return r;
}

bool Character::operator==(const Character& o) const { return group == o.group && vals == o.vals; }

bool Character::is_zero() const {
  for (const auto& x : vals)
    if (!x.is_zero()) return false;
  return true;
}

Character operator+(Character a, const Character& b) { return a += b; }
Character operator-(Character a, const Character& b) { return a -= b; }

Character operator*(const Character& a, const Character& b) {
  if (a.group != b.group) throw std::invalid_argument("class functions on different groups");
  Character r = a;
  for (std::size_t c = 0; c < r.vals.size(); ++c) r.vals[c] *= b.vals[c];
  return r;
}

Character trivial_character(const GroupPtr& G) {
  return Character(G, std::vector<CycNum>(G->num_classes(), CycNum(1)), "1");
}

Character regular_character(const GroupPtr& G) {
  std::vector<CycNum> v(G->num_classes(), CycNum(0));
  v[G->class_of(G->identity())] = CycNum(static_cast<long>(G->order()));
  return Character(G, std::move(v), "reg");
}

CycNum inner_product_cyc(const Character& a, const Character& b) {
  if (a.group != b.group) throw std::invalid_argument("inner product across groups");
  const MatGroup& G = *a.group;
  SparseForm sa = sparse_of(a), sb = sparse_of(b);
  if (sa.integral && sb.integral) {
    int L = static_cast<int>(lcm_long(sa.M, sb.M));
    int ka = L / sa.M, kb = L / sb.M;
    std::vector<__int128> acc(L, 0);
    for (int c = 0; c < G.num_classes(); ++c) {
      if (sa.v[c].empty() || sb.v[c].empty()) continue;
      long w = G.class_size(c);
      for (auto [ea, ca] : sa.v[c])
        for (auto [eb, cb] : sb.v[c]) {
          long idx = (static_cast<long>(ea) * ka - static_cast<long>(eb) * kb) % L;
          if (idx < 0) idx += L;
          acc[idx] += static_cast<__int128>(w) * ca * cb;
        }
    }
    std::vector<Rat> e(L);
    for (int k = 0; k < L; ++k)
      if (acc[k] != 0) e[k] = i128_to_rat(acc[k]);
    return CycNum::from_exponents(L, e) / CycNum(static_cast<long>(G.order()));
  }
  CycNum s(0);
  for (int c = 0; c < G.num_classes(); ++c)
    s += CycNum(G.class_size(c)) * a.vals[c] * b.vals[c].conj();
  return s / CycNum(static_cast<long>(G.order()));
}

long inner_product(const Character& a, const Character& b) {
  return inner_product_cyc(a, b).rational_integer_value();
}

std::vector<long> CharTable::decompose(const Character& theta) const {
  std::vector<long> r(irr.size());
  for (std::size_t k = 0; k < irr.size(); ++k) r[k] = inner_product(theta, irr[k]);
  return r;
}

Character CharTable::combine(const std::vector<long>& coeffs) const {
  std::vector<CycNum> v(group->num_classes(), CycNum(0));
  Character r(group, std::move(v));
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0) r += irr[k].scaled(CycNum(coeffs[k]));
  return r;
}

int CharTable::index_of(const Character& chi) const {
  for (std::size_t k = 0; k < irr.size(); ++k)
    if (irr[k] == chi) return static_cast<int>(k);
  return -1;
}

// ---------------------------------------------------------------- embeddings

Embedding make_embedding(const GroupPtr& sub, const GroupPtr& parent) {
  Embedding E{sub, parent, std::vector<int>(sub->order())};
  for (int h = 0; h < sub->order(); ++h) {
    int g = parent->find(sub->key(h));
    if (g < 0) throw std::invalid_argument("subgroup element not in parent");
    E.to_parent[h] = g;
  }
  return E;
}

Embedding make_embedding(const SubgroupHandle& H, const std::string& name) {
  return make_embedding(H.as_group(name), H.parent);
}

Character induce(const Character& chi, const Embedding& E) {
  if (chi.group != E.sub) throw std::invalid_argument("induce: character not on the subgroup");
  const MatGroup& G = *E.parent;
  const MatGroup& H = *E.sub;
  std::vector<CycNum> sum(G.num_classes(), CycNum(0));
  for (int d = 0; d < H.num_classes(); ++d) {
    int c = G.class_of(E.to_parent[H.class_rep(d)]);
    sum[c] += CycNum(H.class_size(d)) * chi.vals[d];
  }
  for (int c = 0; c < G.num_classes(); ++c)
    if (!sum[c].is_zero()) sum[c] *= CycNum(Rat(G.centralizer_order(c), H.order()));
  return Character(E.parent, std::move(sum), "Ind(" + chi.label + ")");
}

Character restrict(const Character& chi, const Embedding& E) {
  if (chi.group != E.parent) throw std::invalid_argument("restrict: character not on the parent");
  const MatGroup& H = *E.sub;
  std::vector<CycNum> v(H.num_classes());
  for (int d = 0; d < H.num_classes(); ++d) v[d] = chi.at(E.to_parent[H.class_rep(d)]);
  return Character(E.sub, std::move(v), "Res(" + chi.label + ")");
}

// ------------------------------------------------------------ explicit modules

Character ExplicitRep::character() const {
  std::vector<CycNum> v(group->num_classes());
  for (int c = 0; c < group->num_classes(); ++c) {
    DMat<CycNum> A = rho(group->class_rep(c));
    CycNum t(0);
    for (int i = 0; i < dim; ++i) t += A(i, i);
    v[c] = t;
  }
  return Character(group, std::move(v));
}

bool ExplicitRep::is_homomorphism() const {
  if (mats.empty()) {
    for (int s : group->generators())
      for (int g = 0; g < group->order(); ++g)
        if ((rho(g) * rho(s)).a != rho(group->mul(g, s)).a) return false;
    return true;
  }
  if (static_cast<int>(mats.size()) != group->order()) return false;
  if (mats[group->identity()].a != DMat<CycNum>::identity(dim).a) return false;
  for (int s : group->generators())
    for (int g = 0; g < group->order(); ++g)
      if ((mats[g] * mats[s]).a != mats[group->mul(g, s)].a) return false;
  return true;
}

ExplicitRep monomial_induced(const Character& lambda, const Embedding& E) {
  const MatGroup& G = *E.parent;
  const MatGroup& H = *E.sub;
  std::unordered_map<int, int> sub_index;
  for (int h = 0; h < H.order(); ++h) sub_index[E.to_parent[h]] = h;
  std::vector<int> coset(G.order(), -1), reps;
  for (int g = 0; g < G.order(); ++g) {
    if (coset[g] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int h = 0; h < H.order(); ++h) coset[G.mul(g, E.to_parent[h])] = id;
  }
  int k = static_cast<int>(reps.size());
  ExplicitRep Y{E.parent, k, {}};
  Y.mats.assign(G.order(), DMat<CycNum>(k, k));
  for (int g = 0; g < G.order(); ++g)
    for (int j = 0; j < k; ++j) {
      int y = G.mul(g, reps[j]);
      int i = coset[y];
      int h = sub_index.at(G.mul(G.inv(reps[i]), y));
      Y.mats[g](i, j) = lambda.at(h);
    }
  return Y;
}

DMat<CycNum> act(const ExplicitRep& Y, const GAElem& a) {
  DMat<CycNum> S(Y.dim, Y.dim);
  for (const auto& [g, c] : a) {
    DMat<CycNum> A = Y.rho(g);
    for (std::size_t t = 0; t < A.a.size(); ++t)
      if (!A.a[t].is_zero()) S.a[t] += A.a[t] * CycNum(c);
  }
  return S;
}

namespace {

// Coordinates of rho(g) on the column space of B (independent columns), for every element
// of the group H acting through to_parent.
ExplicitRep restrict_to_image(const ExplicitRep& Y, const DMat<CycNum>& B, const GroupPtr& Hgrp,
                              const std::vector<int>& to_parent) {
  auto rows = independent_columns(transpose(B));
  DMat<CycNum> BI(static_cast<int>(rows.size()), B.cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < B.cols; ++j) BI(static_cast<int>(r), j) = B(rows[r], j);
  DMat<CycNum> BIinv = inverse(BI);
  ExplicitRep R{Hgrp, B.cols, {}};
  R.mats.resize(Hgrp->order());
  for (int h = 0; h < Hgrp->order(); ++h) {
    DMat<CycNum> gB = Y.rho(to_parent[h]) * B;
    DMat<CycNum> gBI(BI.rows, B.cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int j = 0; j < B.cols; ++j) gBI(static_cast<int>(r), j) = gB(rows[r], j);
    R.mats[h] = BIinv * gBI;
  }
  for (int s : Hgrp->generators()) {
    DMat<CycNum> gB = Y.rho(to_parent[s]) * B;
    if ((B * R.mats[s]).a != gB.a) throw std::domain_error("subspace is not stable");
  }
  return R;
}

DMat<CycNum> column_basis(const DMat<CycNum>& M) { return select_columns(M, independent_columns(M)); }

}  // namespace

ExplicitRep subrepresentation(const ExplicitRep& Y, const DMat<CycNum>& B) {
  std::vector<int> id(Y.group->order());
  std::iota(id.begin(), id.end(), 0);
  return restrict_to_image(Y, column_basis(B), Y.group, id);
}

ExplicitRep isotypic_component(const ExplicitRep& Y, const Character& chi) {
  const MatGroup& G = *Y.group;
  DMat<CycNum> P(Y.dim, Y.dim);
  for (int g = 0; g < G.order(); ++g) {
    CycNum c = chi.at(G.inv(g));
    if (c.is_zero()) continue;
    DMat<CycNum> A = Y.rho(g);
    for (std::size_t t = 0; t < A.a.size(); ++t)
      if (!A.a[t].is_zero()) P.a[t] += A.a[t] * c;
  }
  return subrepresentation(Y, P);
}

Character operator_image(const ExplicitRep& Y, const GAElem& a, const Embedding& L) {
  if (L.parent != Y.group) throw std::invalid_argument("operator_image: group mismatch");
  DMat<CycNum> B = column_basis(act(Y, a));
  if (B.cols == 0) return Character(L.sub, std::vector<CycNum>(L.sub->num_classes(), CycNum(0)));
  return restrict_to_image(Y, B, L.sub, L.to_parent).character();
}

GAElem subgroup_average(const std::vector<int>& elems) {
  GAElem e;
  Rat w(1, static_cast<long>(elems.size()));
  for (int g : elems) e[g] = w;
  return e;
}

GAElem ga_mul(const MatGroup& G, const GAElem& a, const GAElem& b) {
  GAElem r;
  for (const auto& [x, cx] : a)
    for (const auto& [y, cy] : b) r[G.mul(x, y)] += cx * cy;
  for (auto it = r.begin(); it != r.end();) it = sgn(it->second) == 0 ? r.erase(it) : std::next(it);
  return r;
}

namespace {

std::vector<int> cyclic_subgroup(const MatGroup& G, int g) {
  std::vector<int> s;
  int x = G.identity();
  do {
    s.push_back(x);
    x = G.mul(x, g);
  } while (x != G.identity());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

ExplicitRep explicit_model(const Character& chi, const std::vector<GroupPtr>& extra_subgroups) {
  const GroupPtr& G = chi.group;
  long d = chi.degree().rational_integer_value();
  if (inner_product(chi, chi) != 1) throw std::invalid_argument("explicit_model: not irreducible");
  if (d == 1) {
    ExplicitRep Y{G, 1, {}};
    Y.mats.resize(G->order(), DMat<CycNum>(1, 1));
    for (int g = 0; g < G->order(); ++g) Y.mats[g](0, 0) = chi.at(g);
    return Y;
  }
  std::vector<GroupPtr> cands = extra_subgroups;
  std::vector<std::vector<int>> seen;
  for (int c = 0; c < G->num_classes(); ++c) {
    auto s = cyclic_subgroup(*G, G->class_rep(c));
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
    seen.push_back(s);
    std::vector<uint64_t> keys;
    for (int x : s) keys.push_back(G->key(x));
    cands.push_back(MatGroup::from_keys(G->ring(), G->n(), keys, "cyc"));
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const GroupPtr& a, const GroupPtr& b) { return a->order() > b->order(); });
  for (const auto& H : cands) {
    if (G->order() % H->order() != 0) continue;
    Embedding E = make_embedding(H, G);
    Character res = restrict(chi, E);
    auto T = character_table(H);
    for (const auto& lam : T->irr) {
      if (lam.degree() != CycNum(1)) continue;
      if (inner_product(res, lam) != 1) continue;
      ExplicitRep Y = monomial_induced(lam, E);
      if (Y.dim == d) return Y;
      return isotypic_component(Y, chi);
    }
  }
  throw std::runtime_error("explicit_model: no monomial route found");
}

// ------------------------------------------------------- additive characters

CycNum phi_star(const RMat& xi, const RMat& k, int ell) {
  int i = xi.ring->ell();
  const ChainRing& R = *k.ring;
  if (R.ell() != ell) throw std::invalid_argument("phi_star: level mismatch");
  RingPtr Ri = ring_at_level(k.ring, i);
  int shift = 1;
  for (int t = 0; t < ell - i; ++t) shift *= R.p();
  RMat A(Ri, k.rows, k.cols);
  for (int a = 0; a < k.rows; ++a)
    for (int b = 0; b < k.cols; ++b) {
      int e = a == b ? R.sub(k(a, b), 1) : k(a, b);
      std::vector<int> dig(R.d());
      for (int j = 0; j < R.d(); ++j) {
        int c = R.digit(e, j);
        if (c % shift != 0) throw std::invalid_argument("phi_star: element not in the kernel");
        dig[j] = c / shift;
      }
      A(a, b) = Ri->from_digits(dig);
    }
  int pi = 1;
  for (int t = 0; t < i; ++t) pi *= R.p();
  return CycNum::zeta(pi, phi_exponent(xi, A));
}

Character phi_star_character(const GroupPtr& K, const RMat& xi, int ell) {
  std::vector<CycNum> v(K->num_classes());
  for (int c = 0; c < K->num_classes(); ++c) v[c] = phi_star(xi, K->element(K->class_rep(c)), ell);
  return Character(K, std::move(v), "phi*");
}

std::vector<CliffordIrrep> clifford_irreps(const GroupPtr& G, int i, const RMat& xi, const TablePtr& T) {
  int ell = G->ring()->ell();
  if (2 * i > ell) throw std::invalid_argument("clifford_irreps: need 2i <= l");
  GroupPtr Gphi = stabilizer(G, xi).as_group("G(phi)");
  GroupPtr K = congruence_kernel(G, ell - i).as_group("K");
  Embedding KinS = make_embedding(K, Gphi);
  Embedding SinG = make_embedding(Gphi, G);
  Character phi = phi_star_character(K, xi, ell);
  auto TS = character_table(Gphi);
  std::vector<CliffordIrrep> out;
  int label = 0;
  for (const auto& psi : TS->irr) {
    if (inner_product_cyc(restrict(psi, KinS), phi).is_zero()) continue;
    CliffordIrrep c{xi, label++, induce(psi, SinG), -1};
    if (T) c.table_index = T->index_of(c.chi);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace grlab
