#include <algorithm>
#include <set>
#include <stdexcept>

#include "grlab/grfunctors.hpp"

namespace grlab {

PrimaryReport GRContext::primary_equiv(const RMat& M1, const RMat& M2) const {
  if (!is_coprime(M1, M2)) throw std::invalid_argument("primary_equiv: classes are not coprime");
  PrimaryReport r;
  r.M1 = M1;
  r.M2 = M2;
  int n1 = M1.n(), n2 = M2.n();
  auto b1 = block(n1, M1), b2 = block(n2, M2), b = block(n1 + n2, block_sum(M1, M2));
  r.count1 = static_cast<long>(b1.size());
  r.count2 = static_cast<long>(b2.size());
  r.block_count = static_cast<long>(b.size());
  r.count_identity = r.block_count == r.count1 * r.count2;

  std::vector<GRElem> imgs;
  bool irreducible = true;
  for (int x : b1)
    for (int y : b2) {
      GRElem p = pind({{n1, x}, {n2, y}});
      r.pairs.push_back({{n1, x}, {n2, y}});
      if (p.terms.size() != 1 || p.terms.begin()->second != 1) {
        irreducible = false;
        r.images.push_back(-1);
      } else {
        r.images.push_back(p.terms.begin()->first.second);
      }
      imgs.push_back(std::move(p));
    }
  std::set<int> hit(r.images.begin(), r.images.end());
  r.pind_bijective = irreducible && hit.size() == r.images.size() &&
                     std::set<int>(b.begin(), b.end()) == hit;
  r.form_preserving = true;
  for (std::size_t s = 0; s < imgs.size(); ++s)
    for (std::size_t t = 0; t < imgs.size(); ++t)
      if (form(imgs[s], imgs[t]) != (s == t ? 1 : 0)) r.form_preserving = false;
  return r;
}

namespace {

// Character values on L of the image of the projection pi acting on X.
std::vector<CycNum> image_on_levi(const MatGroup& G, const GAElem& pi, const Character& X,
                                  const std::vector<int>& L) {
  std::vector<CycNum> v;
  v.reserve(L.size());
  for (int l : L) {
    std::vector<Rat> per(G.num_classes());
    for (const auto& [g, c] : pi) per[G.class_of(G.mul(l, g))] += c;
    CycNum s(0);
    for (int k = 0; k < G.num_classes(); ++k)
      if (sgn(per[k]) != 0) s += X.vals[k] * CycNum(per[k]);
    v.push_back(s);
  }
  return v;
}

CycNum levi_form(const std::vector<int>& L, const std::vector<CycNum>& a, const std::vector<CycNum>& b) {
  CycNum s(0);
  for (std::size_t k = 0; k < L.size(); ++k) s += a[k] * b[k].conj();
  return s / CycNum(static_cast<long>(L.size()));
}

}  // namespace

BottomRowReport GRContext::bottom_row(const RMat& M1, const RMat& M2) const {
  if (!is_coprime(M1, M2)) throw std::invalid_argument("bottom_row: classes are not coprime");
  int n1 = M1.n(), n = n1 + M2.n(), l = ell();
  RMat M = block_sum(M1, M2);
  GroupPtr G = stabilizer(group(n), M).as_group("G(M)");
  RingPtr R = ring_;
  auto blk = [n1](int a) { return a < n1 ? 0 : 1; };
  auto levi = subgroup_by_predicate(G, SubgroupKind::Levi, [=](const RMat& g) {
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        if (blk(a) != blk(c) && g(a, c) != 0) return false;
    return true;
  });
  // U^i (upper) and V^i (lower): unipotent off-diagonal block divisible by p^i
  auto radical = [&](bool upper, int i) {
    return subgroup_by_predicate(G, upper ? SubgroupKind::U : SubgroupKind::V, [=](const RMat& g) {
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          if (blk(a) == blk(c)) {
            if (g(a, c) != (a == c ? 1 : 0)) return false;
          } else if ((blk(a) < blk(c)) != upper) {
            if (g(a, c) != 0) return false;
          } else if (R->val(g(a, c)) < i) {
            return false;
          }
        }
      return true;
    }).elems;
  };
  std::vector<std::vector<int>> U(l + 1), V(l + 1);
  for (int i = 1; i <= l; ++i) {
    U[i] = radical(true, i);
    V[i] = radical(false, i);
  }

  BottomRowReport rep;
  rep.ell = l;
  rep.group_order = G->order();
  rep.levi_order = levi.order();

  // irreducibles of G(M) on which K^{l-1} acts through M
  auto T = character_table(G);
  GroupPtr K = congruence_kernel(G, l - 1).as_group("K");
  Embedding KinG = make_embedding(K, G);
  Character phi = phi_star_character(K, M, l);
  std::vector<const Character*> Xs;
  for (const auto& chi : T->irr)
    if (!inner_product_cyc(restrict(chi, KinG), phi).is_zero()) Xs.push_back(&chi);
  rep.num_X = static_cast<int>(Xs.size());

  int j = l / 2;
  GAElem pi_bottom = support_projection(*G, U[1], V[1]);
  GAElem pi_hill = support_projection(*G, U[j], V[l % 2 == 0 ? j : j + 1]);
  rep.hill_agrees = true;
  rep.images_irreducible = true;
  for (const Character* X : Xs) {
    auto a = image_on_levi(*G, pi_bottom, *X, levi.elems);
    auto b = image_on_levi(*G, pi_hill, *X, levi.elems);
    if (a != b) rep.hill_agrees = false;
    if (levi_form(levi.elems, a, a) != CycNum(1)) rep.images_irreducible = false;
  }

  rep.reduction_holds = true;
  for (int i = 1; i + 1 <= l - 1; ++i) {
    int jj = l - 1 - i;
    for (bool swap : {false, true}) {
      const auto& A = swap ? U : V;
      const auto& B = swap ? V : U;
      GAElem d = support_projection(*G, A[i], B[jj]);
      for (const auto& [g, c] : support_projection(*G, A[i], B[jj + 1])) {
        d[g] -= c;
        if (sgn(d[g]) == 0) d.erase(g);
      }
      GAElem d2 = ga_mul(*G, d, d);  // d is self-adjoint, so tr(d^2) = 0 forces d = 0 on X
      for (const Character* X : Xs)
        if (!ga_trace(d2, *X).is_zero()) rep.reduction_holds = false;
      ++rep.reduction_instances;
    }
  }
  return rep;
}

}  // namespace grlab
