#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grlab/basechange.hpp"
#include "grlab/grfunctors.hpp"
#include "grlab/repkit.hpp"

using namespace grlab;

namespace {

RMat t_class() {
  RingPtr F4 = make_ring(2, 1, 2);
  RMat M(F4, 1, 1);
  M(0, 0) = F4->t_power(1);
  return M;
}

// tr(M a b) over F_p from raw entries
int trace_form(const RMat& M, const RMat& a, const RMat& b, int p) {
  const int n = M.n();
  long tr = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) tr += static_cast<long>(M(i, j)) * a(j, l) * b(l, i);
  return static_cast<int>(tr % p);
}

// Irreducibles of G whose restriction to K^{l-i} meets phi_xi, read off without gradings.
long count_over(const GroupPtr& G, const RMat& xi, int ell) {
  Embedding K = make_embedding(congruence_kernel(G, ell - xi.ring->ell()), "K");
  Character phi = phi_star_character(K.sub, xi, ell);
  long c = 0;
  for (const auto& chi : character_table(G)->irr)
    if (!inner_product_cyc(restrict(chi, K), phi).is_zero()) ++c;
  return c;
}

using Coeffs = std::vector<CycNum>;

Coeffs tw_product(const HeisenbergData& H, const Coeffs& a, const Coeffs& b) {
  Coeffs out(H.sizeN);
  for (int x = 0; x < H.sizeN; ++x) {
    if (a[x].is_zero()) continue;
    for (int y = 0; y < H.sizeN; ++y)
      if (!b[y].is_zero()) out[H.add(x, y)] += a[x] * b[y] * CycNum::zeta(H.p, H.beta(x, y));
  }
  return out;
}

}  // namespace

TEST_CASE("Heisenberg data at l = 3, p = 2, d = 2, m = 1") {
  HeisenbergData H = heisenberg(t_class(), 3);
  CHECK(H.sizeN == 4);  // 2^{d^2 - d}
  CHECK(H.dimN == 2);
  RMat Mbar = H.M_emb.reduce(1);
  for (int a = 0; a < H.sizeN; ++a)
    for (int b = 0; b < H.sizeN; ++b) CHECK(H.beta(a, b) == trace_form(Mbar, H.zbar[a], H.zbar[b], 2));
  GroupPtr G = odd_stabilizer(H);
  CHECK(G->order() == 12);  // GR(4,2)^x
  GAction A = g_action(H, G);
  BetaReport r = check_beta(H, A);
  CHECK(r.bimultiplicative);
  CHECK(r.g_invariant);
  CHECK(r.nondegenerate);
  CHECK(r.section_formula);
  CHECK(r.section_g_trivial);
  CHECK(r.section_independent);
}

TEST_CASE("Lagrangian, irreducible module and S elements") {
  HeisenbergData H = heisenberg(t_class(), 3);
  GAction A = g_action(H, odd_stabilizer(H));
  LagrangianChoice L = block_lagrangian(H);
  CHECK(L.elems.size() * L.elems.size() == static_cast<std::size_t>(H.sizeN));
  for (int a : L.elems)
    for (int b : L.elems) {
      CHECK(H.pairing(a, b) == 0);
      CHECK((L.chi[a] + L.chi[b]) % H.e == (H.bexp(a, b) + L.chi[H.add(a, b)]) % H.e);
    }
  // beta(v, v) = -1 for v != 0 here, so no subgroup of order 2 carries a trivial beta
  CHECK_FALSE(L.beta_trivial);
  IrrModel I = irr_model(H, L);
  CHECK(I.dim() == 2);
  CHECK(I.is_full_matrix_algebra());

  SReport s = check_s_elements(H, A, I);
  CHECK(s.forms_agree);
  CHECK(s.invertible);
  CHECK(s.intertwining);
  CHECK(s.identity_coefficient);
  CHECK(s.gamma_scalar);
  CHECK(s.gamma_formula_corrected);
  CHECK(s.det_split);
  for (int g = 0; g < A.G->order(); ++g) {
    long fixed = 0;
    for (int h = 0; h < H.sizeN; ++h) fixed += A(g, h) == h;
    CHECK(tw_coeff(H, s_element(H, A, g), 0) == CycNum(fixed));
  }
}

TEST_CASE("cyclotomic roots") {
  CycNum r;
  REQUIRE(cyc_root(CycNum(4), 2, &r));
  CHECK(r * r == CycNum(4));
  REQUIRE(cyc_root(CycNum(2), 2, &r));
  CHECK(r * r == CycNum(2));
  REQUIRE(cyc_root(CycNum(-3), 2, &r));
  CHECK(r * r == CycNum(-3));
  REQUIRE(cyc_root(CycNum(1) / CycNum(8) * CycNum::zeta(3, 1), 3, &r));
  CHECK(r * r * r == CycNum(1) / CycNum(8) * CycNum::zeta(3, 1));
  REQUIRE(cyc_root(CycNum::zeta(4, 1) * CycNum(1) / CycNum(16), 4, &r));
  CHECK(r * r * r * r == CycNum::zeta(4, 1) * CycNum(1) / CycNum(16));
  CHECK_FALSE(cyc_root(CycNum(3), 3, &r));
}

TEST_CASE("trivialization of gamma") {
  HeisenbergData H = heisenberg(t_class(), 3);
  GAction A = g_action(H, odd_stabilizer(H));
  IrrModel I = irr_model(H, block_lagrangian(H));
  Trivialization t = trivialize(H, A, I, [](const RMat& g) {
    RMat b = g.reduce(1);
    return b == RMat::identity(b.ring, b.n());
  });
  CHECK(t.homomorphism);
  CHECK(t.intertwining);
  CHECK(t.lagrangian_p_stable);
  CHECK(t.p_sylow_eigen);
  const MatGroup& G = *t.G;
  std::vector<Coeffs> Q;
  for (int g = 0; g < G.order(); ++g) Q.push_back(t.Q(H, g));
  Coeffs one(H.sizeN);
  one[0] = CycNum(1);
  CHECK(Q[G.identity()] == one);
  for (int g = 0; g < G.order(); ++g) {
    for (int h = 0; h < G.order(); ++h) CHECK(tw_product(H, Q[g], Q[h]) == Q[G.mul(g, h)]);
    for (int h = 0; h < H.sizeN; ++h) {
      Coeffs T(H.sizeN), U(H.sizeN);
      T[h] = CycNum(1);
      U[A(g, h)] = CycNum(1);
      CHECK(tw_product(H, Q[g], T) == tw_product(H, U, Q[g]));
    }
  }
}

TEST_CASE("coherent trivializations for {M, M + M}") {
  CoherentReport r = coherent_pair(t_class(), 3);
  CHECK(r.levi_order == 144);
  CHECK(r.borel_order == 2304);
  CHECK(r.big_trivialized);
  CHECK(r.components_derived);
  CHECK(r.components_multiplicative);
  CHECK(r.weyl_symmetric);
  CHECK(r.reducing_u);
  CHECK(r.reducing_v);
}

TEST_CASE("odd transfer count at l = 3") {
  RMat M = t_class();
  TransferCount t = odd_transfer_count(M, 3);
  CHECK(t.small == t.big);
  HeisenbergData H = heisenberg(M, 3);
  RingPtr Z8 = make_ring(2, 3, 1);
  CHECK(count_over(MatGroup::general_linear(Z8, 2), H.M_emb, 3) == t.small);
  RingPtr GR8 = H.az.galois;
  RMat Mb(ring_at_level(GR8, 1), 1, 1);
  Mb.a = M.a;
  CHECK(count_over(MatGroup::general_linear(GR8, 1), Mb, 3) == t.big);
  CHECK_THROWS(odd_transfer_count(M, 2));
}

TEST_CASE("even transfer at l = 2, p = 2, d = 2") {
  RingPtr F4 = make_ring(2, 1, 2);
  EvenTransferReport e = even_transfer(t_class(), 2);
  CHECK(e.small == e.big);
  CHECK(e.z_part_trivial);
  CHECK(e.restriction_bijective);
  CHECK(e.form_preserving);
  CHECK(e.gallagher_small);
  CHECK(e.gallagher_big);
  CHECK(static_cast<long>(e.labels.size()) == e.small);
  // oracle on the 96-element group; the embedded class over F_2 does not depend on l
  HeisenbergData H = heisenberg(t_class(), 3);
  CHECK(count_over(MatGroup::general_linear(make_ring(2, 2, 1), 2), H.M_emb, 2) == e.small);
  CHECK_THROWS(even_transfer(t_class(), 3));

  auto classes = primary_classes_galois(F4, 2);
  CHECK(classes.size() == 2);
  for (const RMat& M : classes) {
    TransferCount t = even_transfer_count(M, 2);
    CHECK(t.small == t.big);
    if (t.big_direct >= 0) CHECK(t.big_direct == t.big);
  }
}

TEST_CASE("d = 1 character twist on Z/4") {
  GRContext ctx(make_ring(2, 2, 1), 2);
  for (int th = 0; th < ctx.num_irr(1); ++th) {
    TwistReport r = character_twist(ctx, th);
    CHECK(r.bijective);
    CHECK(r.circle_compatible);
    CHECK(r.grading_shift);
    CHECK(r.pairs == 4);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(heisenberg(t_class(), 4), std::invalid_argument);
  RingPtr F4 = make_ring(2, 1, 2);
  RMat one = RMat::identity(F4, 1);
  CHECK_THROWS_AS(heisenberg(one, 3), std::invalid_argument);
}
