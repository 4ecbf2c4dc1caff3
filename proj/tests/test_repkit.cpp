#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "grlab/repkit.hpp"

using namespace grlab;

namespace {

std::vector<long> degrees(const CharTable& T) {
  std::vector<long> d;
  for (const auto& c : T.irr) d.push_back(c.degree().rational_integer_value());
  return d;
}

// Second orthogonality, independent of the row certificate.
void check_columns(const CharTable& T) {
  const MatGroup& G = *T.group;
  for (int c = 0; c < G.num_classes(); ++c)
    for (int c2 = 0; c2 < G.num_classes(); ++c2) {
      CycNum s(0);
      for (const auto& chi : T.irr) s += chi.vals[c] * chi.vals[c2].conj();
      CHECK(s == CycNum(c == c2 ? G.centralizer_order(c) : 0L));
    }
}

}  // namespace

TEST_CASE("small tables") {
  auto S3 = MatGroup::general_linear(make_ring(2, 1, 1), 2);
  auto T = character_table(S3);
  CHECK(degrees(*T) == std::vector<long>{1, 1, 2});
  CHECK(T->irr[0] == trivial_character(S3));
  check_columns(*T);

  auto G = MatGroup::general_linear(make_ring(3, 1, 1), 2);
  auto T3 = character_table(G);
  CHECK(degrees(*T3) == std::vector<long>{1, 1, 2, 2, 2, 3, 3, 4});
  check_columns(*T3);
}

TEST_CASE("GL2(Z/4) table") {
  auto G = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  auto T = character_table(G);
  long s = 0;
  for (long d : degrees(*T)) s += d * d;
  CHECK(s == 96);
  CHECK(T->size() == G->num_classes());
  check_columns(*T);
  auto reg = T->decompose(regular_character(G));
  CHECK(reg == degrees(*T));
  CHECK(character_table(G) == T);
}

TEST_CASE("Frobenius reciprocity on random class functions") {
  auto G = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  auto T = character_table(G);
  auto H = diagonal_torus(G);
  Embedding E = make_embedding(H, "T");
  auto TH = character_table(E.sub);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<long> a(T->size()), b(TH->size());
    for (auto& x : a) x = static_cast<long>(rng() % 5) - 2;
    for (auto& x : b) x = static_cast<long>(rng() % 5) - 2;
    Character chi = T->combine(a), psi = TH->combine(b);
    CHECK(inner_product(induce(psi, E), chi) == inner_product(psi, restrict(chi, E)));
  }
}

TEST_CASE("explicit models reproduce the table") {
  for (auto G : {MatGroup::general_linear(make_ring(2, 1, 1), 2), MatGroup::general_linear(make_ring(2, 2, 1), 2),
                 MatGroup::general_linear(make_ring(2, 1, 1), 3)}) {
    auto T = character_table(G);
    for (const auto& chi : T->irr) {
      ExplicitRep Y = explicit_model(chi);
      CHECK(Y.dim == chi.degree().rational_integer_value());
      CHECK(Y.is_homomorphism());
      CHECK(Y.character() == chi);
    }
  }
}

TEST_CASE("operator images") {
  auto G = MatGroup::general_linear(make_ring(2, 1, 1), 3);
  auto T = character_table(G);
  std::vector<int> all(G->order());
  for (int g = 0; g < G->order(); ++g) all[g] = g;
  SubgroupHandle Gh{SubgroupKind::Other, G, all, nullptr};
  Embedding E = make_embedding(Gh, "G");
  auto Tsub = character_table(E.sub);
  for (const auto& chi : T->irr) {
    ExplicitRep Y = explicit_model(chi);
    Character img = operator_image(Y, subgroup_average(all), E);
    CHECK(img.degree() == CycNum(chi == T->irr[0] ? 1 : 0));
  }
  auto tri = standard_subgroups(G, {1, 2});
  Embedding L = make_embedding(tri.L, "L");
  auto TL = character_table(L.sub);
  for (const auto& chi : T->irr) {
    ExplicitRep Y = explicit_model(chi);
    Character img = operator_image(Y, subgroup_average(tri.U.elems), L);
    // U-invariants as an L-module: nonnegative integer combination of irreducibles
    auto m = TL->decompose(img);
    for (long x : m) CHECK(x >= 0);
    CHECK(TL->combine(m) == img);
  }
}

TEST_CASE("irreducibles over eta in GL2(Z/4)") {
  auto G = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  auto T = character_table(G);
  RMat eta = RMat::from_rows(make_ring(2, 1, 1), {{0, 1}, {0, 0}});
  auto cl = clifford_irreps(G, 1, eta, T);
  CHECK(cl.size() == 2);
  for (const auto& c : cl) {
    CHECK(c.table_index >= 0);
    CHECK(c.chi.degree() == CycNum(3));
  }
  // count oracle: irreducibles whose restriction to K^1 contains phi*_eta
  auto Kh = congruence_kernel(G, 1);
  Embedding K = make_embedding(Kh, "K");
  Character phi = phi_star_character(K.sub, eta, 2);
  int cnt = 0;
  for (const auto& chi : T->irr)
    if (!inner_product_cyc(restrict(chi, K), phi).is_zero()) ++cnt;
  CHECK(cnt == 2);
}
