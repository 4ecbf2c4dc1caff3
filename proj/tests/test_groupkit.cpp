#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "grlab/groupkit.hpp"

using namespace grlab;

TEST_CASE("build_group orders") {
  auto G1 = MatGroup::general_linear(make_ring(2, 2, 1), 1);
  CHECK(G1->order() == 2);
  CHECK(G1->key(0) == 1);
  CHECK(G1->key(1) == 3);
  auto G2 = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  CHECK(G2->order() == 96);
  CHECK(G2->order() == gl_order_formula(2, 2, 2));
  auto G3 = MatGroup::general_linear(make_ring(2, 1, 2), 2);
  CHECK(G3->order() == 180);
  EnumCaps tiny;
  tiny.group = 50;
  CHECK_THROWS_AS(MatGroup::general_linear(make_ring(2, 2, 1), 2, tiny), std::length_error);
}

TEST_CASE("group axioms by brute force") {
  auto G = MatGroup::general_linear(make_ring(3, 1, 1), 2);
  CHECK(G->order() == 48);
  for (int a = 0; a < G->order(); ++a) {
    CHECK(G->mul(a, G->inv(a)) == G->identity());
    CHECK(G->element(G->mul(a, 5)) == G->element(a) * G->element(5));
  }
}

TEST_CASE("conjugacy classes") {
  auto G1 = MatGroup::general_linear(make_ring(2, 2, 1), 1);
  CHECK(G1->num_classes() == 2);
  auto S3 = MatGroup::general_linear(make_ring(2, 1, 1), 2);
  CHECK(S3->num_classes() == 3);
  std::multiset<long> sizes;
  for (int c = 0; c < 3; ++c) sizes.insert(S3->class_size(c));
  CHECK(sizes == std::multiset<long>{1, 2, 3});
  CHECK(S3->class_rep(0) == S3->identity());
  auto G2 = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  long tot = 0;
  for (int c = 0; c < G2->num_classes(); ++c) {
    tot += G2->class_size(c);
    // representative is the minimal element of its class
    for (int x : G2->class_elems(c)) CHECK(G2->key(x) >= G2->key(G2->class_rep(c)));
  }
  CHECK(tot == 96);
  // brute-force class partition oracle
  std::set<std::set<int>> brute;
  for (int x = 0; x < 96; ++x) {
    std::set<int> cl;
    for (int g = 0; g < 96; ++g) cl.insert(G2->conj(g, x));
    brute.insert(cl);
  }
  CHECK(static_cast<int>(brute.size()) == G2->num_classes());
}

TEST_CASE("standard subgroups") {
  auto G = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  auto T = standard_subgroups(G, {1, 1});
  CHECK(T.U.order() == 4);
  CHECK(T.V.order() == 4);
  CHECK(T.L.order() == 4);
  CHECK(iwahori_injective(G, T));
  auto T0 = standard_subgroups(G, {2, 0});
  CHECK(T0.U.order() == 1);
  CHECK(T0.V.order() == 1);
  CHECK(T0.L.order() == 96);
  CHECK_THROWS(standard_subgroups(G, {1, 2}));
  auto K = congruence_kernel(G, 1);
  CHECK(K.order() == 16);
  for (int a : K.elems)
    for (int b : K.elems) CHECK(G->mul(a, b) == G->mul(b, a));
  // K^1 normal and K^1 -> (Mat_2(F_2), +) bijective
  std::set<uint64_t> img;
  for (int k : K.elems) {
    RMat M = G->element(k);
    RMat a(make_ring(2, 1, 1), 2, 2);
    for (int e = 0; e < 4; ++e) a.a[e] = ((M.a[e] - (e % 3 == 0 ? 1 : 0)) / 2) % 2;
    img.insert(a.key());
    for (int g = 0; g < 96; ++g) CHECK(K.contains(G->conj(g, k)));
  }
  CHECK(img.size() == 16);
}

TEST_CASE("Iwahori injectivity for GL_3 compositions") {
  auto G = MatGroup::general_linear(make_ring(2, 1, 1), 3);
  for (auto comp : std::vector<std::vector<int>>{{1, 2}, {2, 1}, {1, 1, 1}, {3}}) {
    auto T = standard_subgroups(G, comp);
    CHECK(iwahori_injective(G, T));
  }
}

TEST_CASE("associativity of U subgroups at group level") {
  auto G = MatGroup::general_linear(make_ring(2, 2, 1), 3);
  auto G2 = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  auto U12 = standard_subgroups(G2, {1, 1}).U;  // U_{n1,n2} inside G_2
  auto U2_1 = standard_subgroups(G, {2, 1}).U;  // U_{n1+n2,n3}
  auto U1_2 = standard_subgroups(G, {1, 2}).U;  // U_{n1,n2+n3}
  std::set<int> lhs, rhs;
  for (int a : U12.elems)
    for (int b : U2_1.elems) lhs.insert(G->mul(G->find(embed_block(G2->element(a), 3, 0)), b));
  for (int a : U12.elems)
    for (int b : U1_2.elems) rhs.insert(G->mul(G->find(embed_block(G2->element(a), 3, 1)), b));
  CHECK(lhs == rhs);
  CHECK(lhs.size() == 64);
}

TEST_CASE("stabilizers and orbits") {
  auto F2 = make_ring(2, 1, 1);
  auto G = MatGroup::general_linear(F2, 2);
  RMat zero(F2, 2, 2);
  CHECK(stabilizer(G, zero).order() == 6);
  CHECK(char_orbit(G, zero).size() == 1);
  RMat eta = RMat::from_rows(F2, {{0, 1}, {0, 0}});
  CHECK(stabilizer(G, eta).order() == 2);
  CHECK(char_orbit(G, eta).size() == 3);
  RMat C = companion(F2, {1, 1, 1});
  auto St = stabilizer(G, C);
  CHECK(St.order() == 3);
  CHECK(char_orbit(G, C).size() * St.order() == 6);
  auto Z4 = make_ring(2, 2, 1);
  auto H = MatGroup::general_linear(Z4, 2);
  for (const auto& c : similarity_classes(Z4, 2, 1))
    CHECK(char_orbit(H, c.rep).size() * stabilizer(H, c.rep).order() == 96);
}

TEST_CASE("subgroup as standalone group") {
  auto G = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  auto K = congruence_kernel(G, 1).as_group("K1");
  CHECK(K->order() == 16);
  CHECK(K->num_classes() == 16);
  CHECK(K->exponent() == 2);
}
