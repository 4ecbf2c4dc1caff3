#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "grlab/grfunctors.hpp"
#include "grlab/nilpotent.hpp"

using namespace grlab;

namespace {

long gl_irr(int q, int m) {
  static std::map<std::pair<int, int>, long> memo;
  if (m == 0) return 1;
  auto key = std::make_pair(q, m);
  if (!memo.count(key)) memo[key] = MatGroup::general_linear(make_ring(q, 1, 1), m)->num_classes();
  return memo[key];
}

// Label count from the branching graph, written independently of classify_crn: c steps take
// GL_J to GL_{J-2}, each d step to GL_{J-1}, and the first d step comes in two sides.
long triple_count(int r, int J, int q) {
  long A1 = q - 1;
  for (int i = 0; i < r - 2; ++i) A1 *= q;  // |A_{r-1}| = |P0| = |P_x|
  long total = 0;
  for (int t = 0; 2 * t <= J; ++t) {
    int rest = J - 2 * t;
    total += A1 * gl_irr(q, rest) * q;  // 1_H and the q - 1 values of x
    if (rest >= 1) total += A1 * (q - 1) * gl_irr(q, rest - 1);
    for (int s = 1; s <= rest; ++s) total += 2 * A1 * gl_irr(q, rest - s);
  }
  return total;
}

}  // namespace

TEST_CASE("C_{r,n} structure") {
  for (auto [r, n, q] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 3, 2}, {2, 4, 2}, {3, 3, 2}, {3, 4, 2}, {2, 3, 3}}) {
    CAPTURE(r);
    CAPTURE(n);
    CAPTURE(q);
    CrnGroup C = build_crn(r, n, q);
    CHECK(C.order_matches);
    CHECK(C.matches_centralizer == 1);
    CHECK(C.iwahori_bijective);
    CHECK(C.h_normal);
    long qr = q - 1;
    for (int i = 0; i < r - 1; ++i) qr *= q;
    CHECK(C.quotient_order == qr / q * (n == r ? 1 : gl_order_formula(q, 1, n - r)));
  }
  CHECK(build_crn(2, 2, 2).G->order() == 2);
  CHECK(build_crn(2, 3, 2).G->order() == 8);
  CHECK(build_crn(2, 4, 2).G->order() == 192);
  CHECK_THROWS_AS(build_crn(1, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_crn(2, 6, 2, 1000), std::length_error);
}

TEST_CASE("Heisenberg irreducibles") {
  for (auto [r, n, q] : std::vector<std::tuple<int, int, int>>{{2, 3, 2}, {2, 4, 2}, {3, 4, 2}, {2, 3, 3}}) {
    CrnGroup C = build_crn(r, n, q);
    HeisReport h = heis_irreps(C);
    CHECK(h.models_hom);
    CHECK(h.central_characters);
    CHECK(h.orthonormal);
    CHECK(h.sum_squares == h.H->order());
    CHECK(static_cast<long>(h.irreps.size()) == h.H->num_classes());
    long qJ = 1;
    for (int i = 0; i < C.J; ++i) qJ *= q;
    for (const auto& I : h.irreps) CHECK(I.chi.degree() == CycNum(I.x ? qJ : 1));
  }
}

TEST_CASE("orbits of C/H on the linear characters") {
  for (auto [r, n, q] : std::vector<std::tuple<int, int, int>>{{2, 3, 2}, {2, 4, 2}, {2, 5, 2}, {3, 5, 2}, {2, 4, 3}}) {
    CAPTURE(n);
    OrbitReport o = crn_orbits(build_crn(r, n, q));
    CHECK(o.all_match);
    CHECK(o.partition);
  }
}

TEST_CASE("branching labels count the irreducibles") {
  std::vector<std::tuple<int, int, int>> cases{{2, 2, 2}, {2, 3, 2}, {2, 4, 2}, {2, 5, 2}, {3, 3, 2},
                                               {3, 4, 2}, {3, 5, 2}, {2, 2, 3}, {2, 3, 3}, {3, 3, 3}};
  for (auto [r, n, q] : cases) {
    CAPTURE(r);
    CAPTURE(n);
    CAPTURE(q);
    CrnGroup C = build_crn(r, n, q);
    Classification c = classify_crn(C);
    CHECK(c.counts_match);
    CHECK(c.irr_count == triple_count(r, n - r, q));
    CHECK(c.beta_trivial);
    std::set<std::string> names;
    for (const auto& L : c.labels) names.insert(L.str());
    CHECK(names.size() == c.labels.size());
  }
  CHECK(classify_crn(build_crn(2, 2, 2)).irr_count == 2);
  CHECK(classify_crn(build_crn(2, 3, 2)).irr_count == 5);
  CHECK(classify_crn(build_crn(2, 4, 2)).irr_count == 13);
}

TEST_CASE("rho(gamma, psi, Y) for J <= 1 exhausts Irr(C)") {
  for (auto [r, n, q] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 3, 2}, {3, 4, 2}, {2, 2, 3}, {2, 3, 3}}) {
    CAPTURE(r);
    CAPTURE(n);
    CAPTURE(q);
    CrnGroup C = build_crn(r, n, q);
    Classification c = classify_crn(C);
    TablePtr T = character_table(C.G);
    std::set<int> hit;
    for (const auto& L : c.labels) {
      REQUIRE(rho_supported(L));
      int i = T->index_of(rho_construct(C, L));
      CHECK(i >= 0);
      hit.insert(i);
    }
    CHECK(static_cast<int>(hit.size()) == T->size());
  }
  // J = 2: the supported labels are still distinct irreducibles
  CrnGroup C = build_crn(2, 4, 2);
  TablePtr T = character_table(C.G);
  std::set<int> hit;
  long supported = 0;
  for (const auto& L : classify_crn(C).labels)
    if (rho_supported(L)) {
      ++supported;
      int i = T->index_of(rho_construct(C, L));
      CHECK(i >= 0);
      hit.insert(i);
    }
  CHECK(static_cast<long>(hit.size()) == supported);
}

TEST_CASE("psi restriction") {
  CrnGroup C = build_crn(2, 2, 3);
  std::multiset<int> xs;
  for (int psi = 0; psi < 6; ++psi) xs.insert(psi_restriction(C, psi));
  CHECK(xs.count(0) == 2);
  CHECK(xs.count(1) == 2);
  CHECK(xs.count(2) == 2);
}

TEST_CASE("GN is free over GR^{o,1} at the centralizer level") {
  for (auto [n, m, q] : std::vector<std::tuple<int, int, int>>{{2, 1, 2}, {3, 1, 2}, {2, 2, 2}, {2, 1, 3}}) {
    CAPTURE(n);
    CAPTURE(m);
    CAPTURE(q);
    auto rep = freeness_check(2, n, m, q);
    CHECK(!rep.empty());
    for (const auto& f : rep) {
      CAPTURE(f.label.str());
      CHECK(f.product_matches);
      CHECK(f.oracle_agrees);
      CHECK(f.hopf);
      CHECK(f.hopf_pairs > 0);
    }
  }
}

TEST_CASE("eta_2 block of GL_2(Z/4)") {
  GRContext ctx(make_ring(2, 2, 1), 2);
  RMat eta = RMat::from_rows(make_ring(2, 1, 1), {{0, 1}, {0, 0}});
  std::vector<int> blk = ctx.block(2, eta);
  CHECK(static_cast<long>(blk.size()) == classify_crn(build_crn(2, 2, 2)).irr_count);
  for (int lab : blk) {
    GRTensor d = ctx.delta(GRElem::basis(2, lab));
    GRTensor want;
    want.terms[{{0, 0}, {2, lab}}] = 1;
    want.terms[{{2, lab}, {0, 0}}] = 1;
    CHECK(d == want);
  }
}
