#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grlab/grfunctors.hpp"

using namespace grlab;

namespace {

long degree(const GRContext& C, const Basis& b) {
  return b.first == 0 ? 1 : C.character(b.first, b.second).degree().rational_integer_value();
}

GRElem convolve_check_idempotent(const MatGroup& G, const GAElem& pi, bool& idem, bool& selfadj) {
  GAElem sq = ga_mul(G, pi, pi);
  idem = sq == pi;
  selfadj = true;
  for (const auto& [g, c] : pi) {
    auto it = pi.find(G.inv(g));
    if (it == pi.end() || it->second != c) selfadj = false;
  }
  return {};
}

}  // namespace

TEST_CASE("support projection is a self-adjoint idempotent") {
  auto G = MatGroup::general_linear(make_ring(2, 2, 1), 2);
  auto tri = standard_subgroups(G, {1, 1});
  for (bool swap : {false, true}) {
    auto pi = swap ? support_projection(*G, tri.V.elems, tri.U.elems) : support_projection(*G, tri.U.elems, tri.V.elems);
    bool idem = false, sa = false;
    convolve_check_idempotent(*G, pi, idem, sa);
    CHECK(idem);
    CHECK(sa);
    // absorbs the image of a = e_U e_V e_U
    const auto& A = swap ? tri.V.elems : tri.U.elems;
    const auto& B = swap ? tri.U.elems : tri.V.elems;
    GAElem a = ga_mul(*G, ga_mul(*G, subgroup_average(A), subgroup_average(B)), subgroup_average(A));
    CHECK(ga_mul(*G, pi, a) == a);
  }
}

TEST_CASE("product of trivial characters over F_2") {
  GRContext C(make_ring(2, 1, 1), 3);
  GRElem p = C.circle(GRElem::basis(1, 0), GRElem::basis(1, 0));
  REQUIRE(p.terms.size() == 2);
  std::vector<long> d;
  for (const auto& [k, v] : p.terms) {
    CHECK(v == 1);
    d.push_back(degree(C, k));
  }
  std::sort(d.begin(), d.end());
  CHECK(d == std::vector<long>{1, 2});
  CHECK(C.circle(GRElem::unit(), GRElem::basis(2, 2)) == GRElem::basis(2, 2));
}

TEST_CASE("pres examples over Z/4") {
  GRContext C(make_ring(2, 2, 1), 2);
  for (int t = 0; t < C.num_irr(2); ++t) {
    GRTensor id = C.pres(2, t, {2, 0});
    CHECK(id.terms.size() == 1);
    CHECK(id.terms.begin()->first == std::vector<Basis>{{2, t}, {0, 0}});
    CHECK(C.form(GRElem::basis(2, t), GRElem::basis(2, t)) == 1);
  }
  GRTensor p = C.pres(2, 0, {1, 1});
  CHECK(p.terms[{{1, 0}, {1, 0}}] >= 1);
}

TEST_CASE("commutativity and adjointness over Z/4") {
  GRContext C(make_ring(2, 2, 1), 2);
  for (int a = 0; a < C.num_irr(1); ++a)
    for (int b = 0; b < C.num_irr(1); ++b) {
      GRElem x = GRElem::basis(1, a), y = GRElem::basis(1, b);
      CHECK(C.circle(x, y) == C.circle(y, x));
      for (int c = 0; c < C.num_irr(2); ++c) {
        GRTensor xy;
        xy.terms[{{1, a}, {1, b}}] = 1;
        CHECK(C.form(C.circle(x, y), GRElem::basis(2, c)) == C.form(xy, C.delta(GRElem::basis(2, c))));
      }
    }
}

TEST_CASE("three pind pathways agree") {
  for (auto [ell, nmax] : {std::pair{1, 3}, std::pair{2, 2}}) {
    GRContext C(make_ring(2, ell, 1), nmax);
    for (int n1 = 1; n1 < nmax; ++n1) {
      int n2 = (nmax == 3 ? 3 : 2) - n1;
      for (int a = 0; a < C.num_irr(n1); ++a)
        for (int b = 0; b < C.num_irr(n2); ++b) {
          std::vector<Basis> f{{n1, a}, {n2, b}};
          GRElem direct = C.pind(f);
          CHECK(C.pind_adjoint(f) == direct);
          auto o = C.pind_oracle(f);
          CHECK(o.product == direct);
          CHECK(o.uv_equals_vu);
          CHECK(o.image_matches_pres);
        }
    }
  }
}

TEST_CASE("coassociativity on GL_2(Z/4)") {
  GRContext C(make_ring(2, 2, 1), 2);
  for (int t = 0; t < C.num_irr(2); ++t) {
    GRTensor d = C.delta(GRElem::basis(2, t));
    CHECK(C.delta_tensor(d, 0) == C.delta_tensor(d, 1));
  }
}

TEST_CASE("gradings") {
  GRContext C(make_ring(2, 2, 1), 2);
  RMat eta = RMat::from_rows(make_ring(2, 1, 1), {{0, 1}, {0, 0}});
  auto blk = C.block(2, eta);
  CHECK(blk.size() == 2);
  for (int t : blk) CHECK(degree(C, {2, t}) == 3);
  GRContext low(make_ring(2, 1, 1), 2);
  for (int t = 0; t < low.num_irr(2); ++t) {
    GRElem inf = C.inflate_from(low, GRElem::basis(2, t));
    CHECK(C.grading(2, inf.terms.begin()->first.second) == RMat(make_ring(2, 1, 1), 2, 2));
  }
  CHECK(C.inflate_from(low, GRElem::basis(2, 0)) == GRElem::basis(2, 0));
  GRElem x = GRElem::basis(1, 0);
  CHECK(C.inflate_from(low, low.circle(x, x)) == C.circle(C.inflate_from(low, x), C.inflate_from(low, x)));
}

TEST_CASE("primary decomposition and the idempotent variants over Z/8") {
  auto F2 = make_ring(2, 1, 1);
  GRContext C(make_ring(2, 3, 1), 2);
  RMat one = RMat::from_rows(F2, {{1}}), zero = RMat::from_rows(F2, {{0}});
  auto r = C.primary_equiv(one, zero);
  CHECK(r.count_identity);
  CHECK(r.block_count == 4);
  CHECK(r.pind_bijective);
  CHECK(r.form_preserving);
  auto b = C.bottom_row(one, zero);
  CHECK(b.group_order == 256);
  CHECK(b.num_X == 4);
  CHECK(b.hill_agrees);
  CHECK(b.images_irreducible);
  CHECK(b.reduction_instances == 2);
  CHECK(b.reduction_holds);
  CHECK_THROWS(C.primary_equiv(one, one));
}
