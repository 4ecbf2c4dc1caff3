#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grlab/pshseries.hpp"

using namespace grlab;

namespace {

// Number of nonnegative integer matrices with row sums mu and column sums nu.
long count_matrices(std::vector<int> rows, std::vector<int> cols) {
  if (rows.empty()) return std::all_of(cols.begin(), cols.end(), [](int c) { return c == 0; }) ? 1 : 0;
  int r = rows.back();
  rows.pop_back();
  long total = 0;
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j == cols.size()) {
      if (left == 0) total += count_matrices(rows, cols);
      return;
    }
    for (int x = 0; x <= std::min(left, cols[j]); ++x) {
      cols[j] -= x;
      rec(j + 1, left - x);
      cols[j] += x;
    }
  };
  rec(0, r);
  return total;
}

}  // namespace

TEST_CASE("symmetric functions by monomial expansion") {
  SymFunc s1 = SymFunc::schur({1});
  SymFunc p = sym_mult(s1, s1);
  CHECK(p.terms == std::map<Partition, long>{{{2}, 1}, {{1, 1}, 1}});
  for (int k = 0; k <= 4; ++k)
    for (const auto& a : partitions(k))
      for (const auto& b : partitions(k)) CHECK(sym_form(SymFunc::schur(a), SymFunc::schur(b)) == (a == b ? 1 : 0));
  SymTensor d = sym_comult(SymFunc::schur({2}));
  CHECK(d == SymTensor{{{{2}, {}}, 1}, {{{1}, {1}}, 1}, {{{}, {2}}, 1}});
  CHECK(partition_count(5) == 7);
  CHECK_THROWS(sym_mult(SymFunc::schur({4}), SymFunc::schur({3})));
}

TEST_CASE("symmetric function invariants") {
  // h-Gram matrix equals the transportation count
  for (int k = 1; k <= 4; ++k)
    for (const auto& a : partitions(k))
      for (const auto& b : partitions(k)) CHECK(sym_form(h_product(a), h_product(b)) == count_matrices(a, b));
  // commutativity, nonnegativity, and the Hopf identity Delta(ab) = Delta(a)Delta(b) on Schur pairs
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 3; ++j)
      for (const auto& a : partitions(i))
        for (const auto& b : partitions(j)) {
          SymFunc x = SymFunc::schur(a), y = SymFunc::schur(b);
          SymFunc xy = sym_mult(x, y);
          CHECK(xy == sym_mult(y, x));
          for (const auto& [la, c] : xy.terms) CHECK(c > 0);
          SymTensor lhs = sym_comult(xy), rhs;
          for (const auto& [k1, v1] : sym_comult(x))
            for (const auto& [k2, v2] : sym_comult(y)) {
              SymFunc f = sym_mult(SymFunc::schur(k1.first), SymFunc::schur(k2.first));
              SymFunc g = sym_mult(SymFunc::schur(k1.second), SymFunc::schur(k2.second));
              for (const auto& [p, cp] : f.terms)
                for (const auto& [q, cq] : g.terms) rhs[{p, q}] += v1 * v2 * cp * cq;
            }
          CHECK(lhs == rhs);
        }
}

TEST_CASE("strong cuspidality") {
  GRContext F(make_ring(2, 1, 1), 2);
  int triv = F.table(2)->trivial_index();
  CHECK_FALSE(is_strongly_cuspidal(F, 2, triv));
  // GL_2(F_2) = S_3: trivial o trivial = 1 + Steinberg, so the only cuspidal irreducible is the sign
  int found = 0;
  for (int t = 0; t < F.num_irr(2); ++t) {
    bool sign = t != triv && F.character(2, t).degree() == CycNum(1);
    CHECK(is_strongly_cuspidal(F, 2, t) == sign);
    found += sign;
  }
  CHECK(found == 1);
  GRContext Z4(make_ring(2, 2, 1), 2);
  for (int t = 0; t < Z4.num_irr(1); ++t) {
    bool nontriv = t != Z4.table(1)->trivial_index();
    CHECK(rep_level(Z4, 1, t) == (nontriv ? 1 : 0));
    CHECK(is_strongly_cuspidal(Z4, 1, t));
  }
}

TEST_CASE("GS comparison for a level one character of GL_1(Z/4)") {
  GRContext C(make_ring(2, 2, 1), 2);
  int rho = 1 - C.table(1)->trivial_index();
  auto r = gs_compare(C, {1, rho}, 2);
  CHECK(r.consistent);
  CHECK(r.counts == std::vector<long>{1, 1, 2});
  CHECK(r.gram[2] == std::vector<std::vector<long>>{{1, 1}, {1, 2}});
  GRElem rr = C.circle(GRElem::basis(1, rho), GRElem::basis(1, rho));
  CHECK(C.form(rr, rr) == 2);
  // cross-primary product
  GRElem x = C.circle(GRElem::basis(1, rho), GRElem::basis(1, 1 - rho));
  CHECK(C.form(x, x) == 1);
}

TEST_CASE("GS comparison at level zero over F_2 up to degree 3") {
  GRContext C(make_ring(2, 1, 1), 3);
  auto r = gs_compare(C, {1, 0}, 3);
  CHECK(r.consistent);
  CHECK(r.counts == std::vector<long>{1, 1, 2, 3});
}

TEST_CASE("principal series") {
  GRContext Z4(make_ring(2, 2, 1), 2);
  auto t = Z4.table(1)->trivial_index();
  auto a = principal_series_check(Z4, {t, t});
  CHECK(a.holds());
  CHECK(a.self_form == 2);
  auto b = principal_series_check(Z4, {0, 1});
  CHECK(b.holds());
  CHECK(b.self_form == 1);
  GRContext F2(make_ring(2, 1, 1), 3);
  auto c = principal_series_check(F2, {0, 0, 0});
  CHECK(c.holds());
  CHECK(c.self_form == 6);
}
