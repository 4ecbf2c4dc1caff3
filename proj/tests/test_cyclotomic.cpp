#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "grlab/cyclotomic.hpp"

using namespace grlab;

TEST_CASE("basic identities") {
  CHECK(CycNum::zeta(4) * CycNum::zeta(4) == CycNum(-1));
  CHECK((CycNum(1) + CycNum::zeta(3) + CycNum::zeta(3, 2)).is_zero());
  CHECK(CycNum::zeta(2).embed(8) == CycNum::zeta(8, 4));
  CHECK(CycNum::zeta(2).embed(8) == CycNum(-1));
  CHECK(CycNum::zeta(8).conj() == CycNum::zeta(8, 7));
  CHECK((CycNum(3) + CycNum::zeta(4) * 0).rational_integer_value() == 3);
  CHECK_THROWS(CycNum::zeta(3).rational_integer_value());
  CHECK_THROWS(CycNum(1) / CycNum(0));
}

TEST_CASE("mixed conductors embed into the lcm") {
  CycNum a = CycNum::zeta(3) + CycNum::zeta(4);
  CHECK(a.conductor() == 12);
  CHECK(a - CycNum::zeta(4) == CycNum::zeta(3));
  CHECK(CycNum::zeta(6) == -CycNum::zeta(3, 2));
}

TEST_CASE("text round trip") {
  CycNum a = CycNum(Rat(3, 2)) - CycNum::zeta(8, 3) * 2;
  CHECK(CycNum::parse(a.str()) == a);
  CHECK(CycNum::parse("0@5").is_zero());
  CHECK(CycNum(7).str() == "7@1");
}

TEST_CASE("field axioms on random triples") {
  std::mt19937 rng(7);
  for (int m : {1, 3, 4, 5, 8, 9, 12, 15}) {
    auto rnd = [&] {
      CycNum x(0);
      for (int k = 0; k < m; ++k) x += CycNum::zeta(m, k) * CycNum(Rat(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3));
      return x;
    };
    for (int it = 0; it < 5; ++it) {
      CycNum a = rnd(), b = rnd(), c = rnd();
      CHECK((a + b) * c == a * c + b * c);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * b == b * a);
      CHECK(a.conj().conj() == a);
      CHECK((a * b).conj() == a.conj() * b.conj());
      if (!a.is_zero()) CHECK(a * a.inverse() == CycNum(1));
      if (!b.is_zero()) CHECK((a / b) * b == a);
    }
  }
}

TEST_CASE("norm of a nonzero element is a positive rational") {
  CycNum a = CycNum(1) + CycNum::zeta(5) * 2;
  CycNum n = a * a.conj();
  CHECK(n.galois(2) * n == n * n.galois(2));
  Rat prod = 1;
  CycNum full(1);
  for (long k : {1, 2, 3, 4}) full *= a.galois(k);
  CHECK(full.is_rational());
  CHECK(full.rational_value() != 0);
}
