// Acceptance suite: one PASS/FAIL line per criterion, exact equality throughout.
#include <cstdio>
#include <string>
#include <vector>

#include "grlab/suites.hpp"

using namespace grlab;

namespace {

int report(int id, const char* title, const std::vector<SuiteResult>& parts) {
  long checks = 0, failed = 0;
  double secs = 0;
  std::vector<std::string> notes;
  for (const SuiteResult& r : parts) {
    checks += r.checks();
    failed += r.failed() + (r.error.empty() ? 0 : 1);
    secs += r.seconds;
    if (!r.error.empty()) notes.push_back(r.name + ": exception: " + r.error);
    for (const CheckItem& c : r.items)
      if (!c.ok && notes.size() < 6) notes.push_back(r.name + ": " + c.what);
    for (const std::string& s : r.skipped) notes.push_back(r.name + ": skipped: " + s);
  }
  // a criterion with nothing checked is not a pass
  bool pass = failed == 0 && checks > 0;
  std::printf("%s %2d %s: %ld checks, %ld failed, %.1f s\n", pass ? "PASS" : "FAIL", id, title, checks, failed, secs);
  for (const std::string& n : notes) std::printf("       %s\n", n.c_str());
  std::fflush(stdout);
  return pass ? 0 : 1;
}

}  // namespace

int main() {
  GRContext F2(make_ring(2, 1, 1), 3), Z4(make_ring(2, 2, 1), 2), Z9(make_ring(3, 2, 1), 2), Z8(make_ring(2, 3, 1), 2);
  int failures = 0;
  failures += report(1, "bialgebra axioms (Z/2 deg <= 3, Z/4 and Z/9 deg <= 2)",
                     {suite_bialgebra(F2, 3), suite_bialgebra(Z4, 2), suite_bialgebra(Z9, 2)});
  // over Z/2 every grading is the empty class
  failures += report(2, "gradings of products and coproducts (Z/4, Z/9)", {suite_grading(Z4, 2), suite_grading(Z9, 2)});
  failures += report(3, "inflation GR^{o,1} -> GR^{o,2}, p = 2, deg <= 2", {suite_inflation(2, 1, 2)});
  failures += report(4, "primary decomposition for (1) + eta over Z/4, Hill variant", {suite_primary(Z4)});
  failures += report(5, "principal series (GL_2(Z/4), GL_2(Z/9), GL_3(F_2), GL_2(Z/8))",
                     {suite_principal(Z4, 2), suite_principal(Z9, 2), suite_principal(F2, 3), suite_principal(Z8, 2)});
  failures += report(6, "even base change l = 2, p = 2, d = 2, m <= 2; d = 1 twist", {suite_basechange_even(2)});
  failures += report(7, "odd base change machinery l = 3, p = 2, d = 2, m = 1", {suite_basechange_odd()});
  failures += report(8, "C_{2,n} classification (q = 2, n <= 5; q = 3, n <= 3), freeness and Hopf formula",
                     {suite_nilpotent(2, 5, 2), suite_nilpotent(3, 3, 1)});
  failures += report(9, "PSH data for strongly cuspidal level one characters of GL_1(Z/4)", {suite_psh(Z4, 2)});
  failures += report(10, "oracle equivalence for pind and e_U e_V vs e_V e_U (|G| <= 5000)",
                     {suite_oracle(F2, 3, 5000), suite_oracle(Z4, 2, 5000), suite_oracle(Z9, 2, 5000)});
  return failures ? 1 : 0;
}
