// Verification suites shared by the acceptance binary and the command-line driver. Every check is
// an exact comparison; items that are out of reach are listed as skipped and never count as passes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grlab/grfunctors.hpp"

namespace grlab {

struct CheckItem {
  std::string what;
  bool ok = false;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckItem> items;
  std::vector<std::string> skipped;
  std::string error;  // exception text, counts as a failure
  double seconds = 0;

  void check(bool ok, std::string what) { items.push_back({std::move(what), ok}); }
  long checks() const { return static_cast<long>(items.size()); }
  long failed() const;
  bool passed() const { return error.empty() && failed() == 0; }
};

// Commutativity, associativity, unit, counit, coassociativity, adjointness and
// Delta(a o b) = Delta a o Delta b on all basis elements of total degree <= N.
SuiteResult suite_bialgebra(const GRContext& C, int N);
// Product terms lie in the block of the block-sum class and coproduct terms split the class.
SuiteResult suite_grading(const GRContext& C, int N);
// Inflation from level one to level two commutes with o and Delta, degree <= N.
SuiteResult suite_inflation(int p, int d, int N);
// (1) + (0) over C; the Hill variant also at one level higher.
SuiteResult suite_primary(const GRContext& C);
// Every chi in Irr(GL_1)^n.
SuiteResult suite_principal(const GRContext& C, int n);
// l = 2, p = 2, d = 2, m <= m_max, and the d = 1 twist over Z/4.
SuiteResult suite_basechange_even(int m_max);
// l = 3, p = 2, d = 2, m = 1.
SuiteResult suite_basechange_odd();
// C_{2,n} for n <= nmax, freeness n -> n + 1 for n <= free_max.
SuiteResult suite_nilpotent(int q, int nmax, int free_max);
// Strongly cuspidal level-one characters of GL_1 with their GS(rho) data up to degree D.
SuiteResult suite_psh(const GRContext& C, int D);
// pind adjointness pathway against the bimodule pathway, and e_U e_V against e_V e_U.
SuiteResult suite_oracle(const GRContext& C, int N, long order_cap);
// Random Hopf and adjointness instances; the seed only picks instances.
SuiteResult suite_hopf_search(const GRContext& C, int N, long budget, uint64_t seed);

}  // namespace grlab
