// Symmetric functions (the universal PSH algebra), strong cuspidality, GS(rho) comparison and the
// principal series of GL_n(o_l).
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "grlab/grfunctors.hpp"

namespace grlab {

using Partition = std::vector<int>;  // weakly decreasing, positive parts

std::vector<Partition> partitions(int k);
long partition_count(int k);

// Integer combination of Schur functions.
struct SymFunc {
  std::map<Partition, long> terms;

  static SymFunc schur(const Partition& la);
  static SymFunc h(int k) { return k == 0 ? schur({}) : schur({k}); }
  SymFunc& operator+=(const SymFunc& o);
  bool operator==(const SymFunc& o) const { return terms == o.terms; }
  void prune();
  std::string str() const;
};

using SymTensor = std::map<std::pair<Partition, Partition>, long>;

constexpr int kSymDegreeCap = 6;

// All three go through explicit polynomials in enough variables, decomposed back into Schur
// functions by peeling off leading monomials; no Littlewood-Richardson tables are used.
SymFunc sym_mult(const SymFunc& a, const SymFunc& b);
SymTensor sym_comult(const SymFunc& a);
long sym_form(const SymFunc& a, const SymFunc& b);
SymFunc h_product(const Partition& mu);

// Level of an irreducible of GL_n(o_l): the largest k with K^k acting nontrivially, 0 if K^1 acts
// trivially.
int rep_level(const GRContext& C, int n, int label);
// Level 0: cuspidal (pres vanishes on every proper two-part composition). Level l-1 >= 1: the class
// of the top congruence restriction has irreducible characteristic polynomial. Other levels are
// reported through a context at the matching ring level; throws here.
bool is_strongly_cuspidal(const GRContext& C, int n, int label);

struct PSHReport {
  Basis rho;
  int D = 0;
  int degree_shift = 1;                  // rho sits in GL_{shift}; degree k lives in GL_{k * shift}
  std::vector<long> counts;              // constituents of rho^{o k}, k = 0..D
  std::vector<long> partition_counts;    // p(k)
  std::vector<std::vector<Basis>> constituents;  // by first appearance
  std::vector<std::vector<std::vector<long>>> gram;      // <h_mu(rho), h_nu(rho)>, mu, nu |- k
  std::vector<std::vector<std::vector<long>>> sym_gram;  // <h_mu, h_nu>
  bool consistent = false;
  std::vector<std::string> notes;
};

// h_k(rho) is the unique multiplicity-one constituent of h_{k-1}(rho) o rho that also has
// multiplicity one in rho^{o k}; for k = 2 the first such constituent is taken (the choice is
// the involution omega, which preserves every Gram matrix).
PSHReport gs_compare(const GRContext& C, const Basis& rho, int D);

struct PrincipalSeriesReport {
  std::vector<int> chi;        // labels of GL_1 characters on the diagonal torus
  bool character_identity = false;  // pres pind chi = sum over S_n of chi^sigma as class functions
  bool multiset_identity = false;   // the same identity in the standard basis of R(T)
  long self_form = 0;
  long stabilizer_order = 0;
  bool holds() const { return character_identity && multiset_identity && self_form == stabilizer_order; }
};

PrincipalSeriesReport principal_series_check(const GRContext& C, const std::vector<int>& chi);

}  // namespace grlab
