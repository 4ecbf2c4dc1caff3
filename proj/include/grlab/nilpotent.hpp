// Nilpotent classes with one Jordan block at level 2: the centralizer C_{r,n} of eta_n over the
// residue field, its Heisenberg subgroup, the branching-graph labels of Irr(C_{r,n}), and the
// module structure of GN_eta over GR^{o,1} at the centralizer level.
#pragma once

#include <string>
#include <vector>

#include "grlab/groupkit.hpp"
#include "grlab/repkit.hpp"

namespace grlab {

struct CrnGroup {
  int r = 2, n = 2, q = 2, J = 0;  // J = n - r
  RingPtr k;
  RMat eta;
  GroupPtr G;
  SubgroupHandle H, center, V, Vstar, levi, A;
  long predicted_order = 0;
  bool order_matches = false;
  int matches_centralizer = -1;  // against the stabilizer of eta in GL_n(k); -1 when not enumerated
  bool iwahori_bijective = false;  // V* x (A_r x GL_J) x V -> C
  bool h_normal = false;
  long quotient_order = 0;         // |C / H|

  // coordinates
  int a0(int g) const;
  std::vector<int> b(int g) const;  // row entries (0, r + i): V
  std::vector<int> c(int g) const;  // column entries (r + i, r - 1): V*
  int z(int g) const;               // entry (0, r - 1)
  RMat D(int g) const;              // GL_J block
  RMat a_block(int g) const;        // r x r block
};

// n >= r >= 2, q prime or a prime power.
CrnGroup build_crn(int r, int n, int q, long cap = 200000);

// ------------------------------------------------------------------ Heisenberg irreducibles

struct HeisIrrep {
  int x = 0;  // nonzero: W_x; zero: the linear character W_(f,v)
  std::vector<int> f, v;  // f pairs with the V* coordinates, v with the V coordinates
  Character chi;          // on the standalone H
};

struct HeisReport {
  GroupPtr H;
  std::vector<HeisIrrep> irreps;
  long big = 0, small = 0;
  long sum_squares = 0;
  bool models_hom = false;        // every W_x model is a homomorphism
  bool central_characters = false;  // W_x restricted to A^{r-1} is dim * phi(x .)
  bool orthonormal = false;
};
HeisReport heis_irreps(const CrnGroup& C);

// ------------------------------------------------------------------ orbits of C/H on Irr(H)

struct OrbitCheck {
  std::string type;          // "1", "3", "4a", "4b", "5"
  std::vector<int> f, v;
  long stabilizer = 0;       // computed in C
  long predicted = 0;        // |H| |A_{r-1}| |shape|
  bool shape_matches = false;  // {a0^-1 D} equals the displayed shape in GL_J
  long orbit = 0;
};

struct OrbitReport {
  std::vector<OrbitCheck> orbits;
  bool all_match = false;
  bool partition = false;  // orbit sizes add up to q^{2J}
};
OrbitReport crn_orbits(const CrnGroup& C);

// ------------------------------------------------------------------ branching labels

struct BranchingLabel {
  enum class Terminal { OneH, X, Y, D };
  int t = 0;      // c steps
  int s = 0;      // d steps (terminal D only)
  Terminal term = Terminal::OneH;
  int param = 0;  // x or y (code in k), or the side of the first d step: 0 orbit of (f,0), 1 of (0,v)
  int psi = 0;    // index in Irr(A_r)
  int delta = 0;
  int Y = 0;      // index in Irr(GL_delta(k))
  std::string str() const;
};

struct Classification {
  std::vector<BranchingLabel> labels;
  long irr_count = 0;  // conjugacy classes of C_{r,n}
  bool counts_match = false;
  OrbitReport orbits;
  bool beta_trivial = false;  // tr(eta c d) = 0 on the checked pairs
  long beta_pairs = 0;
};
Classification classify_crn(const CrnGroup& C);

// Restriction of psi in Irr(A_r) to A^{r-1} as an element x of k.
int psi_restriction(const CrnGroup& C, int psi);

// rho(gamma, psi, Y)_{r,n}; supported for types (i), (ii), (iii) and (vii) with t = 0, s = 1.
bool rho_supported(const BranchingLabel& L);
Character rho_construct(const CrnGroup& C, const BranchingLabel& L);

// ------------------------------------------------------------------ products at the centralizer level

// The product X o rho into C_{r,n+m} through e_U e_V with L = C_{r,n} x GL_m(k), U and V the
// block-unipotent parts meeting C_{r,n+m}. mult[i] is the multiplicity of Irr(C_{r,n+m})[i].
struct CentralizerProduct {
  std::vector<long> mult;         // through the support-projection weights
  std::vector<long> mult_oracle;  // through operator images on explicit models
  Character character;
};
CentralizerProduct centralizer_product(const CrnGroup& big, const CrnGroup& small, const Character& rho,
                                       const Character& W, bool with_oracle);

struct FreenessReport {
  BranchingLabel label;  // at (r, n), Y trivial
  int W = 0;             // index in Irr(GL_m(k))
  bool product_matches = false;  // W o rho(gamma,psi,1)_{r,n} = rho(gamma,psi,W)_{r,n+m}
  bool oracle_agrees = false;
  bool hopf = false;             // Delta_1(W o rho) = Delta_1(W) Delta_1(rho), pairing with all W1 (x) Y
  long hopf_pairs = 0;
};
// Every label at (r, n) with delta = 0 and every W in Irr(GL_m(k)).
std::vector<FreenessReport> freeness_check(int r, int n, int m, int q);

}  // namespace grlab
