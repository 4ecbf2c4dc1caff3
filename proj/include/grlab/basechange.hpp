// Base change GL_{md}(o_l) -> GL_m(O_l) on f-primary blocks: the even-level transfer, and at odd
// level the Heisenberg data (N, beta), the intertwiners S_g, the cocycle gamma and its
// trivializations.
#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "grlab/chainlinalg.hpp"
#include "grlab/cyclotomic.hpp"
#include "grlab/groupkit.hpp"

namespace grlab {

// Elements of Z[zeta_e] as e coefficients on zeta^0..zeta^{e-1}, e a prime power; the
// representation is not unique, compare through zz_equal.
using ZZ = std::vector<long>;
bool zz_equal(const ZZ& a, const ZZ& b);
CycNum zz_value(const ZZ& a);

// ---------------------------------------------------------------- Heisenberg data

struct HeisenbergData {
  int p = 2, k = 1, ell = 3, m = 1, d = 1;
  RMat M;      // m x m over GR(p^k, d)
  RMat M_emb;  // md x md over o_k
  AZSplit az;  // over o_l
  AZSplit az1; // over o_{k+1}
  int dimN = 0, sizeN = 1;
  int e = 2;  // coefficient root order: p, or 4 when p = 2 (twisted characters of isotropic
              // subgroups need a square root of -1)
  std::vector<RMat> zbar;        // Z-bar element of each code, md x md over F_p
  std::vector<RMat> zlift;       // digit lift of the coordinates to Z over o_l
  std::vector<int> add_, neg_;   // group law of N in codes
  std::vector<int> beta_;        // beta(h1,h2) = zeta_p^{beta_[h1 * sizeN + h2]}
  std::unordered_map<uint64_t, int> index_;  // zbar key -> code

  int add(int a, int b) const { return add_[a * sizeN + b]; }
  int neg(int a) const { return neg_[a]; }
  int beta(int a, int b) const { return beta_[a * sizeN + b]; }
  int bexp(int a, int b) const { return beta(a, b) * (e / p); }  // in zeta_e units
  int pairing(int a, int b) const { return ((beta(a, b) - beta(b, a)) % p + p) % p; }
  int code_of(const RMat& zb) const;  // -1 when zb is not in Z-bar
  // Codes supported in the (i, j) block of the m x m block decomposition (d x d blocks).
  std::vector<int> block_part(int i, int j) const;
};

// M over GR(p^k, d); l = 2k + 1.
HeisenbergData heisenberg(const RMat& M, int ell);

// G = GL_m(O_{k+1})(M), fully enumerated.
GroupPtr odd_stabilizer(const HeisenbergData& H);

// Conjugation action of a subgroup of GL_m(O_{k+1})(M) on N.
struct GAction {
  GroupPtr G;
  std::vector<int> act;  // act[g * sizeN + h] = code of g h g^-1
  int sizeN = 1;
  int operator()(int g, int h) const { return act[static_cast<std::size_t>(g) * sizeN + h]; }
};
GAction g_action(const HeisenbergData& H, const GroupPtr& G);

struct BetaReport {
  bool bimultiplicative = false;
  bool g_invariant = false;
  bool nondegenerate = false;
  bool section_formula = false;     // beta on N x N from phi*_M(s(x)s(y)s(xy)^-1)
  bool section_g_trivial = false;   // the section cocycle vanishes on G x N and N x G
  bool section_independent = false; // an alternative section gives the same cocycle
  long pairs_checked = 0;
};
BetaReport check_beta(const HeisenbergData& H, const GAction& A, int max_group_pairs = 4096);

// ---------------------------------------------------------------- twisted algebra C^beta N

// Flat coefficient vector: index h * e + j is the coefficient of zeta_e^j T_h.
using TwElem = std::vector<long>;

TwElem tw_basis(const HeisenbergData& H, int h);
TwElem tw_mul(const HeisenbergData& H, const TwElem& x, const TwElem& y);
bool tw_proportional(const HeisenbergData& H, const TwElem& x, const TwElem& y, CycNum* ratio);
// Coefficient of T_h as a cyclotomic number.
CycNum tw_coeff(const HeisenbergData& H, const TwElem& x, int h);

// Sum_a T_{g a g^-1} T_a^-1 and Sum_a beta([g,a], a^-1) T_{[g,a]}.
TwElem s_element(const HeisenbergData& H, const GAction& A, int g);
TwElem s_element_commutator(const HeisenbergData& H, const GAction& A, int g);

// A subgroup L with |L|^2 = |N| on which the commutator pairing vanishes. beta restricted to L
// is then symmetric, hence a coboundary: chi(a) chi(b) = beta(a,b) chi(a+b).
struct LagrangianChoice {
  std::vector<int> elems;  // codes, sorted
  std::vector<int> chi;    // zeta_e exponent on L, -1 off L
  bool beta_trivial = false;  // beta is identically 1 on L
};

LagrangianChoice lagrangian_from(const HeisenbergData& H, const std::vector<int>& gens);
// Block form: all strictly upper blocks plus an isotropic half of each diagonal block.
LagrangianChoice block_lagrangian(const HeisenbergData& H);

// The irreducible module I = C^beta N e_L, basis T_r e_L over coset representatives r.
struct IrrModel {
  const HeisenbergData* H = nullptr;
  LagrangianChoice L;
  std::vector<int> reps;      // coset representatives, reps[0] = 0
  std::vector<int> coset_of;  // index into reps
  int dim() const { return static_cast<int>(reps.size()); }
  // Matrix of left multiplication, flat (i * dim + j) * e + c.
  std::vector<long> matrix(const TwElem& x) const;
  // dim^2 = |N| and the module is irreducible, so C^beta N is the full matrix algebra.
  bool is_full_matrix_algebra() const;
};
IrrModel irr_model(const HeisenbergData& H, const LagrangianChoice& L);

struct SReport {
  bool forms_agree = false;
  bool invertible = false;
  bool intertwining = false;
  bool identity_coefficient = false;  // coefficient of T_1 equals |C_N(g)|
  bool gamma_scalar = false;
  bool gamma_formula_as_printed = false;  // T_1 comparison without the beta(x, x^-1) factor
  bool gamma_formula_corrected = false;   // with it
  bool det_split = false;                 // det_I S_g1 det_I S_g2 = gamma^dim det_I S_g1g2
  long pairs = 0;
};
SReport check_s_elements(const HeisenbergData& H, const GAction& A, const IrrModel& I);

// ---------------------------------------------------------------- trivialization

struct Trivialization {
  GroupPtr G;
  std::vector<TwElem> S;        // S_g by group index
  std::vector<CycNum> lambda;   // Q_g = lambda(g) S_g
  std::string method;           // "lagrangian" or "torsor"
  bool lagrangian_p_stable = false;
  bool p_sylow_eigen = false;   // eigenvalue scalars on the P-preimage give a trivialization there
  long candidates_tried = 0;
  bool homomorphism = false;
  bool intertwining = false;
  std::vector<CycNum> Q(const HeisenbergData& H, int g) const;  // coefficients by N code
};

// pred_P marks elements of G whose reduction lies in the chosen p-Sylow (upper unitriangular).
Trivialization trivialize(const HeisenbergData& H, const GAction& A, const IrrModel& I,
                          const std::function<bool(const RMat&)>& pred_P);

// x^r = c in a cyclotomic field, for c a rational times a root of unity; false if no root found.
bool cyc_root(const CycNum& c, int r, CycNum* out);

// ---------------------------------------------------------------- coherent family {M, M + M}

struct CoherentReport {
  long levi_order = 0, borel_order = 0;
  bool big_trivialized = false;
  bool components_derived = false;     // Q^M diag(g1,g2) e12 e21 = Q1 Q2 e12 e21 on the Levi
  bool components_multiplicative = false;
  bool weyl_symmetric = false;
  bool reducing_u = false;             // Q_u e12 = e12 on U'
  bool reducing_v = false;             // Q_v e21 = e21 on V' (lower Borel trivialization)
  std::string method;
};
CoherentReport coherent_pair(const RMat& M1, int ell);

// ---------------------------------------------------------------- transfer counts

struct TransferCount {
  RMat M;        // class over GR(p^k, d)
  long small = 0;  // |Irr(GL_{md}(o_l))_[M]|
  long big = 0;    // |Irr(GL_m(O_l))_[M]|
  std::string method;
  long big_direct = -1;  // |Irr(Stab | phi_M)| on the GL_m(O_l) side from its table, when enumerable
};

// Odd level: both sides from character tables through GRContext blocks.
TransferCount odd_transfer_count(const RMat& M, int ell);

struct EvenTransferReport {
  RMat M;
  long small = 0, big = 0;
  bool z_part_trivial = false;  // 1 + p^k Z acts trivially on every X over phi_M
  bool restriction_bijective = false;
  bool form_preserving = false;
  bool gallagher_small = false, gallagher_big = false;  // counts equal |Irr| of the level-k centralizer
  std::vector<std::pair<int, int>> labels;  // GL_{md}(o_l) label -> GL_m(O_l) label
};
// l = 2k; explicit restriction bijection on the stabilizers (needs both stabilizers enumerable).
EvenTransferReport even_transfer(const RMat& M, int ell);

// Even level count for one class through Gallagher: |Irr(C_{GL(o_k)}(M))| on both sides.
TransferCount even_transfer_count(const RMat& M, int ell);

// f-primary classes of GL_m(O_k) (reps over GR(p^k,d)) with level-1 reduction f-primary,
// for f the minimal polynomial of the generator t of O_1.
std::vector<RMat> primary_classes_galois(const RingPtr& O, int m);

// d = 1: tensoring with theta o det on every GL_n, checked against the product on GL_1 inputs.
class GRContext;
struct TwistReport {
  int theta = 0;
  RMat shift;                  // grading of theta on GL_1
  bool bijective = false;      // on Irr(GL_n) for n <= max_n
  bool circle_compatible = false;
  bool grading_shift = false;  // grading(chi theta) = grading(chi) + shift I
  long pairs = 0;
};
TwistReport character_twist(const GRContext& ctx, int theta);

}  // namespace grlab
