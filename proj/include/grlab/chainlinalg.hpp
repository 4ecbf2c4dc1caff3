// Finite chain rings o_l = Z/p^l and Galois rings GR(p^l, d), and matrices over them.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace grlab {

struct ChainRingSpec {
  int p = 2;
  int ell = 1;
  int d = 1;
  std::vector<int> f;  // f_0..f_{d-1}; f = t^d + sum f_j t^j
};

// Elements are codes 0..size-1: sum_j c_j t^j  <->  sum_j c_j * (p^ell)^j, 0 <= c_j < p^ell.
class ChainRing {
 public:
  explicit ChainRing(ChainRingSpec spec);

  const ChainRingSpec& spec() const { return spec_; }
  int p() const { return spec_.p; }
  int ell() const { return spec_.ell; }
  int d() const { return spec_.d; }
  int q() const { return q_; }
  int pl() const { return pl_; }  // p^ell
  int size() const { return size_; }

  int add(int a, int b) const { return add_[a * size_ + b]; }
  int sub(int a, int b) const { return add_[a * size_ + neg_[b]]; }
  int mul(int a, int b) const { return mul_[a * size_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int inv(int a) const { return inv_[a]; }  // -1 for non-units
  bool is_unit(int a) const { return inv_[a] >= 0; }
  int val(int a) const { return val_[a]; }  // p-adic valuation, ell for 0
  int trace(int a) const { return tr_[a]; }  // Galois trace to Z/p^ell
  int from_int(long k) const;
  int t_power(int j) const;  // code of t^j
  int digit(int a, int j) const;  // coefficient of t^j in Z/p^ell
  int from_digits(const std::vector<int>& c) const;

  // Reduction to level i (same p, d, f) and the digit-wise lift back.
  int reduce_code(int a, int i) const;
  int lift_code(int a, int i) const;

  std::string name() const;
  std::string elem_str(int a) const;

 private:
  ChainRingSpec spec_;
  int q_, pl_, size_;
  std::vector<int> add_, mul_, neg_, inv_, val_, tr_;
};

using RingPtr = std::shared_ptr<const ChainRing>;

RingPtr make_ring(int p, int ell, int d);
RingPtr ring_at_level(const RingPtr& R, int i);
bool is_prime(long n);
bool same_ring(const RingPtr& a, const RingPtr& b);

// Polynomials over a ring, low degree first, trailing zeros trimmed.
using RPoly = std::vector<int>;

struct RMat {
  RingPtr ring;
  int rows = 0, cols = 0;
  std::vector<int> a;

  RMat() = default;
  RMat(RingPtr R, int r, int c);
  static RMat identity(RingPtr R, int n);
  static RMat from_rows(RingPtr R, const std::vector<std::vector<int>>& rows);
  int& operator()(int i, int j) { return a[i * cols + j]; }
  int operator()(int i, int j) const { return a[i * cols + j]; }
  int n() const { return rows; }

  RMat operator*(const RMat& o) const;
  RMat operator+(const RMat& o) const;
  RMat operator-(const RMat& o) const;
  RMat scaled(int c) const;
  bool operator==(const RMat& o) const;
  bool operator!=(const RMat& o) const { return !(*this == o); }
  bool operator<(const RMat& o) const;  // row-major, entry-value order
  RMat reduce(int i) const;  // reduction to level i
  RMat lift(const RingPtr& to) const;  // digit-wise lift to a higher level
  uint64_t key() const;  // base-|R| digits, first entry most significant
  static RMat from_key(RingPtr R, int r, int c, uint64_t k);
  std::string str() const;
  static RMat parse(const std::string& s);  // "p,ell,d|r,c|e00 e01 ..."
};

RMat block_sum(const RMat& A, const RMat& B);
int mat_trace(const RMat& A);
int mat_det(const RMat& A);
bool mat_is_invertible(const RMat& A);
RMat mat_inverse(const RMat& A);  // over the chain ring, unit pivots
RMat companion(RingPtr R, const RPoly& monic);

RPoly charpoly(const RMat& M, int at_level);
RPoly poly_trim(RPoly a);
// Over the residue field (ring of level 1).
RPoly poly_gcd_field(const ChainRing& F, RPoly a, RPoly b);
bool is_irreducible_field(const ChainRing& F, const RPoly& f);
std::string poly_str(const ChainRing& R, const RPoly& f);
bool is_coprime(const RMat& M1, const RMat& M2);

struct SimClass {
  int level = 1;
  int n = 0;
  RMat rep;
  long orbit_size = 0;
};

struct EnumCaps {
  uint64_t matrices = 1000000;
  uint64_t group = 100000;
};

std::vector<SimClass> similarity_classes(const RingPtr& R, int n, int i, EnumCaps caps = {});
// Canonical (minimal) representative of the GL_n(o_i) orbit of M.
RMat canonical_rep(const RMat& M, EnumCaps caps = {});

// Rank of a matrix over the residue field (ring of level 1).
int field_rank(const ChainRing& F, std::vector<int> a, int rows, int cols);
std::vector<std::vector<int>> field_nullspace(const ChainRing& F, std::vector<int> a, int rows, int cols);

bool uv_pairing_is_perfect(const RMat& M1, const RMat& M2);

// Mat_{md}(o_l) = A + Z with A = Mat_m(O_l) embedded by the regular representation.
struct AZSplit {
  RingPtr base;     // o_l
  RingPtr galois;   // O_l = GR(p^l, d)
  int m = 1, d = 1;
  std::vector<RMat> A_basis;  // over o_l, m*m*d elements
  std::vector<RMat> Z_basis;  // over o_l, (md)^2 - m*m*d elements
  RMat gram_inv;              // inverse Gram matrix of the trace form on A_basis
  RMat embed(const RMat& X) const;     // Mat_m(O_l) -> Mat_{md}(o_l)
  RMat unembed(const RMat& X) const;   // inverse on A
  RMat proj_A(const RMat& X) const;
  RMat proj_Z(const RMat& X) const;
  bool in_A(const RMat& X) const { return proj_Z(X) == RMat(base, X.rows, X.cols); }
};

AZSplit az_split(const RingPtr& base, int m, int d);

struct GaloisLift {
  RMat g;  // g M g^{-1} = B
  RMat B;  // in A
  RMat B_galois;  // B as an m x m matrix over O_l
  bool centralizer_in_A = false;
};

GaloisLift lift_to_galois(const RMat& M, int d);

// phi_xi(a) = zeta_{p^i}^{e}; returns e mod p^i. xi, a over the level-i ring.
int phi_exponent(const RMat& xi, const RMat& a);

}  // namespace grlab
