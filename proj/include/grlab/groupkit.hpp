// Fully enumerated finite matrix groups, block subgroups and conjugacy classes.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "grlab/chainlinalg.hpp"

namespace grlab {

class MatGroup {
 public:
  static std::shared_ptr<MatGroup> general_linear(const RingPtr& R, int n, EnumCaps caps = {});
  // Keys must form a group; closure is checked.
  static std::shared_ptr<MatGroup> from_keys(const RingPtr& R, int n, std::vector<uint64_t> keys,
                                             std::string name);
  static std::shared_ptr<MatGroup> generated_by(const RingPtr& R, int n, const std::vector<RMat>& gens,
                                                std::string name, EnumCaps caps = {});

  const RingPtr& ring() const { return ring_; }
  int n() const { return n_; }
  int order() const { return static_cast<int>(keys_.size()); }
  const std::string& name() const { return name_; }

  uint64_t key(int g) const { return keys_[g]; }
  const std::vector<uint64_t>& keys() const { return keys_; }
  RMat element(int g) const;
  const int* mat(int g) const { return &mats_[static_cast<std::size_t>(g) * n_ * n_]; }
  int find(uint64_t key) const;
  int find(const RMat& M) const { return find(M.key()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const;
  int inv(int a) const { return inv_[a]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv_[g]); }  // g x g^-1
  int power(int g, long k) const;
  int elem_order(int g) const { return ord_[g]; }
  int exponent() const { return exponent_; }
  const std::vector<int>& generators() const { return gens_; }

  int num_classes() const { return static_cast<int>(reps_.size()); }
  int class_of(int g) const { return class_of_[g]; }
  int class_rep(int c) const { return reps_[c]; }
  long class_size(int c) const { return static_cast<long>(class_elems_[c].size()); }
  const std::vector<int>& class_elems(int c) const { return class_elems_[c]; }
  int class_inverse(int c) const { return class_inv_[c]; }
  int power_class(int c, long k) const { return class_of_[power(reps_[c], k)]; }
  long centralizer_order(int c) const { return order() / class_size(c); }

 private:
  MatGroup() = default;
  void build(std::vector<uint64_t> keys);
  void compute_classes();
  int find_raw(const int* m) const;

  RingPtr ring_;
  int n_ = 0;
  std::string name_;
  std::vector<uint64_t> keys_;
  std::vector<int> mats_;
  std::vector<uint64_t> hkeys_;
  std::vector<int> hvals_;
  int hshift_ = 0;
  std::vector<int> table_;  // dense multiplication table when small
  std::vector<int> inv_, ord_;
  int identity_ = 0;
  int exponent_ = 1;
  std::vector<int> gens_;
  std::vector<int> class_of_, reps_, class_inv_;
  std::vector<std::vector<int>> class_elems_;
};

using GroupPtr = std::shared_ptr<MatGroup>;

enum class SubgroupKind { Levi, U, V, Kernel, Torus, Stabilizer, Other };

struct SubgroupHandle {
  SubgroupKind kind = SubgroupKind::Other;
  GroupPtr parent;
  std::vector<int> elems;  // parent indices, ascending
  std::function<bool(const RMat&)> member;
  int order() const { return static_cast<int>(elems.size()); }
  bool contains(int g) const;
  // The subgroup as a standalone group.
  GroupPtr as_group(const std::string& name) const;
};

SubgroupHandle subgroup_by_predicate(const GroupPtr& G, SubgroupKind kind, std::function<bool(const RMat&)> pred);

struct IwahoriTriple {
  SubgroupHandle L, U, V;
  std::vector<int> comp;
};

// Block shapes for an ordered composition of n: L block diagonal, U block upper unitriangular,
// V block lower unitriangular.
IwahoriTriple standard_subgroups(const GroupPtr& G, const std::vector<int>& comp);
bool iwahori_injective(const GroupPtr& G, const IwahoriTriple& T);

SubgroupHandle congruence_kernel(const GroupPtr& G, int i);
SubgroupHandle diagonal_torus(const GroupPtr& G);
// Stabilizer of M under conjugation, M over the level-i ring, G acting through reduction.
SubgroupHandle stabilizer(const GroupPtr& G, const RMat& M);
std::vector<RMat> char_orbit(const GroupPtr& G, const RMat& xi);

// Diagonal blocks of a block-diagonal matrix.
RMat sub_block(const RMat& M, int r0, int c0, int nr, int nc);
RMat embed_block(const RMat& M, int n, int offset);  // diag(1,...,M,...,1)

long gl_order_formula(int q, int ell, int n);

}  // namespace grlab
