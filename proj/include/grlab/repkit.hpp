// Characters, exact character tables, explicit modules and operator images.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "grlab/cyclotomic.hpp"
#include "grlab/exactla.hpp"
#include "grlab/groupkit.hpp"

namespace grlab {

// A class function; vals[c] is the value on class c of group.
struct Character {
  GroupPtr group;
  std::vector<CycNum> vals;
  std::string label;

  Character() = default;
  Character(GroupPtr G, std::vector<CycNum> v, std::string l = {});
  CycNum degree() const { return vals[0]; }
  CycNum at(int g) const { return vals[group->class_of(g)]; }
  Character conj() const;
  Character& operator+=(const Character& o);
  Character& operator-=(const Character& o);
  Character scaled(const CycNum& s) const;
  bool operator==(const Character& o) const;
  bool operator!=(const Character& o) const { return !(*this == o); }
  bool is_zero() const;
};

Character operator+(Character a, const Character& b);
Character operator-(Character a, const Character& b);
Character operator*(const Character& a, const Character& b);  // pointwise

Character trivial_character(const GroupPtr& G);
Character regular_character(const GroupPtr& G);

CycNum inner_product_cyc(const Character& a, const Character& b);
// Exact integer <a, b>; throws if the value is not a rational integer.
long inner_product(const Character& a, const Character& b);

struct CharTable {
  GroupPtr group;
  std::vector<Character> irr;
  int conductor = 1;

  int size() const { return static_cast<int>(irr.size()); }
  std::vector<long> decompose(const Character& theta) const;
  Character combine(const std::vector<long>& coeffs) const;
  int index_of(const Character& chi) const;  // -1 if not an irreducible of the table
  int trivial_index() const { return 0; }
};

using TablePtr = std::shared_ptr<const CharTable>;

// Exact table: class-algebra eigenvectors modulo a prime, lifted to Q(zeta_e) through power maps
// and certified by exact orthogonality.
TablePtr character_table(const GroupPtr& G, uint64_t seed = 1);

// Subgroup with its embedding into a parent group (same n and ring).
struct Embedding {
  GroupPtr sub;
  GroupPtr parent;
  std::vector<int> to_parent;
};
Embedding make_embedding(const GroupPtr& sub, const GroupPtr& parent);
Embedding make_embedding(const SubgroupHandle& H, const std::string& name);

Character induce(const Character& chi, const Embedding& E);
Character restrict(const Character& chi, const Embedding& E);

struct ExplicitRep {
  GroupPtr group;
  int dim = 0;
  std::vector<DMat<CycNum>> mats;  // one per group element, or empty when fn is set
  std::function<DMat<CycNum>(int)> fn;

  DMat<CycNum> rho(int g) const { return mats.empty() ? fn(g) : mats[g]; }
  Character character() const;
  bool is_homomorphism() const;  // checked on (all elements) x (generators)
};

// Monomial module Ind_H^G(lambda) for a linear character lambda of H.
ExplicitRep monomial_induced(const Character& lambda, const Embedding& E);
// Image of the central idempotent of chi acting on Y.
ExplicitRep isotypic_component(const ExplicitRep& Y, const Character& chi);
// Subspace spanned by columns of B (must be G-stable).
ExplicitRep subrepresentation(const ExplicitRep& Y, const DMat<CycNum>& B);
ExplicitRep explicit_model(const Character& chi, const std::vector<GroupPtr>& extra_subgroups = {});

// Group-algebra element sum a_g g, sparse.
using GAElem = std::map<int, Rat>;
GAElem subgroup_average(const std::vector<int>& elems);
GAElem ga_mul(const MatGroup& G, const GAElem& a, const GAElem& b);
DMat<CycNum> act(const ExplicitRep& Y, const GAElem& a);

// Character of L on the column space of a acting on Y; throws if the image is not L-stable.
Character operator_image(const ExplicitRep& Y, const GAElem& a, const Embedding& L);

// Irreducibles of G over the orbit of phi*_xi restricted to K^{l-i}, by Clifford correspondence
// from the stabilizer of phi*_xi.
struct CliffordIrrep {
  RMat xi;
  int inner_label = 0;  // index in Irr(G(phi) | phi*)
  Character chi;        // on G
  int table_index = -1;
};
std::vector<CliffordIrrep> clifford_irreps(const GroupPtr& G, int i, const RMat& xi, const TablePtr& T);

// Value of phi*_xi on an element of K^{l-i}: zeta_{p^i}^{e}.
CycNum phi_star(const RMat& xi, const RMat& k, int ell);

// Character of K^{l-i} (as a group) given by phi*_xi.
Character phi_star_character(const GroupPtr& K, const RMat& xi, int ell);

}  // namespace grlab
