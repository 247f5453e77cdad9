#pragma once

#include <map>
#include <string>
#include <vector>

namespace reflectlab {

enum class Family { S3, S4, A4, D2l, SemiDirect };

std::string family_name(Family f);

// Explicit finite group: element list 0..order-1, multiplication table,
// named generators.  Constructed only through build_group; the constructor
// verifies associativity, identity, inverses, and the family's presentation
// relations exhaustively.
class FiniteGroup {
 public:
  // S3/S4/A4 take no parameters; D2l needs an odd prime l; SemiDirect needs
  // primes l, r with r | l-1 (zeta picked as the smallest residue of
  // multiplicative order exactly r).
  static FiniteGroup build(Family family, long l = 0, long r = 0);

  int order() const { return order_; }
  int identity() const { return 0; }
  int mul(int a, int b) const { return mul_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  Family family() const { return family_; }
  long param_l() const { return l_; }
  long param_r() const { return r_; }
  long zeta() const { return zeta_; }

  // Generator names: "sigma" and "tau" for every family.
  const std::vector<std::string>& generator_names() const { return gen_names_; }
  int generator(const std::string& name) const;

  // Word over generator indices (into generator_names) that evaluates to g.
  const std::vector<int>& word(int g) const { return words_[g]; }

  // Element order.
  int element_order(int g) const;

  // For S4/A4: the underlying permutation of {0,1,2,3}; empty otherwise.
  const std::vector<int>& perm(int g) const;

  std::string describe(int g) const;  // debugging aid

 private:
  FiniteGroup() = default;
  void finalize();  // builds inv table + word table, runs checks

  Family family_;
  long l_ = 0, r_ = 0, zeta_ = 0;
  int order_ = 0;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
  std::vector<std::string> gen_names_;
  std::vector<int> gen_elems_;
  std::vector<std::vector<int>> words_;
  std::vector<std::vector<int>> perms_;  // S4/A4 only
};

// Subgroup as a sorted element-index list, closed and containing identity.
struct Subgroup {
  const FiniteGroup* parent;
  std::vector<int> elems;

  int order() const { return static_cast<int>(elems.size()); }
  bool contains(int g) const;
};

Subgroup subgroup_generated(const FiniteGroup& g, const std::vector<int>& elems);
Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup full_subgroup(const FiniteGroup& g);

// Every subgroup exactly once (closures of 1- and 2-element generating sets;
// sufficient for the five families).  Throws if |G| > 200.
std::vector<Subgroup> all_subgroups(const FiniteGroup& g);

// The Klein four subgroup of S4/A4 (identity + the three double
// transpositions).  Throws for other families.
Subgroup klein_four(const FiniteGroup& g);

// Left-coset action: cosets of H in G (each a sorted element list, listed in
// order of first appearance by element index) and, per group element, the
// induced permutation p with g * coset[j] = coset[p[j]].
struct CosetAction {
  std::vector<std::vector<int>> cosets;
  std::vector<std::vector<int>> perm_of;  // indexed by group element
};

CosetAction coset_action(const FiniteGroup& g, const Subgroup& h);

}  // namespace reflectlab
