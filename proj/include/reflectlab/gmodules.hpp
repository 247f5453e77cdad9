#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "reflectlab/groups.hpp"
#include "reflectlab/matrix_fl.hpp"

namespace reflectlab {

// A finite-dimensional representation of a FiniteGroup over F_l.
// Construction validates that the generator matrices extend to a group
// homomorphism; every element's matrix is cached via the group's word table.
class GModule {
 public:
  GModule() = default;
  // generator_matrices[k] is the action of generator k (same order as
  // G.generator_names()). Throws std::invalid_argument if the matrices do
  // not satisfy the group's relations.
  GModule(const FiniteGroup& G, std::vector<MatrixFl> generator_matrices,
          std::string label = "");

  const FiniteGroup& group() const { return *G_; }
  long modulus() const { return l_; }
  std::size_t dim() const { return dim_; }

  // Advisory metadata; never affects the matrices.
  const std::string& label() const { return label_; }
  void set_label(std::string s) { label_ = std::move(s); }
  // Arithmetic-twist marker (power of the ambient character); bookkeeping
  // only, consumed by downstream constraint assembly.
  int twist() const { return twist_; }
  void set_twist(int t) { twist_ = t; }

  // Action matrix of group element g (cached).
  const MatrixFl& rho(int g) const { return rho_.at(static_cast<std::size_t>(g)); }

 private:
  const FiniteGroup* G_ = nullptr;
  long l_ = 0;
  std::size_t dim_ = 0;
  std::vector<MatrixFl> rho_;
  std::string label_;
  int twist_ = 0;
};

using ModPtr = std::shared_ptr<const GModule>;
ModPtr share(GModule m);

// F_l[X] for the coset space X of the action; basis indexed by cosets.
GModule permutation_module(const FiniteGroup& G, long l, const CosetAction& act,
                           std::string label = "");
GModule permutation_module(const FiniteGroup& G, long l, const Subgroup& H,
                           std::string label = "");
// One-dimensional module; weights are per generator name and must satisfy
// the group relations (validated by the GModule constructor).
GModule scalar_module(const FiniteGroup& G, long l,
                      const std::map<std::string, long>& gen_weights,
                      std::string label = "");
GModule trivial_module(const FiniteGroup& G, long l, std::string label = "");

// Smallest G-stable subspace containing the given vectors, with its induced
// action. `inclusion` is dim(M) x dim(sub), columns forming the basis.
struct SubmoduleResult {
  GModule sub;
  MatrixFl inclusion;
};
SubmoduleResult submodule(const GModule& M,
                          const std::vector<std::vector<long>>& gens,
                          std::string label = "");

// Quotient of M by the column span of `inclusion` (must be G-stable; throws
// std::invalid_argument otherwise). `projection` is dim(quot) x dim(M).
struct QuotientResult {
  GModule quot;
  MatrixFl projection;
};
QuotientResult quotient_module(const GModule& M, const MatrixFl& inclusion,
                               std::string label = "");
QuotientResult quotient_module(const GModule& M, const SubmoduleResult& S,
                               std::string label = "");

GModule direct_sum(const GModule& A, const GModule& B, std::string label = "");

// Basis (as columns) of the H-fixed subspace of M.
MatrixFl invariants(const GModule& M, const Subgroup& H);
std::size_t invariant_dim(const GModule& M, const Subgroup& H);

// f is a matrix dim(B) x dim(A); true iff f * rho_A(g) == rho_B(g) * f for
// the group generators (hence all elements).
bool check_equivariant(const MatrixFl& f, const GModule& A, const GModule& B);

// Short exact sequence 0 -> A -i-> B -p-> C -> 0. Module objects are shared
// so that the same quotient appearing in several sequences is one object.
struct SES {
  ModPtr A, B, C;
  MatrixFl i;  // dim(B) x dim(A)
  MatrixFl p;  // dim(C) x dim(B)
  std::string note;
};
// Verifies: maps equivariant, i injective, p surjective, p*i = 0, and
// dim A + dim C = dim B.
struct ExactReport {
  std::size_t dim_a = 0, dim_b = 0, dim_c = 0;
  bool i_equivariant = false, p_equivariant = false;
  bool i_injective = false, p_surjective = false;
  bool composition_zero = false;  // p * i = 0
  bool dims_add = false;          // dim A + dim C = dim B
  bool pass = false;              // all of the above
};
ExactReport check_exact_report(const SES& s);
bool check_exact(const SES& s);

// Result of taking H-invariants of a short exact sequence.
struct InvariantSeqReport {
  std::size_t dim_a = 0, dim_b = 0, dim_c = 0;  // invariant dims
  bool left_exact = false;   // A^H -> B^H injective and ker(p|B^H) = im(i|A^H)
  bool right_exact = false;  // B^H -> C^H surjective
  std::size_t coker_dim = 0; // dim C^H - rank(p restricted to B^H)
};
InvariantSeqReport invariant_sequence(const SES& s, const Subgroup& H);

// Basis of the space of G-equivariant maps A -> B (each a dim(B) x dim(A)
// matrix).
std::vector<MatrixFl> hom_space(const GModule& A, const GModule& B);

enum class IsoCheck { Yes, No, Undetermined };
const char* iso_check_name(IsoCheck c);
// Searches hom_space(A, B) for an invertible element: exhaustively when
// l^dim(hom) <= 1e6, otherwise by 1e4 random samples (Undetermined if none
// found that way).
IsoCheck is_isomorphic(const GModule& A, const GModule& B);

// For a module of dimension l whose basis is indexed by Z/l and whose action
// permutes indices affinely: the span of the vectors (i^j)_{i in Z/l} for
// j = 0..k ("polynomial functions of degree <= k"), dimension k+1.
SubmoduleResult poly_filtration(const GModule& M, std::size_t k,
                                std::string label = "");

// General form: basis vector i carries the evaluation point points[i]; the
// filtration step k is the span of (points[i]^j)_i for j = 0..k.  Used for
// modules whose basis is indexed by the powers of a fixed root of unity
// (points[i] = zeta^i) rather than by Z/l itself.
SubmoduleResult poly_filtration_at(const GModule& M, std::size_t k,
                                   const std::vector<long>& points,
                                   std::string label = "");

}  // namespace reflectlab
