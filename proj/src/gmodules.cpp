#include "reflectlab/gmodules.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace reflectlab {

namespace {

long pow_mod_l(long base, long e, long m) {
  base = ((base % m) + m) % m;
  long acc = 1 % m;
  for (long i = 0; i < e; ++i) acc = (acc * base) % m;
  return acc;
}

// Columns of `vecs` (each of length `dim`) as a dim x n matrix.
MatrixFl columns_matrix(long l, std::size_t dim,
                        const std::vector<std::vector<long>>& vecs) {
  MatrixFl b(l, dim, vecs.size());
  for (std::size_t j = 0; j < vecs.size(); ++j) {
    if (vecs[j].size() != dim)
      throw std::invalid_argument("vector length does not match dimension");
    for (std::size_t i = 0; i < dim; ++i) b.set(i, j, vecs[j][i]);
  }
  return b;
}

std::vector<long> column_of(const MatrixFl& m, std::size_t j) {
  std::vector<long> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m.at(i, j);
  return v;
}

}  // namespace

GModule::GModule(const FiniteGroup& G, std::vector<MatrixFl> generator_matrices,
                 std::string label)
    : G_(&G), label_(std::move(label)) {
  const auto& names = G.generator_names();
  if (generator_matrices.size() != names.size())
    throw std::invalid_argument("GModule: need one matrix per generator");
  if (generator_matrices.empty())
    throw std::invalid_argument("GModule: no generators");
  l_ = generator_matrices[0].modulus();
  dim_ = generator_matrices[0].rows();
  for (const auto& m : generator_matrices) {
    if (m.modulus() != l_)
      throw std::invalid_argument("GModule: mixed moduli in generator matrices");
    if (m.rows() != dim_ || m.cols() != dim_)
      throw std::invalid_argument("GModule: generator matrices must be square "
                                  "of equal size");
  }

  int n = G.order();
  rho_.clear();
  rho_.reserve(static_cast<std::size_t>(n));
  for (int e = 0; e < n; ++e) {
    MatrixFl acc = MatrixFl::identity(l_, dim_);
    for (int k : G.word(e)) acc = acc.mul(generator_matrices[static_cast<std::size_t>(k)]);
    rho_.push_back(std::move(acc));
  }
  // The word table only guarantees rho on representatives of words; verify
  // the full homomorphism property, which also checks the generator matrices
  // satisfy every group relation.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!(rho_[static_cast<std::size_t>(a)]
                .mul(rho_[static_cast<std::size_t>(b)]) ==
            rho_[static_cast<std::size_t>(G.mul(a, b))]))
        throw std::invalid_argument(
            "GModule: matrices do not define a representation (relation "
            "violated)");
}

ModPtr share(GModule m) { return std::make_shared<const GModule>(std::move(m)); }

GModule permutation_module(const FiniteGroup& G, long l, const CosetAction& act,
                           std::string label) {
  std::vector<MatrixFl> gens;
  for (const auto& name : G.generator_names()) {
    int e = G.generator(name);
    gens.push_back(MatrixFl::permutation(l, act.perm_of[static_cast<std::size_t>(e)]));
  }
  return GModule(G, std::move(gens), std::move(label));
}

GModule permutation_module(const FiniteGroup& G, long l, const Subgroup& H,
                           std::string label) {
  return permutation_module(G, l, coset_action(G, H), std::move(label));
}

GModule scalar_module(const FiniteGroup& G, long l,
                      const std::map<std::string, long>& gen_weights,
                      std::string label) {
  std::vector<MatrixFl> gens;
  for (const auto& name : G.generator_names()) {
    auto it = gen_weights.find(name);
    if (it == gen_weights.end())
      throw std::invalid_argument("scalar_module: missing weight for generator " +
                                  name);
    long w = ((it->second % l) + l) % l;
    if (w == 0)
      throw std::invalid_argument("scalar_module: weight is zero mod l");
    MatrixFl m(l, 1, 1);
    m.set(0, 0, w);
    gens.push_back(std::move(m));
  }
  // The GModule constructor rejects weights that violate a group relation.
  return GModule(G, std::move(gens), std::move(label));
}

GModule trivial_module(const FiniteGroup& G, long l, std::string label) {
  std::map<std::string, long> w;
  for (const auto& name : G.generator_names()) w[name] = 1;
  return scalar_module(G, l, w, std::move(label));
}

SubmoduleResult submodule(const GModule& M,
                          const std::vector<std::vector<long>>& gens,
                          std::string label) {
  const long l = M.modulus();
  const std::size_t d = M.dim();
  const FiniteGroup& G = M.group();

  for (const auto& v : gens)
    if (v.size() != d)
      throw std::invalid_argument("submodule: generator vector length mismatch");

  std::vector<MatrixFl> gen_mats;
  for (const auto& name : G.generator_names())
    gen_mats.push_back(M.rho(G.generator(name)));

  // Orbit closure: repeatedly add generator-images until the span is stable.
  std::vector<std::vector<long>> basis;
  {
    MatrixFl rows = MatrixFl::from_rows(l, gens.empty()
                                               ? std::vector<std::vector<long>>{}
                                               : gens);
    if (!gens.empty()) {
      auto r = rows.rref();
      for (std::size_t i = 0; i < r.rank; ++i) {
        std::vector<long> v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = r.reduced.at(i, j);
        basis.push_back(std::move(v));
      }
    }
  }
  for (;;) {
    std::vector<std::vector<long>> all = basis;
    for (const auto& v : basis)
      for (const auto& g : gen_mats) all.push_back(g.apply(v));
    if (all.empty()) break;
    auto r = MatrixFl::from_rows(l, all).rref();
    if (r.rank == basis.size()) break;
    basis.clear();
    for (std::size_t i = 0; i < r.rank; ++i) {
      std::vector<long> v(d);
      for (std::size_t j = 0; j < d; ++j) v[j] = r.reduced.at(i, j);
      basis.push_back(std::move(v));
    }
  }

  MatrixFl incl = columns_matrix(l, d, basis);
  const std::size_t k = basis.size();

  // Express the action in the submodule basis: rho(g) * incl = incl * S_g.
  std::vector<MatrixFl> sub_gens;
  for (const auto& g : gen_mats) {
    MatrixFl img = g.mul(incl);  // d x k
    MatrixFl s(l, k, k);
    for (std::size_t j = 0; j < k; ++j) {
      auto x = incl.solve(column_of(img, j));
      if (!x)
        throw std::logic_error("submodule: closure failed to be stable");
      for (std::size_t i = 0; i < k; ++i) s.set(i, j, (*x)[i]);
    }
    sub_gens.push_back(std::move(s));
  }
  return SubmoduleResult{GModule(G, std::move(sub_gens), std::move(label)),
                         std::move(incl)};
}

QuotientResult quotient_module(const GModule& M, const MatrixFl& inclusion,
                               std::string label) {
  const long l = M.modulus();
  const std::size_t d = M.dim();
  const FiniteGroup& G = M.group();
  if (inclusion.modulus() != l || inclusion.rows() != d)
    throw std::invalid_argument("quotient_module: inclusion shape mismatch");
  const std::size_t k = inclusion.cols();
  if (inclusion.rank() != k)
    throw std::invalid_argument("quotient_module: inclusion columns dependent");

  // Complete the basis: pivot coordinates of the column span, complemented by
  // standard basis vectors at the non-pivot coordinates.
  auto rt = inclusion.transpose().rref();
  std::vector<bool> is_pivot(d, false);
  for (std::size_t c : rt.pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> complement;
  for (std::size_t i = 0; i < d; ++i)
    if (!is_pivot[i]) complement.push_back(i);
  MatrixFl eq(l, d, complement.size());
  for (std::size_t j = 0; j < complement.size(); ++j)
    eq.set(complement[j], j, 1);
  MatrixFl u = inclusion.hstack(eq);
  auto uinv = u.inverse();
  if (!uinv) throw std::logic_error("quotient_module: basis completion failed");

  const std::size_t q = d - k;
  auto lower_rows = [&](const MatrixFl& m) {
    MatrixFl out(l, q, m.cols());
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        out.set(i, j, m.at(k + i, j));
    return out;
  };

  std::vector<MatrixFl> quo_gens;
  for (const auto& name : G.generator_names()) {
    const MatrixFl& g = M.rho(G.generator(name));
    // Stability: the image of the subspace must stay inside it.
    MatrixFl in_coords = uinv->mul(g.mul(inclusion));  // d x k
    for (std::size_t i = k; i < d; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (in_coords.at(i, j) != 0)
          throw std::invalid_argument(
              "quotient_module: subspace is not G-stable");
    quo_gens.push_back(lower_rows(uinv->mul(g.mul(eq))));
  }
  MatrixFl projection = lower_rows(*uinv);
  return QuotientResult{GModule(G, std::move(quo_gens), std::move(label)),
                        std::move(projection)};
}

QuotientResult quotient_module(const GModule& M, const SubmoduleResult& S,
                               std::string label) {
  return quotient_module(M, S.inclusion, std::move(label));
}

GModule direct_sum(const GModule& A, const GModule& B, std::string label) {
  if (&A.group() != &B.group())
    throw std::invalid_argument("direct_sum: different groups");
  if (A.modulus() != B.modulus())
    throw std::invalid_argument("direct_sum: different moduli");
  const long l = A.modulus();
  const FiniteGroup& G = A.group();
  std::vector<MatrixFl> gens;
  for (const auto& name : G.generator_names()) {
    const MatrixFl& a = A.rho(G.generator(name));
    const MatrixFl& b = B.rho(G.generator(name));
    MatrixFl m(l, A.dim() + B.dim(), A.dim() + B.dim());
    for (std::size_t i = 0; i < A.dim(); ++i)
      for (std::size_t j = 0; j < A.dim(); ++j) m.set(i, j, a.at(i, j));
    for (std::size_t i = 0; i < B.dim(); ++i)
      for (std::size_t j = 0; j < B.dim(); ++j)
        m.set(A.dim() + i, A.dim() + j, b.at(i, j));
    gens.push_back(std::move(m));
  }
  return GModule(G, std::move(gens), std::move(label));
}

MatrixFl invariants(const GModule& M, const Subgroup& H) {
  const long l = M.modulus();
  const std::size_t d = M.dim();
  std::vector<MatrixFl> blocks;
  for (int h : H.elems) {
    if (h == 0) continue;
    blocks.push_back(M.rho(h).sub(MatrixFl::identity(l, d)));
  }
  if (blocks.empty()) return MatrixFl::identity(l, d);
  MatrixFl stacked = blocks[0];
  for (std::size_t i = 1; i < blocks.size(); ++i)
    stacked = stacked.vstack(blocks[i]);
  auto ker = stacked.kernel_basis();
  return columns_matrix(l, d, ker);
}

std::size_t invariant_dim(const GModule& M, const Subgroup& H) {
  return invariants(M, H).cols();
}

bool check_equivariant(const MatrixFl& f, const GModule& A, const GModule& B) {
  if (&A.group() != &B.group() || A.modulus() != B.modulus()) return false;
  if (f.rows() != B.dim() || f.cols() != A.dim() || f.modulus() != A.modulus())
    return false;
  const FiniteGroup& G = A.group();
  for (const auto& name : G.generator_names()) {
    int g = G.generator(name);
    if (!(f.mul(A.rho(g)) == B.rho(g).mul(f))) return false;
  }
  return true;
}

ExactReport check_exact_report(const SES& s) {
  ExactReport r;
  if (!s.A || !s.B || !s.C) return r;
  const GModule &a = *s.A, &b = *s.B, &c = *s.C;
  if (a.modulus() != b.modulus() || b.modulus() != c.modulus()) return r;
  r.dim_a = a.dim();
  r.dim_b = b.dim();
  r.dim_c = c.dim();
  r.i_equivariant = check_equivariant(s.i, a, b);
  r.p_equivariant = check_equivariant(s.p, b, c);
  r.i_injective = s.i.rank() == a.dim();
  r.p_surjective = s.p.rank() == c.dim();
  MatrixFl comp = s.p.mul(s.i);
  r.composition_zero = true;
  for (std::size_t i = 0; i < comp.rows(); ++i)
    for (std::size_t j = 0; j < comp.cols(); ++j)
      if (comp.at(i, j) != 0) r.composition_zero = false;
  // With p*i = 0, exactness at B is equivalent to the dimension count.
  r.dims_add = a.dim() + c.dim() == b.dim();
  r.pass = r.i_equivariant && r.p_equivariant && r.i_injective &&
           r.p_surjective && r.composition_zero && r.dims_add;
  return r;
}

bool check_exact(const SES& s) { return check_exact_report(s).pass; }

InvariantSeqReport invariant_sequence(const SES& s, const Subgroup& H) {
  const GModule &a = *s.A, &b = *s.B, &c = *s.C;
  MatrixFl ia = invariants(a, H);
  MatrixFl ib = invariants(b, H);
  MatrixFl ic = invariants(c, H);
  InvariantSeqReport r;
  r.dim_a = ia.cols();
  r.dim_b = ib.cols();
  r.dim_c = ic.cols();
  std::size_t rank_i = s.i.mul(ia).rank();
  std::size_t rank_p = s.p.mul(ib).rank();
  bool injective = rank_i == r.dim_a;
  r.left_exact = injective && (r.dim_b - rank_p == rank_i);
  r.right_exact = rank_p == r.dim_c;
  r.coker_dim = r.dim_c - rank_p;
  return r;
}

std::vector<MatrixFl> hom_space(const GModule& A, const GModule& B) {
  if (&A.group() != &B.group())
    throw std::invalid_argument("hom_space: different groups");
  if (A.modulus() != B.modulus())
    throw std::invalid_argument("hom_space: different moduli");
  const long l = A.modulus();
  const std::size_t da = A.dim(), db = B.dim();
  const FiniteGroup& G = A.group();
  if (da == 0 || db == 0) return {};

  // Unknown f (db x da), flattened row-major. The condition
  // f*rho_A(g) - rho_B(g)*f = 0 becomes
  // (I_db (x) rho_A(g)^T - rho_B(g) (x) I_da) vec(f) = 0.
  MatrixFl stacked(l, 0, da * db);
  bool first = true;
  for (const auto& name : G.generator_names()) {
    int g = G.generator(name);
    MatrixFl lhs = MatrixFl::identity(l, db).kron(A.rho(g).transpose());
    MatrixFl rhs = B.rho(g).kron(MatrixFl::identity(l, da));
    MatrixFl block = lhs.sub(rhs);
    stacked = first ? block : stacked.vstack(block);
    first = false;
  }
  std::vector<MatrixFl> out;
  for (const auto& v : stacked.kernel_basis()) {
    MatrixFl f(l, db, da);
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < da; ++j) f.set(i, j, v[i * da + j]);
    out.push_back(std::move(f));
  }
  return out;
}

const char* iso_check_name(IsoCheck c) {
  switch (c) {
    case IsoCheck::Yes: return "yes";
    case IsoCheck::No: return "no";
    case IsoCheck::Undetermined: return "undetermined";
  }
  return "?";
}

IsoCheck is_isomorphic(const GModule& A, const GModule& B) {
  if (&A.group() != &B.group())
    throw std::invalid_argument("is_isomorphic: different groups");
  if (A.modulus() != B.modulus())
    throw std::invalid_argument("is_isomorphic: different moduli");
  if (A.dim() != B.dim()) return IsoCheck::No;
  if (A.dim() == 0) return IsoCheck::Yes;
  const long l = A.modulus();
  auto homs = hom_space(A, B);
  if (homs.empty()) return IsoCheck::No;
  const std::size_t h = homs.size();

  auto combo_of = [&](const std::vector<long>& coeffs) {
    MatrixFl acc(l, A.dim(), A.dim());
    for (std::size_t i = 0; i < h; ++i)
      if (coeffs[i] != 0) acc = acc.add(homs[i].scale(coeffs[i]));
    return acc;
  };

  // Exhaustive when the coefficient space is small enough.
  long double total = 1;
  for (std::size_t i = 0; i < h; ++i) total *= static_cast<long double>(l);
  if (total <= 1e6L) {
    std::vector<long> coeffs(h, 0);
    for (;;) {
      // odometer increment
      std::size_t pos = 0;
      while (pos < h && ++coeffs[pos] == l) coeffs[pos++] = 0;
      if (pos == h) break;  // wrapped: all combinations tried
      if (combo_of(coeffs).is_invertible()) return IsoCheck::Yes;
    }
    return IsoCheck::No;
  }

  std::mt19937 rng(12345);
  std::uniform_int_distribution<long> dist(0, l - 1);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<long> coeffs(h);
    bool all_zero = true;
    for (auto& c : coeffs) {
      c = dist(rng);
      all_zero = all_zero && c == 0;
    }
    if (!all_zero && combo_of(coeffs).is_invertible()) return IsoCheck::Yes;
  }
  return IsoCheck::Undetermined;
}

SubmoduleResult poly_filtration(const GModule& M, std::size_t k,
                                std::string label) {
  const long l = M.modulus();
  if (M.dim() != static_cast<std::size_t>(l))
    throw std::invalid_argument(
        "poly_filtration: module dimension must equal the modulus");
  if (k + 1 > static_cast<std::size_t>(l))
    throw std::invalid_argument("poly_filtration: degree too large");
  std::vector<long> points(static_cast<std::size_t>(l));
  for (long i = 0; i < l; ++i) points[static_cast<std::size_t>(i)] = i;
  return poly_filtration_at(M, k, points, std::move(label));
}

SubmoduleResult poly_filtration_at(const GModule& M, std::size_t k,
                                   const std::vector<long>& points,
                                   std::string label) {
  if (points.size() != M.dim())
    throw std::invalid_argument(
        "poly_filtration_at: one evaluation point per basis vector required");
  if (k + 1 > M.dim())
    throw std::invalid_argument("poly_filtration_at: degree too large");
  const long l = M.modulus();
  std::vector<std::vector<long>> vecs;
  for (std::size_t j = 0; j <= k; ++j) {
    std::vector<long> v(M.dim());
    for (std::size_t i = 0; i < M.dim(); ++i)
      v[i] = (j == 0) ? 1 : pow_mod_l(points[i], static_cast<long>(j), l);
    vecs.push_back(std::move(v));
  }
  auto res = submodule(M, vecs, std::move(label));
  if (res.sub.dim() != k + 1)
    throw std::invalid_argument(
        "poly_filtration_at: span is not stable under the action");
  return res;
}

}  // namespace reflectlab
