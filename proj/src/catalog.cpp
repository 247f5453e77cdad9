#include "reflectlab/catalog.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace reflectlab {

namespace {

long pow_mod(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  if (b < 0) b += m;
  for (; e > 0; e >>= 1) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
  }
  return r;
}

std::vector<long> column_of(const MatrixFl& m, std::size_t j) {
  std::vector<long> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m.at(i, j);
  return v;
}

// X with A * X = B (columnwise); throws if any column is inconsistent.
MatrixFl solve_cols(const MatrixFl& A, const MatrixFl& B) {
  MatrixFl X(A.modulus(), A.cols(), B.cols());
  for (std::size_t j = 0; j < B.cols(); ++j) {
    auto x = A.solve(column_of(B, j));
    if (!x) throw std::logic_error("solve_cols: inconsistent system");
    for (std::size_t i = 0; i < A.cols(); ++i) X.set(i, j, (*x)[i]);
  }
  return X;
}

// Any invertible equivariant map from -> to.  The catalog only needs this
// for one-dimensional modules, where a single hom-space basis vector either
// is an isomorphism or no isomorphism exists.
MatrixFl equivariant_iso(const GModule& from, const GModule& to) {
  if (from.dim() != to.dim())
    throw std::logic_error("equivariant_iso: dimension mismatch");
  for (const MatrixFl& h : hom_space(from, to))
    if (h.is_invertible()) return h;
  throw std::logic_error("equivariant_iso: modules '" + from.label() +
                         "' and '" + to.label() + "' are not isomorphic");
}

int elem_by_perm(const FiniteGroup& G, const std::vector<int>& p) {
  for (int g = 0; g < G.order(); ++g)
    if (G.perm(g) == p) return g;
  throw std::logic_error("elem_by_perm: permutation not in group");
}

ModPtr zero_module(const FiniteGroup& G, long l) {
  std::vector<MatrixFl> gens(G.generator_names().size(), MatrixFl(l, 0, 0));
  GModule z(G, std::move(gens), "0");
  return share(std::move(z));
}

std::string subgroup_desc(const Subgroup& h) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < h.elems.size(); ++i)
    os << (i ? "," : "") << h.elems[i];
  os << "}";
  return os.str();
}

std::vector<Subgroup> inertia_subgroups(const FiniteGroup& G, Family fam,
                                        long l) {
  std::vector<Subgroup> out;
  if (fam == Family::S4 || fam == Family::A4) {
    // Tame inertia must inject into the quotient by the Klein four group:
    // keep exactly the subgroups meeting it trivially.
    Subgroup v4 = klein_four(G);
    for (auto& h : all_subgroups(G)) {
      bool meets = false;
      for (int g : h.elems)
        if (g != G.identity() && v4.contains(g)) meets = true;
      if (!meets) out.push_back(h);
    }
  } else {
    for (auto& h : all_subgroups(G))
      if (h.order() % l != 0) out.push_back(h);
  }
  return out;
}

// Shared tail: h0 table, default Euler flags, inertia family, pin defaults.
void finalize_case(CaseInstance& c,
                   const std::vector<const GModule*>& nf_euler_modules) {
  const FiniteGroup& G = *c.group;
  Subgroup full = full_subgroup(G);
  for (const ModPtr& m : c.modules) {
    c.h0_table[m.get()] =
        c.setting.b_nontrivial
            ? 0
            : static_cast<long>(invariant_dim(*m, full));
    bool euler = false;
    if (c.setting.kind == Setting::Kind::FunctionField) {
      euler = true;
    } else {
      euler = std::find(nf_euler_modules.begin(), nf_euler_modules.end(),
                        m.get()) != nf_euler_modules.end();
    }
    c.euler_flag[m.get()] = euler;
    if (!c.ambient_pinned.count(m.get())) c.ambient_pinned[m.get()] = false;
  }
  c.inertia_family = inertia_subgroups(G, c.family, c.l);
}

CaseInstance build_s3(const std::string& setting_name) {
  CaseInstance c;
  c.family = Family::S3;
  c.l = 3;
  c.r = 0;
  c.group = std::make_shared<FiniteGroup>(FiniteGroup::build(Family::S3));
  c.setting = make_setting(setting_name, c.l);
  const FiniteGroup& G = *c.group;

  Subgroup sig = subgroup_generated(G, {G.generator("sigma")});
  Subgroup tau = subgroup_generated(G, {G.generator("tau")});

  ModPtr M = share(permutation_module(G, 3, coset_action(G, sig), "M"));
  auto t1r = submodule(*M, {{1, 1, 1}}, "T1");
  t1r.sub.set_twist(1);
  ModPtr T1 = share(std::move(t1r.sub));
  auto mpr = quotient_module(*M, t1r.inclusion, "M'");
  ModPtr Mp = share(std::move(mpr.quot));
  c.sequences.push_back(
      {T1, M, Mp, t1r.inclusion, mpr.projection, "0 -> T1 -> M -> M' -> 0"});

  ModPtr Np =
      share(scalar_module(G, 3, {{"sigma", -1}, {"tau", 1}}, "N'"));
  // The embedding sends the generator to the class of e0 - e1 (the coset of
  // the identity minus the coset of the l-cycle generator).
  MatrixFl emb = MatrixFl(3, 3, 1);
  emb.set(0, 0, 1);
  emb.set(1, 0, -1);
  MatrixFl i2 = mpr.projection.mul(emb);  // 2 x 1
  auto imr = submodule(*Mp, {column_of(i2, 0)}, "im");
  auto tqr = quotient_module(*Mp, imr.inclusion, "T");
  tqr.quot.set_twist(1);
  ModPtr T = share(std::move(tqr.quot));
  c.sequences.push_back(
      {Np, Mp, T, i2, tqr.projection, "0 -> N' -> M' -> T -> 0"});

  ModPtr N = share(permutation_module(G, 3, coset_action(G, tau), "N"));
  c.direct_sums.push_back({N, {Np, T}, "N ~ N' (+) T"});

  c.M = M;
  c.N = N;
  c.modules = {M, T1, Mp, Np, T, N};
  c.parameter_parts = {Np};
  c.ambient_pinned[T1.get()] = true;
  c.ambient_pinned[T.get()] = true;
  finalize_case(c, {});
  return c;
}

CaseInstance build_s4a4(Family fam, const std::string& setting_name) {
  CaseInstance c;
  c.family = fam;
  c.l = 2;
  c.r = 0;
  c.group = std::make_shared<FiniteGroup>(FiniteGroup::build(fam));
  c.setting = make_setting(setting_name, c.l);
  const FiniteGroup& G = *c.group;

  // M: the permutation action on the four letters.
  std::vector<MatrixFl> gm;
  for (const auto& name : G.generator_names())
    gm.push_back(MatrixFl::permutation(2, G.perm(G.generator(name))));
  ModPtr M = share(GModule(G, std::move(gm), "M"));

  auto m1r =
      submodule(*M, {{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}}, "M1");
  ModPtr M1 = share(std::move(m1r.sub));
  auto tr = quotient_module(*M, m1r.inclusion, "T");
  tr.quot.set_twist(1);
  ModPtr T = share(std::move(tr.quot));
  c.sequences.push_back(
      {M1, M, T, m1r.inclusion, tr.projection, "0 -> M1 -> M -> T -> 0"});

  auto ones = m1r.inclusion.solve({1, 1, 1, 1});
  if (!ones) throw std::logic_error("s4/a4: all-ones vector not in M1");
  auto twr = submodule(*M1, {*ones}, "Tw");
  twr.sub.set_twist(1);
  ModPtr Tw = share(std::move(twr.sub));
  auto npr = quotient_module(*M1, twr.inclusion, "N'");
  ModPtr Np = share(std::move(npr.quot));
  c.sequences.push_back(
      {Tw, M1, Np, twr.inclusion, npr.projection, "0 -> Tw -> M1 -> N' -> 0"});

  // N: cosets of the stabilizer of a pair partition (order 8 in S4; the
  // Klein four group in A4) -- three cosets either way.
  Subgroup H = (fam == Family::S4)
                   ? subgroup_generated(G, {elem_by_perm(G, {1, 2, 3, 0}),
                                            elem_by_perm(G, {2, 1, 0, 3})})
                   : klein_four(G);
  ModPtr N = share(permutation_module(G, 2, coset_action(G, H), "N"));
  c.direct_sums.push_back({N, {Np, T}, "N ~ N' (+) T"});

  c.M = M;
  c.N = N;
  c.modules = {M, M1, T, Tw, Np, N};
  c.parameter_parts = {Np};
  c.ambient_pinned[T.get()] = true;
  c.ambient_pinned[Tw.get()] = true;
  finalize_case(c, {});
  return c;
}

CaseInstance build_ladder(Family fam, long l, long r,
                          const std::string& setting_name) {
  CaseInstance c;
  c.family = fam;
  c.group = std::make_shared<FiniteGroup>(FiniteGroup::build(fam, l, r));
  c.l = c.group->param_l();
  c.r = fam == Family::SemiDirect ? c.group->param_r() : 0;
  c.setting = make_setting(setting_name, c.l);
  const FiniteGroup& G = *c.group;
  l = c.l;

  Subgroup sig = subgroup_generated(G, {G.generator("sigma")});
  Subgroup tau = subgroup_generated(G, {G.generator("tau")});

  ModPtr M = share(permutation_module(G, l, coset_action(G, sig), "M"));

  // Polynomial chain M_0 < M_1 < ... < M_{l-1} = M, with coordinates in M.
  std::vector<ModPtr> chain(static_cast<std::size_t>(l));
  std::vector<MatrixFl> chain_incl;  // inclusion into M
  for (long k = 0; k + 1 < l; ++k) {
    auto f = poly_filtration(*M, static_cast<std::size_t>(k),
                             "M" + std::to_string(k));
    chain[static_cast<std::size_t>(k)] = share(std::move(f.sub));
    chain_incl.push_back(f.inclusion);
  }
  chain[static_cast<std::size_t>(l - 1)] = M;
  chain_incl.push_back(MatrixFl::identity(l, static_cast<std::size_t>(l)));

  // Canonical graded pieces, shared across all rows.
  std::vector<ModPtr> graded;  // D2l: [T, N']; SemiDirect: [R0..R_{r-1}]
  if (fam == Family::D2l) {
    auto t = trivial_module(G, l, "T");
    t.set_twist(1);
    graded.push_back(share(std::move(t)));
    graded.push_back(
        share(scalar_module(G, l, {{"sigma", -1}, {"tau", 1}}, "N'")));
  } else {
    long zinv = MatrixFl::inv_mod(G.zeta(), l);
    for (long j = 0; j < c.r; ++j) {
      if (j == 0) {
        auto t = trivial_module(G, l, "R0");
        t.set_twist(1);
        graded.push_back(share(std::move(t)));
      } else {
        graded.push_back(share(scalar_module(
            G, l, {{"sigma", pow_mod(zinv, j, l)}, {"tau", 1}},
            "R" + std::to_string(j))));
      }
    }
  }
  auto expected_piece = [&](long k) -> ModPtr {
    if (fam == Family::D2l) return graded[static_cast<std::size_t>(k % 2)];
    return graded[static_cast<std::size_t>(k % c.r)];
  };

  auto name_of_level = [&](long k) {
    return k == l - 1 ? std::string("M") : "M" + std::to_string(k);
  };

  // Rows from the top of the ladder down.
  for (long k = l - 1; k >= 1; --k) {
    const MatrixFl incl =
        solve_cols(chain_incl[static_cast<std::size_t>(k)],
                   chain_incl[static_cast<std::size_t>(k - 1)]);
    auto q = quotient_module(*chain[static_cast<std::size_t>(k)], incl, "Q");
    ModPtr target = expected_piece(k);
    MatrixFl fix = equivariant_iso(q.quot, *target);
    c.sequences.push_back({chain[static_cast<std::size_t>(k - 1)],
                           chain[static_cast<std::size_t>(k)], target, incl,
                           fix.mul(q.projection),
                           "0 -> " + name_of_level(k - 1) + " -> " +
                               name_of_level(k) + " -> " + target->label() +
                               " -> 0"});
  }
  // Bottom row: 0 -> 0 -> M0 -> (bottom graded piece) -> 0.
  ModPtr Z = zero_module(G, l);
  ModPtr bottom = graded[0];
  MatrixFl zi(l, 1, 0);
  MatrixFl bp = equivariant_iso(*chain[0], *bottom);
  c.sequences.push_back({Z, chain[0], bottom, zi, bp,
                         "0 -> 0 -> M0 -> " + bottom->label() + " -> 0"});

  ModPtr N = share(permutation_module(G, l, coset_action(G, tau), "N"));
  if (fam == Family::D2l) {
    c.direct_sums.push_back({N, {graded[1], graded[0]}, "N ~ N' (+) T"});
    c.parameter_parts = {graded[1]};
  } else {
    c.direct_sums.push_back({N, graded, "N ~ R0 (+) ... (+) R_{r-1}"});
    c.parameter_parts.assign(graded.begin() + 1, graded.end());
    c.notes.push_back(
        "ladder quotient index is taken mod r (the statement's mod-l "
        "subscript is read as a typo)");
  }

  c.M = M;
  c.N = N;
  for (auto& m : chain) c.modules.push_back(m);
  for (auto& g : graded) c.modules.push_back(g);
  c.modules.push_back(N);
  c.modules.push_back(Z);
  c.ambient_pinned[graded[0].get()] = true;

  std::vector<const GModule*> nf_euler;
  if (fam == Family::SemiDirect)
    for (auto& m : chain) nf_euler.push_back(m.get());
  finalize_case(c, nf_euler);
  return c;
}

}  // namespace

Setting make_setting(const std::string& name, long l) {
  Setting s;
  s.name = name;
  if (name == "ff-mu") {
    s.kind = Setting::Kind::FunctionField;
    s.mu_in_base = true;
    s.ambient_h0 = 1;
    s.ambient_h1 = 1;
    s.ambient_h2 = 1;
  } else if (name == "ff-nomu") {
    if (l == 2)
      throw std::invalid_argument(
          "ff-nomu: impossible for l = 2 (a square root of unity always "
          "lies in the base)");
    s.kind = Setting::Kind::FunctionField;
    s.mu_in_base = false;
    s.ambient_h0 = 0;
    s.ambient_h1 = 0;
    s.ambient_h2 = 1;
  } else if (name == "nf") {
    s.kind = Setting::Kind::NumberField;
    s.mu_in_base = (l == 2);
    if (l == 2) {
      s.ambient_h0 = 1;
      s.ambient_h1 = 2;
      s.ambient_h2 = 1;
    } else {
      s.ambient_h0 = 0;
      s.ambient_h1 = 1;
      s.ambient_h2 = 0;
    }
  } else {
    throw std::invalid_argument("unknown setting '" + name +
                                "' (expected ff-mu, ff-nomu, or nf)");
  }
  s.b_nontrivial = !s.mu_in_base;
  return s;
}

std::vector<std::string> setting_names() { return {"ff-mu", "ff-nomu", "nf"}; }

CaseInstance build_case(Family family, long l, long r,
                        const std::string& setting_name) {
  switch (family) {
    case Family::S3:
      if (l != 0 && l != 3)
        throw std::invalid_argument("s3: l is fixed at 3");
      if (r != 0) throw std::invalid_argument("s3: no parameter r");
      return build_s3(setting_name);
    case Family::S4:
    case Family::A4:
      if (l != 0 && l != 2)
        throw std::invalid_argument("s4/a4: l is fixed at 2");
      if (r != 0) throw std::invalid_argument("s4/a4: no parameter r");
      return build_s4a4(family, setting_name);
    case Family::D2l:
      if (r != 0) throw std::invalid_argument("d2l: no parameter r");
      return build_ladder(Family::D2l, l, 0, setting_name);
    case Family::SemiDirect:
      return build_ladder(Family::SemiDirect, l, r, setting_name);
  }
  throw std::invalid_argument("unknown family");
}

std::vector<std::string> case_ids() {
  return {"s3", "s4", "a4", "d2l", "semidirect"};
}

Family family_of_id(const std::string& id) {
  if (id == "s3") return Family::S3;
  if (id == "s4") return Family::S4;
  if (id == "a4") return Family::A4;
  if (id == "d2l") return Family::D2l;
  if (id == "semidirect") return Family::SemiDirect;
  throw std::invalid_argument("unknown case id '" + id + "'");
}

std::string id_of_family(Family f) {
  switch (f) {
    case Family::S3: return "s3";
    case Family::S4: return "s4";
    case Family::A4: return "a4";
    case Family::D2l: return "d2l";
    case Family::SemiDirect: return "semidirect";
  }
  return "?";
}

CaseInstance build_case_by_id(const std::string& id, long l, long r,
                              const std::string& setting_name) {
  return build_case(family_of_id(id), l, r, setting_name);
}

CaseReport verify_case(const CaseInstance& c) {
  CaseReport rep;
  rep.notes = c.notes;
  bool ok = true;

  for (const SES& s : c.sequences) {
    bool e = check_exact(s);
    rep.sequences.push_back({s.note, e});
    ok = ok && e;
    for (const Subgroup& h : c.inertia_family) {
      auto ir = invariant_sequence(s, h);
      rep.invariants.push_back(
          {s.note, subgroup_desc(h), ir.left_exact, ir.right_exact});
      ok = ok && ir.left_exact && ir.right_exact;
    }
  }

  // Graded pieces of each sequence, re-derived from scratch: the quotient of
  // the middle by the image of the left map must be isomorphic to the stored
  // right-hand object.
  for (const SES& s : c.sequences) {
    if (s.A->dim() == 0) {
      IsoCheck v = is_isomorphic(*s.B, *s.C);
      rep.isos.push_back({"graded piece of [" + s.note + "]", v});
      ok = ok && v == IsoCheck::Yes;
      continue;
    }
    auto q = quotient_module(*s.B, s.i, "q");
    IsoCheck v = is_isomorphic(q.quot, *s.C);
    rep.isos.push_back({"graded piece of [" + s.note + "]", v});
    ok = ok && v == IsoCheck::Yes;
  }

  // Direct-sum decompositions.
  for (const auto& d : c.direct_sums) {
    GModule acc = **d.parts.begin();
    for (std::size_t i = 1; i < d.parts.size(); ++i)
      acc = direct_sum(acc, *d.parts[i]);
    IsoCheck v = is_isomorphic(*d.whole, acc);
    rep.isos.push_back({d.note, v});
    ok = ok && v == IsoCheck::Yes;
  }

  // Ambient-pinned objects really are copies of the arithmetic twist
  // (isomorphic to the trivial module as plain group representations).
  for (const ModPtr& m : c.modules) {
    if (!c.ambient_pinned.at(m.get())) continue;
    GModule t = trivial_module(*c.group, c.l);
    IsoCheck v = is_isomorphic(*m, t);
    rep.isos.push_back({"pinned '" + m->label() + "' ~ trivial", v});
    ok = ok && v == IsoCheck::Yes;
  }

  // Family-specific frozen dimension identities.
  if (c.family == Family::S4 || c.family == Family::A4) {
    const GModule* M1 = nullptr;
    for (auto& m : c.modules)
      if (m->label() == "M1") M1 = m.get();
    const GModule* Np = c.parameter_parts.at(0).get();
    for (const Subgroup& h : c.inertia_family) {
      if (h.order() != 2) continue;
      bool pass = invariant_dim(*c.M, h) == 3 &&
                  invariant_dim(*M1, h) == 2 && invariant_dim(*Np, h) == 1;
      rep.dim_checks.push_back(
          {"transposition " + subgroup_desc(h) + ": (M,M1,N') = (3,2,1)",
           pass});
      ok = ok && pass;
    }
  }
  if (c.family == Family::SemiDirect) {
    // Composition-factor multiplicities of M: each nontrivial piece
    // (l-1)/r times, the trivial piece (l-1)/r + 1 times.
    std::map<const GModule*, long> count;
    for (const SES& s : c.sequences) count[s.C.get()]++;
    long expect = (c.l - 1) / c.r;
    for (const ModPtr& part : c.direct_sums.at(0).parts) {
      long want = part->twist() == 1 ? expect + 1 : expect;
      bool pass = count[part.get()] == want;
      rep.dim_checks.push_back(
          {"multiplicity of " + part->label() + " in M = " +
               std::to_string(want),
           pass});
      ok = ok && pass;
    }
  }

  // The global-section table of every pinned object matches the ambient
  // twist's own global-section rank.
  for (const ModPtr& m : c.modules) {
    if (!c.ambient_pinned.at(m.get())) continue;
    bool pass = c.h0_table.at(m.get()) == c.setting.ambient_h0;
    rep.dim_checks.push_back(
        {"h0('" + m->label() + "') matches ambient", pass});
    ok = ok && pass;
  }

  rep.all_pass = ok;
  return rep;
}

std::string CaseReport::str() const {
  std::ostringstream os;
  for (const auto& s : sequences)
    os << (s.exact ? "[ok] " : "[FAIL] ") << "exact: " << s.note << "\n";
  std::size_t inv_pass = 0;
  for (const auto& iv : invariants)
    if (iv.left_exact && iv.right_exact) ++inv_pass;
  os << (inv_pass == invariants.size() ? "[ok] " : "[FAIL] ")
     << "invariant exactness: " << inv_pass << "/" << invariants.size()
     << " (sequence, inertia) pairs\n";
  for (const auto& iv : invariants)
    if (!(iv.left_exact && iv.right_exact))
      os << "  [FAIL] " << iv.seq_note << " at I = " << iv.subgroup_desc
         << (iv.left_exact ? "" : " [left]")
         << (iv.right_exact ? "" : " [right]") << "\n";
  for (const auto& i : isos)
    os << (i.verdict == IsoCheck::Yes ? "[ok] " : "[FAIL] ") << i.what
       << "\n";
  for (const auto& d : dim_checks)
    os << (d.pass ? "[ok] " : "[FAIL] ") << d.what << "\n";
  for (const auto& n : notes) os << "[note] " << n << "\n";
  os << (all_pass ? "ALL CHECKS PASS" : "CHECKS FAILED") << "\n";
  return os.str();
}

}  // namespace reflectlab
