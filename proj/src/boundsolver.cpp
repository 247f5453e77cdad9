#include "reflectlab/boundsolver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace reflectlab {

namespace {

std::string hvar(int i, const std::string& label) {
  return "h" + std::to_string(i) + "(" + label + ")";
}

bool form_less(const AffineForm& a, const AffineForm& b) {
  if (a.slope != b.slope) return a.slope < b.slope;
  return a.offset < b.offset;
}

// Exact projection of a constraint system onto a handful of kept variables.
// Equalities are used as substitutions; the remaining variables go through
// Fourier-Motzkin with Imbert's redundancy criterion: a combined row whose
// set of ancestor inequalities exceeds (number of eliminated variables in
// its derivation) + 1 is provably implied by other rows and is dropped.
class Projector {
 public:
  explicit Projector(const LinearSystem& sys) {
    unsigned id = 0;
    for (const auto& e : sys.equalities())
      rows_.push_back({e.expr, true, {}, {}});
    for (const auto& q : sys.inequalities())
      rows_.push_back({q.expr, false, {id++}, {}});
  }

  void eliminate(const std::string& v) {
    // Prefer an equality substitution.
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (!rows_[k].is_eq) continue;
      Rational cv = rows_[k].e.coeff_of(v);
      if (cv.is_zero()) continue;
      Row sub = rows_[k];
      rows_.erase(rows_.begin() + static_cast<long>(k));
      for (Row& r : rows_) {
        Rational c = r.e.coeff_of(v);
        if (c.is_zero()) continue;
        r.e = r.e.minus(sub.e.scaled(c / cv));
        r.e.coeff.erase(v);
      }
      compact();
      return;
    }
    // Fourier-Motzkin on the inequalities.
    std::vector<Row> keep, pos, neg;
    for (Row& r : rows_) {
      Rational c = r.e.coeff_of(v);
      if (c.is_zero())
        keep.push_back(std::move(r));
      else if (c.sign() > 0)
        pos.push_back(std::move(r));
      else
        neg.push_back(std::move(r));
    }
    for (const Row& p : pos) {
      Rational cp = p.e.coeff_of(v);
      for (const Row& q : neg) {
        Rational cq = q.e.coeff_of(v);
        // cp > 0 > cq: combine to cancel v.
        Row nr;
        nr.is_eq = false;
        nr.e = p.e.scaled(-cq).plus(q.e.scaled(cp));
        nr.e.coeff.erase(v);
        nr.hist = merged(p.hist, q.hist);
        nr.elims = merged(p.elims, q.elims);
        if (std::find(nr.elims.begin(), nr.elims.end(), v) == nr.elims.end())
          nr.elims.push_back(v);
        if (nr.hist.size() > nr.elims.size() + 1) continue;  // Imbert
        keep.push_back(std::move(nr));
      }
    }
    rows_ = std::move(keep);
    compact();
    if (std::getenv("RL_FM_DEBUG") != nullptr)
      std::fprintf(stderr, "  elim %-14s fm  %zux%zu -> %zu rows\n", v.c_str(),
                   pos.size(), neg.size(), rows_.size());
  }

  // Eliminate every variable in `group`, choosing at each step the cheapest
  // one: an equality substitution if available, otherwise the variable with
  // the fewest pairwise Fourier-Motzkin combinations.
  void eliminate_group(std::vector<std::string> group) {
    while (!group.empty()) {
      std::size_t pick = 0;
      bool pick_eq = false;
      std::size_t pick_cost = 0;
      for (std::size_t i = 0; i < group.size(); ++i) {
        bool in_eq = false;
        std::size_t pos = 0, neg = 0;
        for (const Row& r : rows_) {
          Rational c = r.e.coeff_of(group[i]);
          if (c.is_zero()) continue;
          if (r.is_eq) {
            in_eq = true;
            break;
          }
          (c.sign() > 0 ? pos : neg)++;
        }
        std::size_t cost = pos * neg;
        if (i == 0 || (in_eq && !pick_eq) ||
            (in_eq == pick_eq && cost < pick_cost)) {
          pick = i;
          pick_eq = in_eq;
          pick_cost = cost;
        }
      }
      eliminate(group[pick]);
      group.erase(group.begin() + static_cast<long>(pick));
    }
  }

  // Remaining rows (after eliminating everything outside the kept set).
  struct Out {
    LinExpr e;
    bool is_eq;
  };
  std::vector<Out> result() const {
    std::vector<Out> out;
    for (const Row& r : rows_) out.push_back({r.e, r.is_eq});
    return out;
  }

 private:
  struct Row {
    LinExpr e;
    bool is_eq = false;
    std::vector<unsigned> hist;        // ancestor inequality ids, sorted
    std::vector<std::string> elims;    // variables combined away, sorted
  };

  template <typename T>
  static std::vector<T> merged(const std::vector<T>& a,
                               const std::vector<T>& b) {
    std::vector<T> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(out));
    return out;
  }

  // Single-variable lower-bound rows (-v + c <= 0). These carry the
  // nonnegativity facts that justify orthant reasoning, so the pruning
  // passes must never delete them.
  static bool is_protected(const Row& r) {
    return !r.is_eq && r.e.coeff.size() == 1 &&
           r.e.coeff.begin()->second.sign() < 0;
  }

  // Every variable in the assembled systems is nonnegative, so a row
  // e1 <= 0 is implied by e2 <= 0 whenever e1 - e2 has all coefficients
  // and constant <= 0 (then e1(x) <= e2(x) on the nonnegative orthant).
  static bool implied_over_nonneg(const LinExpr& e1, const LinExpr& e2) {
    if (e1.constant > e2.constant) return false;
    auto i1 = e1.coeff.begin(), i2 = e2.coeff.begin();
    while (i1 != e1.coeff.end() || i2 != e2.coeff.end()) {
      if (i2 == e2.coeff.end() || (i1 != e1.coeff.end() && i1->first < i2->first)) {
        if (i1->second.sign() > 0) return false;  // e1 has extra positive
        ++i1;
      } else if (i1 == e1.coeff.end() || i2->first < i1->first) {
        if (i2->second.sign() < 0) return false;  // e2 has extra negative
        ++i2;
      } else {
        if (i1->second > i2->second) return false;
        ++i1;
        ++i2;
      }
    }
    return true;
  }

  // Normalize rows, drop tautologies and single-row-dominated duplicates.
  void compact() {
    std::map<std::string, std::size_t> best;  // coeff signature -> index
    std::vector<Row> out;
    for (Row& r : rows_) {
      if (r.e.coeff.empty()) {
        if (r.is_eq ? !r.e.constant.is_zero() : r.e.constant.sign() > 0)
          out.push_back(std::move(r));  // keep: witnesses infeasibility
        continue;                       // tautology: drop
      }
      if (!r.is_eq && r.e.constant.sign() <= 0 && !is_protected(r)) {
        // All coefficients <= 0: implied by the nonnegativity rows, which
        // stay in the system for every live variable (see is_protected).
        bool all_np = true;
        for (const auto& [n, c] : r.e.coeff)
          if (c.sign() > 0) {
            all_np = false;
            break;
          }
        if (all_np) continue;
      }
      // Normalize: equalities scale so the first coefficient is +1;
      // inequalities scale by a positive factor so it is +1 or -1.
      Rational lead = r.e.coeff.begin()->second;
      Rational scale = r.is_eq ? Rational(1) / lead
                               : Rational(1) / (lead.sign() < 0 ? -lead : lead);
      r.e = r.e.scaled(scale);
      std::string sig = r.is_eq ? "=" : "<";
      for (const auto& [nm, c] : r.e.coeff) sig += nm + ":" + c.str() + ";";
      auto it = best.find(sig);
      if (it == best.end()) {
        best[sig] = out.size();
        out.push_back(std::move(r));
        continue;
      }
      Row& prev = out[it->second];
      if (r.is_eq) {
        // Same left side: constants must agree, else infeasible; keep one
        // (a disagreement surfaces as an infeasible constant row later).
        if (prev.e.constant != r.e.constant) out.push_back(std::move(r));
        continue;
      }
      // expr + c <= 0 is tighter for larger c: keep the tighter row.
      if (r.e.constant > prev.e.constant) prev = std::move(r);
    }

    // Pairwise domination among inequalities (capped: the check is
    // quadratic, and large systems are better thinned by later steps).
    std::vector<std::size_t> iq;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!out[i].is_eq && !out[i].e.coeff.empty()) iq.push_back(i);
    if (iq.size() >= 2 && iq.size() <= 30000) {
      std::vector<bool> dead(out.size(), false);
      for (std::size_t a : iq) {
        if (dead[a] || is_protected(out[a])) continue;
        for (std::size_t b : iq) {
          if (a == b || dead[b]) continue;
          if (implied_over_nonneg(out[a].e, out[b].e)) {
            dead[a] = true;
            break;
          }
        }
      }
      std::vector<Row> kept;
      for (std::size_t i = 0; i < out.size(); ++i)
        if (!dead[i]) kept.push_back(std::move(out[i]));
      out = std::move(kept);
    }
    rows_ = std::move(out);
  }

  std::vector<Row> rows_;
};

void dedupe(std::vector<AffineForm>& v) {
  std::sort(v.begin(), v.end(), form_less);
  v.erase(std::unique(v.begin(), v.end(),
                      [](const AffineForm& a, const AffineForm& b) {
                        return a.slope == b.slope && a.offset == b.offset;
                      }),
          v.end());
}

}  // namespace

std::string level_name(Level v) {
  switch (v) {
    case Level::H1: return "h1";
    case Level::ClS: return "cls";
    case Level::Cl: return "cl";
  }
  return "?";
}

Level level_of_name(const std::string& s) {
  if (s == "h1") return Level::H1;
  if (s == "cls") return Level::ClS;
  if (s == "cl") return Level::Cl;
  throw std::invalid_argument("unknown level '" + s +
                              "' (expected h1, cls, or cl)");
}

std::string AffineForm::str(const std::string& param) const {
  std::ostringstream os;
  if (slope.is_zero()) {
    os << offset.str();
    return os.str();
  }
  if (slope == Rational(1))
    os << param;
  else
    os << "(" << slope.str() << ")*" << param;
  if (offset.sign() > 0) os << " + " << offset.str();
  if (offset.sign() < 0) os << " - " << (-offset).str();
  return os.str();
}

Rational BoundWindow::eval_lower(const Rational& p) const {
  Rational best = lowers.front().eval(p);
  for (const auto& f : lowers) best = std::max(best, f.eval(p));
  return best;
}

Rational BoundWindow::eval_upper(const Rational& p) const {
  Rational best = uppers.front().eval(p);
  for (const auto& f : uppers) best = std::min(best, f.eval(p));
  return best;
}

Rational ClassWindow::eval_lower(const Rational& x) const {
  Rational best = lowers.front().eval(x);
  for (const auto& f : lowers) best = std::max(best, f.eval(x));
  return best;
}

Rational ClassWindow::eval_upper(const Rational& x) const {
  Rational best = uppers.front().eval(x);
  for (const auto& f : uppers) best = std::min(best, f.eval(x));
  return best;
}

Assembled assemble(const CaseInstance& c) {
  Assembled out;
  LinearSystem& sys = out.sys;

  struct Levels {
    LinExpr h[4];
  };
  std::map<const GModule*, Levels> lv;
  std::vector<std::string> h1_names;

  for (const ModPtr& mp : c.modules) {
    const GModule* m = mp.get();
    Levels& L = lv[m];
    L.h[0] = LinExpr::lit(Rational(c.h0_table.at(m)));
    if (m->dim() == 0) {
      for (int i = 1; i <= 3; ++i) L.h[i] = LinExpr::lit(Rational(0));
      continue;
    }
    bool pinned = c.ambient_pinned.at(m);
    if (pinned) {
      L.h[1] = LinExpr::lit(Rational(c.setting.ambient_h1));
      L.h[2] = LinExpr::lit(Rational(c.setting.ambient_h2));
    } else {
      for (int i : {1, 2}) {
        std::string nm = hvar(i, m->label());
        sys.declare_var(nm);
        sys.add_nonneg(nm);
        L.h[i] = LinExpr::var(nm);
        (i == 1 ? h1_names : out.h2_vars).push_back(nm);
      }
    }
    std::string h3 = hvar(3, m->label());
    sys.declare_var(h3);
    sys.add_nonneg(h3);
    L.h[3] = LinExpr::var(h3);
    out.h3_vars.push_back(h3);
  }

  out.target = hvar(1, c.M->label());
  out.parameter = hvar(1, c.N->label());
  for (const std::string& nm : h1_names)
    if (nm != out.target && nm != out.parameter)
      out.interior_h1_vars.push_back(nm);

  // Long-exact-sequence skeleton of each short exact sequence: consecutive
  // terms h0(A), h0(B), h0(C), h1(A), ..., h2(C) split as term_j = r_j +
  // r_{j+1} with r_0 = 0, truncated by r_9 <= h3(A).
  int si = 0;
  for (const SES& s : c.sequences) {
    const Levels& A = lv.at(s.A.get());
    const Levels& B = lv.at(s.B.get());
    const Levels& C = lv.at(s.C.get());
    const LinExpr term[9] = {A.h[0], B.h[0], C.h[0], A.h[1], B.h[1],
                             C.h[1], A.h[2], B.h[2], C.h[2]};
    LinExpr rv[10];
    for (int j = 1; j <= 9; ++j) {
      std::string nm = "r" + std::to_string(j) + "#" + std::to_string(si);
      sys.declare_var(nm);
      sys.add_nonneg(nm);
      rv[j] = LinExpr::var(nm);
      out.rank_vars.push_back(nm);
    }
    std::string tag = " [seq " + std::to_string(si) + "]";
    sys.add_eq(term[0].minus(rv[1]), "term0" + tag);
    for (int j = 1; j <= 8; ++j)
      sys.add_eq(term[j].minus(rv[j]).minus(rv[j + 1]),
                 "term" + std::to_string(j) + tag);
    sys.add_le(rv[9].minus(A.h[3]), "r9 <= h3(A)" + tag);
    ++si;
  }

  // Euler characteristic rows where the setting provides them, plus the
  // stalk-rank cap h3 <= dim.
  for (const ModPtr& mp : c.modules) {
    const GModule* m = mp.get();
    if (m->dim() == 0 || !c.euler_flag.at(m)) continue;
    const Levels& L = lv.at(m);
    LinExpr chi = L.h[0].minus(L.h[1]).plus(L.h[2]).minus(L.h[3]);
    Rational rhs = c.setting.kind == Setting::Kind::FunctionField
                       ? Rational(0)
                       : Rational(-static_cast<long>(m->dim()));
    sys.add_eq(chi.minus(LinExpr::lit(rhs)), "euler " + m->label());
    sys.add_le(L.h[3].minus(LinExpr::lit(Rational(
                   static_cast<long>(m->dim())))),
               "h3 <= dim " + m->label());
  }

  // Cohomology is additive over the recorded direct-sum decompositions.
  for (const auto& d : c.direct_sums) {
    long h0_whole = c.h0_table.at(d.whole.get());
    long h0_parts = 0;
    for (const ModPtr& p : d.parts) h0_parts += c.h0_table.at(p.get());
    if (h0_whole != h0_parts)
      throw std::logic_error("direct sum h0 mismatch: " + d.note);
    for (int i = 1; i <= 3; ++i) {
      LinExpr e = lv.at(d.whole.get()).h[i];
      for (const ModPtr& p : d.parts) e = e.minus(lv.at(p.get()).h[i]);
      sys.add_eq(e, "dsum h" + std::to_string(i) + ": " + d.note);
    }
  }

  return out;
}

BoundWindow derive_bounds(const CaseInstance& c) {
  Assembled a = assemble(c);

  Projector proj(a.sys);
  proj.eliminate_group(a.rank_vars);
  if (c.family == Family::D2l || c.family == Family::SemiDirect) {
    // Ladder families: the constraint graph is a path (module k only
    // shares rows with modules k-1 and k+1) plus a few global twist
    // columns, so eliminating per module in filtration order keeps the
    // intermediate systems small. The projection itself is independent
    // of the order.
    std::set<std::string> pool;
    pool.insert(a.h2_vars.begin(), a.h2_vars.end());
    pool.insert(a.h3_vars.begin(), a.h3_vars.end());
    pool.insert(a.interior_h1_vars.begin(), a.interior_h1_vars.end());
    std::vector<std::string> order;
    for (const auto& m : c.modules)
      for (int i : {2, 3, 1}) {
        std::string v = hvar(i, m->label());
        if (pool.erase(v) > 0) order.push_back(v);
      }
    order.insert(order.end(), pool.begin(), pool.end());
    for (const std::string& v : order) proj.eliminate(v);
  } else {
    std::vector<std::string> h23 = a.h2_vars;
    h23.insert(h23.end(), a.h3_vars.begin(), a.h3_vars.end());
    proj.eliminate_group(h23);
    proj.eliminate_group(a.interior_h1_vars);
  }

  BoundWindow w;
  auto classify = [&](const LinExpr& e) {
    // e <= 0 over {target, parameter}
    Rational ay = e.coeff_of(a.target);
    Rational bp = e.coeff_of(a.parameter);
    Rational c0 = e.constant;
    if (ay.is_zero() && bp.is_zero()) {
      if (c0.sign() > 0)
        throw std::logic_error("derive_bounds: infeasible system for case " +
                               id_of_family(c.family) + " / " +
                               c.setting.name);
      return;
    }
    if (ay.is_zero()) {
      w.parameter_constraints.push_back({-bp, -c0});
      return;
    }
    AffineForm f{-bp / ay, -c0 / ay};
    if (ay.sign() > 0)
      w.uppers.push_back(f);
    else
      w.lowers.push_back(f);
  };

  for (const auto& row : proj.result()) {
    classify(row.e);
    if (row.is_eq) classify(row.e.scaled(Rational(-1)));
  }

  if (w.uppers.empty() || w.lowers.empty())
    throw std::logic_error(
        "derive_bounds: projection produced no two-sided window for case " +
        id_of_family(c.family) + " / " + c.setting.name);
  dedupe(w.lowers);
  dedupe(w.uppers);
  dedupe(w.parameter_constraints);
  // Primary forms: the ones that dominate for large parameter values.
  w.upper = *std::min_element(w.uppers.begin(), w.uppers.end(), form_less);
  w.lower = *std::max_element(w.lowers.begin(), w.lowers.end(), form_less);
  return w;
}

long unit_rank(const CaseInstance& c, const FieldShape& f) {
  if (c.setting.kind == Setting::Kind::FunctionField)
    return c.setting.mu_in_base ? 1 : 0;
  if (f.r1 + 2 * f.r2 != f.degree)
    throw std::invalid_argument("unit_rank: invalid signature (r1 + 2 r2 != "
                                "degree)");
  if (f.u < 1 || f.u > f.degree)
    throw std::invalid_argument("unit_rank: u out of range [1, degree]");
  long s = f.r1 + f.r2 - 1;
  long t = (c.l == 2) ? 1 : (f.torsion ? 1 : 0);
  return s + f.u + t;
}

ClassWindow to_class_bounds(const BoundWindow& w, const CaseInstance& c,
                            const FieldShape* k1, const FieldShape* k2,
                            Level level) {
  if (level == Level::H1)
    throw std::invalid_argument("to_class_bounds: already at the h1 level");
  bool ff = c.setting.kind == Setting::Kind::FunctionField;
  if (level == Level::Cl && ff)
    throw std::invalid_argument(
        "to_class_bounds: full class-group level applies to the "
        "number-field setting only");
  long U1, U2, u1 = 1, u2 = 1;
  if (ff) {
    U1 = U2 = c.setting.mu_in_base ? 1 : 0;
  } else {
    if (!k1 || !k2)
      throw std::invalid_argument(
          "to_class_bounds: number-field setting needs both field shapes");
    if (k1->degree != static_cast<long>(c.M->dim()) ||
        k2->degree != static_cast<long>(c.N->dim()))
      throw std::invalid_argument(
          "to_class_bounds: field degrees do not match the case");
    U1 = unit_rank(c, *k1);
    U2 = unit_rank(c, *k2);
    u1 = k1->u;
    u2 = k2->u;
  }

  // h1-side: lo(P) <= h1_1 <= hi(P) with h1_i = x_i + U_i, P = x2 + U2.
  ClassWindow out;
  for (const auto& f : w.lowers) {
    if (f.slope.sign() < 0)
      throw std::logic_error("to_class_bounds: negative lower slope");
    out.lowers.push_back({f.slope, f.slope * Rational(U2) + f.offset -
                                       Rational(U1)});
  }
  for (const auto& f : w.uppers) {
    if (f.slope.sign() < 0)
      throw std::logic_error("to_class_bounds: negative upper slope");
    out.uppers.push_back({f.slope, f.slope * Rational(U2) + f.offset -
                                       Rational(U1)});
  }
  if (level == Level::Cl) {
    // Widen by the S-kernel slack: rank of the kernel of Cl ->> Cl_S is at
    // most max(u - 1, 0) on each side.
    Rational slack2(std::max(u2 - 1, 0L));
    Rational slack1(std::max(u1 - 1, 0L));
    for (auto& f : out.lowers) f.offset -= f.slope * slack2;
    for (auto& f : out.uppers) f.offset += slack1;
  }
  dedupe(out.lowers);
  dedupe(out.uppers);
  out.upper =
      *std::min_element(out.uppers.begin(), out.uppers.end(), form_less);
  out.lower =
      *std::max_element(out.lowers.begin(), out.lowers.end(), form_less);
  return out;
}

PaperTarget paper_target(const CaseInstance& c, Level level,
                         const FieldShape* k1, const FieldShape* k2) {
  PaperTarget t;
  bool ff = c.setting.kind == Setting::Kind::FunctionField;
  const long l = c.l, r = c.r;

  if (level == Level::H1) return t;

  if (ff && level == Level::ClS) {
    bool mu = c.setting.mu_in_base;
    switch (c.family) {
      case Family::S3:
        t.has_lower = t.has_upper = true;
        t.lower = {Rational(1), Rational(mu ? -2 : -1)};
        t.upper = {Rational(1), Rational(0)};
        break;
      case Family::S4:
      case Family::A4:
        t.has_lower = t.has_upper = true;
        t.lower = {Rational(1), Rational(-2)};
        t.upper = {Rational(1), Rational(0)};
        break;
      case Family::D2l:
        t.has_lower = t.has_upper = true;
        if (mu) {
          t.lower = {Rational(1), Rational(-(l - 1) / 2)};
          t.upper = {Rational(l - 1, 2), Rational(1)};
        } else {
          t.lower = {Rational(1), Rational(-1)};
          t.upper = {Rational(l - 1, 2), Rational(0)};
        }
        break;
      case Family::SemiDirect:
        t.has_lower = t.has_upper = true;
        if (mu) {
          t.lower = {Rational(1, r - 1),
                     Rational(-(l - 3)) / Rational(r - 1) - Rational(2)};
          t.upper = {Rational(l - 1, r), Rational(l - 1, r)};
        } else {
          t.lower = {Rational(1, r - 1),
                     Rational(-(l - 2)) / Rational(r - 1)};
          t.upper = {Rational(l - 1, r), Rational(0)};
        }
        break;
    }
    return t;
  }

  if (!ff && level == Level::ClS) {
    if (!k1 || !k2) return t;
    long t1 = (k1->r1 + k1->r2 - 1) + k1->u;
    long t2 = (k2->r1 + k2->r2 - 1) + k2->u;
    Rational dt(t2 - t1);
    switch (c.family) {
      case Family::S3:
        t.has_lower = t.has_upper = true;
        t.lower = {Rational(1), dt - Rational(1)};
        t.upper = {Rational(1), dt};
        t.hypothesis =
            "resolvent field differs from the level-l cyclotomic field";
        break;
      case Family::S4:
      case Family::A4:
        t.has_lower = t.has_upper = true;
        t.lower = {Rational(1), dt - Rational(2)};
        t.upper = {Rational(1), dt + Rational(1)};
        break;
      case Family::D2l:
        t.has_lower = t.has_upper = true;
        t.lower = {Rational(1), dt};
        t.upper = {Rational(l - 1, 2),
                   Rational(l - 1, 2) * Rational(t2 + 1) - Rational(t1 + 1)};
        t.hypothesis =
            "resolvent field linearly disjoint from the level-l cyclotomic "
            "field";
        break;
      case Family::SemiDirect:
        t.has_lower = t.has_upper = true;
        t.lower = {Rational(1, r - 1),
                   Rational(t2, r - 1) - Rational(t1 + 1)};
        t.upper = {Rational(l - 1, r), Rational(l - 1, r) * Rational(t2 + 1) +
                                           Rational(l - 1, r) - Rational(t1)};
        break;
    }
    return t;
  }

  if (!ff && level == Level::Cl) {
    // Stated only for the A4 family, split by archimedean type.
    if (c.family != Family::A4 || !k1 || !k2) return t;
    t.has_lower = t.has_upper = true;
    if (k1->r2 == 0) {  // totally real quartic
      t.lower = {Rational(1), Rational(-10)};
      t.upper = {Rational(1), Rational(10)};
    } else {  // totally complex quartic
      t.lower = {Rational(1), Rational(-8)};
      t.upper = {Rational(1), Rational(12)};
    }
    return t;
  }

  return t;
}

std::vector<std::pair<FieldShape, FieldShape>> admissible_shape_grid(
    const CaseInstance& c) {
  const long n = static_cast<long>(c.M->dim());
  const long m = static_cast<long>(c.N->dim());
  const bool tors = c.l == 2;
  auto mk = [&](long a1, long a2, long b1, long b2) {
    FieldShape k1{n, a1, a2, 1, tors};
    FieldShape k2{m, b1, b2, 1, tors};
    return std::make_pair(k1, k2);
  };
  switch (c.family) {
    case Family::S3:
      return {mk(3, 0, 2, 0), mk(1, 1, 0, 1)};
    case Family::S4:
      return {mk(4, 0, 3, 0), mk(2, 1, 1, 1), mk(0, 2, 3, 0)};
    case Family::A4:
      return {mk(4, 0, 3, 0), mk(0, 2, 3, 0)};
    case Family::D2l:
      return {mk(c.l, 0, 2, 0), mk(1, (c.l - 1) / 2, 0, 1)};
    case Family::SemiDirect:
      return {mk(c.l, 0, c.r, 0)};
  }
  return {};
}

std::string bound_report_json(const CaseInstance& c, Level level,
                              const FieldShape* k1, const FieldShape* k2) {
  nlohmann::json j;
  j["case"] = id_of_family(c.family);
  j["setting"] = c.setting.name;
  j["params"] = {{"l", c.l}, {"r", c.r}};
  j["level"] = level_name(level);

  bool ff = c.setting.kind == Setting::Kind::FunctionField;
  FieldShape s1, s2;
  if (!ff && level != Level::H1 && (!k1 || !k2)) {
    auto grid = admissible_shape_grid(c);
    s1 = grid.front().first;
    s2 = grid.front().second;
    k1 = &s1;
    k2 = &s2;
  }

  BoundWindow w = derive_bounds(c);
  std::vector<AffineForm> lowers, uppers;
  AffineForm lo, hi;
  std::string param;
  if (level == Level::H1) {
    lo = w.lower;
    hi = w.upper;
    lowers = w.lowers;
    uppers = w.uppers;
    param = "h1 of the resolvent-side module";
  } else {
    ClassWindow cw = to_class_bounds(w, c, k1, k2, level);
    lo = cw.lower;
    hi = cw.upper;
    lowers = cw.lowers;
    uppers = cw.uppers;
    param = ff ? "l-rank of the resolvent curve's Picard group"
               : (level == Level::ClS
                      ? "l-rank of the resolvent field's S-class group"
                      : "l-rank of the resolvent field's class group");
  }
  j["parameter"] = param;
  j["lower"] = {{"slope", lo.slope.str()}, {"offset", lo.offset.str()}};
  j["upper"] = {{"slope", hi.slope.str()}, {"offset", hi.offset.str()}};

  PaperTarget t = paper_target(c, level, k1, k2);
  bool implies = true;
  if (t.has_lower || t.has_upper) {
    nlohmann::json pt;
    if (t.has_lower)
      pt["lower"] = {{"slope", t.lower.slope.str()},
                     {"offset", t.lower.offset.str()}};
    if (t.has_upper)
      pt["upper"] = {{"slope", t.upper.slope.str()},
                     {"offset", t.upper.offset.str()}};
    if (!t.hypothesis.empty()) pt["hypothesis"] = t.hypothesis;
    j["paper_target"] = pt;
    for (long x = 0; x <= 20 && implies; ++x) {
      Rational p(x);
      Rational dlo = lowers.front().eval(p), dhi = uppers.front().eval(p);
      for (const auto& f : lowers) dlo = std::max(dlo, f.eval(p));
      for (const auto& f : uppers) dhi = std::min(dhi, f.eval(p));
      if (t.has_lower && dlo < t.lower.eval(p)) implies = false;
      if (t.has_upper && dhi > t.upper.eval(p)) implies = false;
    }
  } else {
    j["paper_target"] = nullptr;
  }
  j["implies_paper"] = implies;
  return j.dump();
}

SampleResult enumerate_feasible(
    const LinearSystem& sys, long lo, long hi, long long budget,
    const std::function<bool(const std::map<std::string, Rational>&)>& cb) {
  SampleResult res;
  const auto& vars = sys.variables();
  const std::size_t n = vars.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[vars[i]] = i;

  // Column order for pivoting: rank variables first so that the h-levels
  // stay free and the telescoped ranks are forced.
  std::vector<std::size_t> colorder;
  for (std::size_t i = 0; i < n; ++i)
    if (vars[i][0] == 'r') colorder.push_back(i);
  for (std::size_t i = 0; i < n; ++i)
    if (vars[i][0] != 'r') colorder.push_back(i);

  struct Row {
    std::vector<Rational> a;
    Rational c;
  };
  std::vector<Row> rows;
  for (const auto& eq : sys.equalities()) {
    Row r;
    r.a.assign(n, Rational(0));
    r.c = eq.expr.constant;
    for (const auto& [nm, co] : eq.expr.coeff) r.a[idx.at(nm)] = co;
    rows.push_back(std::move(r));
  }

  // Gauss-Jordan elimination along colorder.
  std::vector<std::size_t> pivot_col;
  std::size_t rr = 0;
  for (std::size_t ci = 0; ci < n && rr < rows.size(); ++ci) {
    std::size_t col = colorder[ci];
    std::size_t sel = rr;
    while (sel < rows.size() && rows[sel].a[col].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rr], rows[sel]);
    Rational inv = Rational(1) / rows[rr].a[col];
    for (auto& x : rows[rr].a) x *= inv;
    rows[rr].c *= inv;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == rr || rows[k].a[col].is_zero()) continue;
      Rational f = rows[k].a[col];
      for (std::size_t t2 = 0; t2 < n; ++t2)
        rows[k].a[t2] -= f * rows[rr].a[t2];
      rows[k].c -= f * rows[rr].c;
    }
    pivot_col.push_back(col);
    ++rr;
  }
  // Remaining rows must be 0 = 0, else the equalities are inconsistent.
  for (std::size_t k = rr; k < rows.size(); ++k)
    if (!rows[k].c.is_zero()) {
      res.complete = true;
      return res;
    }
  rows.resize(rr);

  std::vector<bool> is_pivot(n, false);
  for (std::size_t k = 0; k < rr; ++k) is_pivot[pivot_col[k]] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t ci = 0; ci < n; ++ci)
    if (!is_pivot[colorder[ci]]) free_cols.push_back(colorder[ci]);
  const std::size_t F = free_cols.size();

  // Depth at which a column's value becomes known: free var -> its index;
  // pivot var -> max depth over the free vars in its row (-1 if constant).
  std::vector<long> resolve_depth(n, -1);
  for (std::size_t d = 0; d < F; ++d)
    resolve_depth[free_cols[d]] = static_cast<long>(d);
  for (std::size_t k = 0; k < rr; ++k) {
    long dmax = -1;
    for (std::size_t fidx = 0; fidx < F; ++fidx)
      if (!rows[k].a[free_cols[fidx]].is_zero())
        dmax = std::max(dmax, static_cast<long>(fidx));
    resolve_depth[pivot_col[k]] = dmax;
  }
  // Pivot rows grouped by their resolve depth.
  std::vector<std::vector<std::size_t>> rows_at_depth(F + 1);
  for (std::size_t k = 0; k < rr; ++k) {
    long d = resolve_depth[pivot_col[k]];
    rows_at_depth[static_cast<std::size_t>(d + 1)].push_back(k);
  }

  // Inequalities grouped by the depth all their variables are known.
  struct Iq {
    std::vector<std::pair<std::size_t, Rational>> terms;
    Rational c;
  };
  std::vector<std::vector<Iq>> iq_at_depth(F + 1);
  for (const auto& iq : sys.inequalities()) {
    Iq q;
    q.c = iq.expr.constant;
    long dmax = -1;
    for (const auto& [nm, co] : iq.expr.coeff) {
      std::size_t col = idx.at(nm);
      q.terms.push_back({col, co});
      dmax = std::max(dmax, resolve_depth[col]);
    }
    iq_at_depth[static_cast<std::size_t>(dmax + 1)].push_back(std::move(q));
  }

  std::vector<Rational> val(n, Rational(0));
  Rational rlo(lo), rhi(hi);
  bool stop = false;

  auto resolve_at = [&](std::size_t dplus1) -> bool {
    for (std::size_t k : rows_at_depth[dplus1]) {
      // pivot = -c - sum over free columns
      Rational v = -rows[k].c;
      for (std::size_t fidx = 0; fidx < F; ++fidx) {
        const Rational& a = rows[k].a[free_cols[fidx]];
        if (!a.is_zero()) v -= a * val[free_cols[fidx]];
      }
      if (!v.is_integer() || v < rlo || v > rhi) return false;
      val[pivot_col[k]] = v;
    }
    for (const Iq& q : iq_at_depth[dplus1]) {
      Rational s = q.c;
      for (const auto& [col, co] : q.terms) s += co * val[col];
      if (s.sign() > 0) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t d) {
    if (stop) return;
    if (d == F) {
      ++res.solutions;
      std::map<std::string, Rational> point;
      for (std::size_t i = 0; i < n; ++i) point[vars[i]] = val[i];
      if (!cb(point)) stop = true;
      return;
    }
    for (long v = lo; v <= hi && !stop; ++v) {
      if (++res.nodes > budget) {
        stop = true;
        return;
      }
      val[free_cols[d]] = Rational(v);
      if (!resolve_at(d + 1)) continue;
      dfs(d + 1);
    }
  };

  if (resolve_at(0)) {
    if (F == 0) {
      ++res.solutions;
      std::map<std::string, Rational> point;
      for (std::size_t i = 0; i < n; ++i) point[vars[i]] = val[i];
      cb(point);
    } else {
      dfs(0);
    }
  }
  res.complete = !stop;
  return res;
}

}  // namespace reflectlab
