#include "reflectlab/linear_system.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>

namespace reflectlab {

LinExpr LinExpr::var(const std::string& name, Rational c) {
  LinExpr e;
  if (!c.is_zero()) e.coeff[name] = c;
  return e;
}

LinExpr LinExpr::lit(Rational c) {
  LinExpr e;
  e.constant = c;
  return e;
}

LinExpr& LinExpr::add_term(const std::string& name, Rational c) {
  auto it = coeff.find(name);
  if (it == coeff.end()) {
    if (!c.is_zero()) coeff[name] = c;
  } else {
    it->second += c;
    if (it->second.is_zero()) coeff.erase(it);
  }
  return *this;
}

LinExpr LinExpr::plus(const LinExpr& o) const {
  LinExpr e = *this;
  for (const auto& [n, c] : o.coeff) e.add_term(n, c);
  e.constant += o.constant;
  return e;
}

LinExpr LinExpr::minus(const LinExpr& o) const {
  LinExpr e = *this;
  for (const auto& [n, c] : o.coeff) e.add_term(n, -c);
  e.constant -= o.constant;
  return e;
}

LinExpr LinExpr::scaled(const Rational& c) const {
  LinExpr e;
  if (c.is_zero()) return e;
  for (const auto& [n, v] : coeff) e.coeff[n] = v * c;
  e.constant = constant * c;
  return e;
}

Rational LinExpr::coeff_of(const std::string& name) const {
  auto it = coeff.find(name);
  return it == coeff.end() ? Rational(0) : it->second;
}

Rational LinExpr::eval(const std::map<std::string, Rational>& point) const {
  Rational acc = constant;
  for (const auto& [n, c] : coeff) {
    auto it = point.find(n);
    if (it != point.end()) acc += c * it->second;
  }
  return acc;
}

std::string LinExpr::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, c] : coeff) {
    if (!first) os << " + ";
    os << c.str() << "*" << n;
    first = false;
  }
  if (first || !constant.is_zero()) {
    if (!first) os << " + ";
    os << constant.str();
  }
  return os.str();
}

void LinearSystem::declare_var(const std::string& name) {
  if (!has_var(name)) vars_.push_back(name);
}

bool LinearSystem::has_var(const std::string& name) const {
  return std::find(vars_.begin(), vars_.end(), name) != vars_.end();
}

void LinearSystem::check_declared(const LinExpr& e) const {
  for (const auto& [n, c] : e.coeff) {
    (void)c;
    if (!has_var(n))
      throw std::invalid_argument("LinearSystem: undeclared variable " + n);
  }
}

namespace {

// Canonical form for dedup/domination: scale so the first nonzero
// coefficient (in variable-name order) is +/-1... `scale` normalizes by the
// largest absolute coefficient is overkill; instead scale by 1/|first coeff|.
LinExpr normalized(const LinExpr& e) {
  if (e.coeff.empty()) return e;
  Rational lead = e.coeff.begin()->second;
  Rational s = (lead.sign() < 0 ? -lead : lead);
  LinExpr out;
  for (const auto& [n, c] : e.coeff) out.coeff[n] = c / s;
  out.constant = e.constant / s;
  return out;
}

std::string coeff_key(const LinExpr& e) {
  std::ostringstream os;
  for (const auto& [n, c] : e.coeff) os << n << ":" << c.str() << ";";
  return os.str();
}

}  // namespace

void LinearSystem::push_eq(LinExpr e, std::string note) {
  eqs_.push_back(Constraint{std::move(e), std::move(note)});
}

void LinearSystem::push_le(LinExpr e, std::string note) {
  ineqs_.push_back(Constraint{std::move(e), std::move(note)});
}

void LinearSystem::add_eq(LinExpr e, std::string note) {
  check_declared(e);
  push_eq(std::move(e), std::move(note));
}

void LinearSystem::add_le(LinExpr e, std::string note) {
  check_declared(e);
  push_le(std::move(e), std::move(note));
}

void LinearSystem::add_le(const LinExpr& lhs, const LinExpr& rhs,
                          std::string note) {
  add_le(lhs.minus(rhs), std::move(note));
}

void LinearSystem::add_ge(const LinExpr& lhs, const LinExpr& rhs,
                          std::string note) {
  add_le(rhs.minus(lhs), std::move(note));
}

void LinearSystem::add_nonneg(const std::string& name) {
  add_le(LinExpr::var(name, Rational(-1)), name + " >= 0");
}

LinearSystem LinearSystem::fm_eliminate(const std::string& var) const {
  if (!has_var(var))
    throw std::invalid_argument("fm_eliminate: undeclared variable " + var);

  LinearSystem out;
  for (const auto& v : vars_)
    if (v != var) out.declare_var(v);

  // Prefer substitution through an equality that mentions var.
  std::size_t sub_idx = eqs_.size();
  for (std::size_t i = 0; i < eqs_.size(); ++i) {
    if (!eqs_[i].expr.coeff_of(var).is_zero()) {
      sub_idx = i;
      break;
    }
  }

  if (sub_idx < eqs_.size()) {
    const LinExpr& pivot = eqs_[sub_idx].expr;
    Rational a = pivot.coeff_of(var);
    // var = -(pivot - a*var)/a
    LinExpr rest = pivot;
    rest.coeff.erase(var);
    LinExpr value = rest.scaled(Rational(-1) / a);
    auto substitute = [&](const LinExpr& e) {
      Rational c = e.coeff_of(var);
      if (c.is_zero()) return e;
      LinExpr r = e;
      r.coeff.erase(var);
      return r.plus(value.scaled(c));
    };
    for (std::size_t i = 0; i < eqs_.size(); ++i) {
      if (i == sub_idx) continue;
      out.push_eq(substitute(eqs_[i].expr), eqs_[i].note);
    }
    for (const auto& c : ineqs_) out.push_le(substitute(c.expr), c.note);
    return out;
  }

  // No equality mentions var: pure Fourier-Motzkin on the inequalities.
  for (const auto& c : eqs_) out.push_eq(c.expr, c.note);

  std::vector<const Constraint*> pos, neg;
  std::set<std::string> seen;
  auto emit = [&](LinExpr e, const std::string& note) {
    LinExpr n = normalized(e);
    std::ostringstream key;
    key << coeff_key(n) << "|" << n.constant.str();
    if (seen.insert(key.str()).second) out.push_le(std::move(e), note);
  };
  for (const auto& c : ineqs_) {
    Rational a = c.expr.coeff_of(var);
    if (a.is_zero()) {
      emit(c.expr, c.note);
    } else if (a.sign() > 0) {
      pos.push_back(&c);
    } else {
      neg.push_back(&c);
    }
  }
  for (const Constraint* p : pos) {
    Rational ap = p->expr.coeff_of(var);
    for (const Constraint* n : neg) {
      Rational an = n->expr.coeff_of(var);
      // ap > 0, an < 0: (-an)*p + ap*n eliminates var; both scales positive.
      LinExpr comb = p->expr.scaled(-an).plus(n->expr.scaled(ap));
      comb.coeff.erase(var);
      emit(std::move(comb), "fm(" + p->note + "," + n->note + ")");
    }
  }
  // Drop strictly-dominated constraints (same coefficients, weaker constant).
  std::map<std::string, std::size_t> best;
  std::vector<char> keep(out.ineqs_.size(), 1);
  for (std::size_t i = 0; i < out.ineqs_.size(); ++i) {
    LinExpr n = normalized(out.ineqs_[i].expr);
    std::string key = coeff_key(n);
    auto it = best.find(key);
    if (it == best.end()) {
      best[key] = i;
    } else {
      LinExpr m = normalized(out.ineqs_[it->second].expr);
      // expr <= 0 with larger constant is tighter.
      if (n.constant > m.constant) {
        keep[it->second] = 0;
        it->second = i;
      } else {
        keep[i] = 0;
      }
    }
  }
  std::vector<Constraint> filtered;
  for (std::size_t i = 0; i < out.ineqs_.size(); ++i)
    if (keep[i]) filtered.push_back(std::move(out.ineqs_[i]));
  out.ineqs_ = std::move(filtered);
  return out;
}

LinearSystem LinearSystem::fm_eliminate_all_except(
    const std::vector<std::string>& keep) const {
  LinearSystem cur = *this;
  // Repeatedly eliminate a non-kept variable; prefer ones with an equality
  // (cheap substitution), then the one with the fewest inequality mentions.
  for (;;) {
    std::vector<std::string> remaining;
    for (const auto& v : cur.vars_)
      if (std::find(keep.begin(), keep.end(), v) == keep.end())
        remaining.push_back(v);
    if (remaining.empty()) break;

    std::string pick;
    for (const auto& v : remaining) {
      for (const auto& c : cur.eqs_)
        if (!c.expr.coeff_of(v).is_zero()) {
          pick = v;
          break;
        }
      if (!pick.empty()) break;
    }
    if (pick.empty()) {
      std::size_t best_cost = SIZE_MAX;
      for (const auto& v : remaining) {
        std::size_t p = 0, n = 0;
        for (const auto& c : cur.ineqs_) {
          Rational a = c.expr.coeff_of(v);
          if (a.sign() > 0) ++p;
          else if (a.sign() < 0) ++n;
        }
        std::size_t cost = p * n;
        if (cost < best_cost) {
          best_cost = cost;
          pick = v;
        }
      }
    }
    cur = cur.fm_eliminate(pick);
  }
  return cur;
}

bool LinearSystem::satisfied_by(
    const std::map<std::string, Rational>& point) const {
  for (const auto& c : eqs_)
    if (!c.expr.eval(point).is_zero()) return false;
  for (const auto& c : ineqs_)
    if (c.expr.eval(point).sign() > 0) return false;
  return true;
}

bool LinearSystem::trivially_infeasible() const {
  for (const auto& c : eqs_)
    if (c.expr.coeff.empty() && !c.expr.constant.is_zero()) return true;
  for (const auto& c : ineqs_)
    if (c.expr.coeff.empty() && c.expr.constant.sign() > 0) return true;
  return false;
}

std::vector<std::map<std::string, Rational>> LinearSystem::integer_points(
    long lo, long hi) const {
  std::vector<std::map<std::string, Rational>> found;
  std::map<std::string, Rational> point;
  std::size_t k = vars_.size();
  std::vector<long> cur(k, lo);
  if (k == 0) {
    if (satisfied_by(point)) found.push_back(point);
    return found;
  }
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) point[vars_[i]] = Rational(cur[i]);
    if (satisfied_by(point)) found.push_back(point);
    std::size_t i = 0;
    while (i < k) {
      if (++cur[i] <= hi) break;
      cur[i] = lo;
      ++i;
    }
    if (i == k) break;
  }
  return found;
}

std::string LinearSystem::str() const {
  std::ostringstream os;
  os << "vars:";
  for (const auto& v : vars_) os << " " << v;
  os << "\n";
  for (const auto& c : eqs_)
    os << "  " << c.expr.str() << " = 0"
       << (c.note.empty() ? "" : "   # " + c.note) << "\n";
  for (const auto& c : ineqs_)
    os << "  " << c.expr.str() << " <= 0"
       << (c.note.empty() ? "" : "   # " + c.note) << "\n";
  return os.str();
}

}  // namespace reflectlab
