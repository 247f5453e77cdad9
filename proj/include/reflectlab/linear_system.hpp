#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reflectlab/rational.hpp"

namespace reflectlab {

// A linear expression sum(coeff[var] * var) + constant over named variables.
struct LinExpr {
  std::map<std::string, Rational> coeff;
  Rational constant;

  LinExpr() = default;
  static LinExpr var(const std::string& name, Rational c = Rational(1));
  static LinExpr lit(Rational c);

  LinExpr& add_term(const std::string& name, Rational c);
  LinExpr plus(const LinExpr& o) const;
  LinExpr minus(const LinExpr& o) const;
  LinExpr scaled(const Rational& c) const;
  Rational coeff_of(const std::string& name) const;
  // Evaluate at a full assignment (missing vars treated as 0).
  Rational eval(const std::map<std::string, Rational>& point) const;
  std::string str() const;
};

// Exact rational linear constraint system: equalities expr = 0 and
// inequalities expr <= 0. Variables are declared explicitly; constraints may
// reference only declared variables.
class LinearSystem {
 public:
  struct Constraint {
    LinExpr expr;  // expr = 0 or expr <= 0
    std::string note;
  };

  void declare_var(const std::string& name);
  bool has_var(const std::string& name) const;
  const std::vector<std::string>& variables() const { return vars_; }

  void add_eq(LinExpr e, std::string note = "");
  void add_le(LinExpr e, std::string note = "");  // e <= 0
  // Convenience: lhs <= rhs and lhs >= rhs.
  void add_le(const LinExpr& lhs, const LinExpr& rhs, std::string note = "");
  void add_ge(const LinExpr& lhs, const LinExpr& rhs, std::string note = "");
  void add_nonneg(const std::string& name);  // name >= 0

  const std::vector<Constraint>& equalities() const { return eqs_; }
  const std::vector<Constraint>& inequalities() const { return ineqs_; }

  // Exact projection: returned system's rational solution set equals the
  // projection of this system's solution set onto the remaining variables.
  // An equality involving var is used as a substitution when available;
  // otherwise inequalities are combined pairwise by coefficient sign.
  LinearSystem fm_eliminate(const std::string& var) const;
  LinearSystem fm_eliminate_all_except(
      const std::vector<std::string>& keep) const;

  // True iff the point (complete assignment of all declared vars) satisfies
  // every constraint.
  bool satisfied_by(const std::map<std::string, Rational>& point) const;

  // Detects a trivially infeasible constraint (constant expr that fails).
  bool trivially_infeasible() const;

  // All integer points of [lo,hi]^vars satisfying every constraint.
  // Intended for small oracle checks only (grid must fit in memory/time).
  std::vector<std::map<std::string, Rational>> integer_points(long lo,
                                                              long hi) const;

  std::string str() const;

 private:
  void check_declared(const LinExpr& e) const;
  void push_eq(LinExpr e, std::string note);
  void push_le(LinExpr e, std::string note);

  std::vector<std::string> vars_;
  std::vector<Constraint> eqs_, ineqs_;
};

}  // namespace reflectlab
