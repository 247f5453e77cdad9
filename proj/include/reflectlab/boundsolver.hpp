#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "reflectlab/catalog.hpp"
#include "reflectlab/linear_system.hpp"
#include "reflectlab/rational.hpp"

namespace reflectlab {

// Levels a bound can be expressed at:
//   H1  -- cohomology ranks, parameter P = h1 of the resolvent-side module
//   ClS -- l-rank of the S-class group (Picard group in the function-field
//          setting), parameter x = that rank for the resolvent field
//   Cl  -- l-rank of the full class group (number-field setting only)
enum class Level { H1, ClS, Cl };
std::string level_name(Level v);
Level level_of_name(const std::string& s);

// One-sided affine form: slope * p + offset.
struct AffineForm {
  Rational slope, offset;
  Rational eval(const Rational& p) const { return slope * p + offset; }
  std::string str(const std::string& param) const;
};

// Two-sided window.  `lowers`/`uppers` hold the full projection output
// (target >= every lower, <= every upper); `lower`/`upper` are the forms
// that dominate for large parameter values.
struct BoundWindow {
  AffineForm lower, upper;
  std::vector<AffineForm> lowers, uppers;
  // Facts about the parameter alone discovered by elimination, each meaning
  // f(P) >= 0.
  std::vector<AffineForm> parameter_constraints;

  Rational eval_lower(const Rational& p) const;  // max over lowers
  Rational eval_upper(const Rational& p) const;  // min over uppers
};

// The assembled constraint system of one case, with the variable groups in
// the order elimination consumes them.
struct Assembled {
  LinearSystem sys;
  std::string target;     // h1 of the degree-n side module
  std::string parameter;  // h1 of the resolvent side module
  std::vector<std::string> rank_vars;
  std::vector<std::string> h2_vars;
  std::vector<std::string> h3_vars;
  std::vector<std::string> interior_h1_vars;
};

Assembled assemble(const CaseInstance& c);

// Eliminates everything but {target, parameter} exactly and reads off the
// affine window.  Throws std::logic_error if the system is infeasible or no
// upper bound survives (both indicate an encoding bug).
BoundWindow derive_bounds(const CaseInstance& c);

// Unit-side descriptor of one number field (ignored in the function-field
// setting).  `torsion` means the l-th roots of unity lie in the field; it is
// ignored for l = 2 where they always do.
struct FieldShape {
  long degree = 0;
  long r1 = 0, r2 = 0;
  long u = 1;
  bool torsion = false;
};

// Function field: 1 if the ambient twist is split, else 0.
// Number field: (r1 + r2 - 1) + u + torsion-contribution.
// Throws std::invalid_argument on r1 + 2 r2 != degree or u out of range.
long unit_rank(const CaseInstance& c, const FieldShape& f);

struct ClassWindow {
  AffineForm lower, upper;
  std::vector<AffineForm> lowers, uppers;
  Rational eval_lower(const Rational& x) const;
  Rational eval_upper(const Rational& x) const;
};

// Rewrites an h1-level window at the class-group level via
// h1 = rank + unit_rank on both sides.  k1/k2 may be null in the
// function-field setting.  Level Cl additionally widens by the S-kernel
// slack max(u - 1, 0) of the respective field.
ClassWindow to_class_bounds(const BoundWindow& w, const CaseInstance& c,
                            const FieldShape* k1, const FieldShape* k2,
                            Level level);

// The source text's stated window at the given level, when one exists.
// Number-field class-group targets need the two field shapes (their t-shifts
// enter the constants); pass null in the function-field setting.
struct PaperTarget {
  bool has_lower = false, has_upper = false;
  AffineForm lower, upper;
  std::string hypothesis;
};
PaperTarget paper_target(const CaseInstance& c, Level level,
                         const FieldShape* k1 = nullptr,
                         const FieldShape* k2 = nullptr);

// Signature pairs (K1 shape, K2 shape) admissible for the family: the
// archimedean involution must act on both sides through one group element.
// Degrees are filled in; u defaults to 1 and torsion to the setting's
// hypothesis (present iff l = 2).
std::vector<std::pair<FieldShape, FieldShape>> admissible_shape_grid(
    const CaseInstance& c);

// One-line JSON bound report (schema documented in the README).  For the
// number-field class-group levels the window is instantiated at the given
// shapes; pass null to use the first admissible pair with u = 1.
std::string bound_report_json(const CaseInstance& c, Level level,
                              const FieldShape* k1 = nullptr,
                              const FieldShape* k2 = nullptr);

// Feasibility sampler: depth-first enumeration of the integer points of the
// system inside [lo, hi]^vars, using the equalities to pivot.  `cb` is
// called per solution; returning false stops the search.  `complete` is
// true when the space was exhausted within the node budget.
struct SampleResult {
  long long nodes = 0;
  long long solutions = 0;
  bool complete = false;
};
SampleResult enumerate_feasible(
    const LinearSystem& sys, long lo, long hi, long long budget,
    const std::function<bool(const std::map<std::string, Rational>&)>& cb);

}  // namespace reflectlab
