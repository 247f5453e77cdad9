#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "reflectlab/linear_system.hpp"
#include "reflectlab/matrix_fl.hpp"
#include "reflectlab/rational.hpp"

using reflectlab::LinearSystem;
using reflectlab::LinExpr;
using reflectlab::MatrixFl;
using reflectlab::Rational;

namespace {

// Brute-force rank oracle: size of the row span, enumerated exhaustively.
std::size_t rank_by_span(const MatrixFl& a) {
  long l = a.modulus();
  std::set<std::vector<long>> span;
  std::vector<std::vector<long>> rows;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::vector<long> r(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) r[j] = a.at(i, j);
    rows.push_back(r);
  }
  // Enumerate all coefficient tuples over F_l^rows.
  std::vector<long> coef(a.rows(), 0);
  for (;;) {
    std::vector<long> v(a.cols(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        v[j] = (v[j] + coef[i] * rows[i][j]) % l;
    span.insert(v);
    std::size_t i = 0;
    while (i < coef.size()) {
      if (++coef[i] < l) break;
      coef[i] = 0;
      ++i;
    }
    if (i == coef.size()) break;
  }
  std::size_t sz = span.size(), rk = 0;
  while (sz > 1) {
    sz /= static_cast<std::size_t>(l);
    ++rk;
  }
  return rk;
}

// Brute-force kernel count: number of v with A v = 0 over F_l^cols.
std::size_t kernel_count(const MatrixFl& a) {
  long l = a.modulus();
  std::size_t count = 0;
  std::vector<long> v(a.cols(), 0);
  for (;;) {
    auto img = a.apply(v);
    bool zero = true;
    for (long x : img) zero &= (x == 0);
    if (zero) ++count;
    std::size_t i = 0;
    while (i < v.size()) {
      if (++v[i] < l) break;
      v[i] = 0;
      ++i;
    }
    if (i == v.size()) break;
  }
  return count;
}

std::size_t pow_sz(long b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= static_cast<std::size_t>(b);
  return r;
}

}  // namespace

TEST_CASE("rref on frozen examples") {
  auto id3 = MatrixFl::identity(3, 3);
  CHECK(id3.rank() == 3);

  MatrixFl z(5, 2, 2);
  CHECK(z.rank() == 0);

  auto a = MatrixFl::from_rows(5, {{1, 2}, {2, 4}});
  CHECK(a.rank() == 1);

  // rref idempotent on its own output
  auto r = a.rref();
  auto r2 = r.reduced.rref();
  CHECK(r.reduced == r2.reduced);
  CHECK(r.rank == r2.rank);
}

TEST_CASE("kernel_basis frozen examples") {
  auto id2 = MatrixFl::identity(7, 2);
  CHECK(id2.kernel_basis().empty());

  MatrixFl z(3, 2, 3);
  CHECK(z.kernel_basis().size() == 3);

  auto a = MatrixFl::from_rows(3, {{1, 1, 1}});
  auto k = a.kernel_basis();
  REQUIRE(k.size() == 2);
  for (const auto& v : k) {
    CHECK((v[0] + v[1] + v[2]) % 3 == 0);
  }

  // [[1,2],[2,4]] over F5: kernel spanned by (3,1)
  auto b = MatrixFl::from_rows(5, {{1, 2}, {2, 4}});
  auto kb = b.kernel_basis();
  REQUIRE(kb.size() == 1);
  // kernel vector must be proportional to (3,1): check 1*x + 2*y = 0 mod 5
  CHECK((kb[0][0] + 2 * kb[0][1]) % 5 == 0);
}

TEST_CASE("image_basis frozen examples") {
  auto id2 = MatrixFl::identity(5, 2);
  auto im = id2.image_basis();
  CHECK(im.size() == 2);

  MatrixFl z(5, 2, 2);
  CHECK(z.image_basis().empty());

  auto a = MatrixFl::from_rows(5, {{1, 2}, {2, 4}});
  auto ia = a.image_basis();
  REQUIRE(ia.size() == 1);
  // column space of A is spanned by (1,2): vector must satisfy 2*x - y = 0
  CHECK((2 * ia[0][0] - ia[0][1]) % 5 == 0);
}

TEST_CASE("solve frozen examples") {
  auto id2 = MatrixFl::identity(3, 2);
  auto x = id2.solve({2, 1});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == 1);

  MatrixFl z(3, 2, 2);
  CHECK_FALSE(z.solve({1, 0}).has_value());

  auto a = MatrixFl::from_rows(3, {{1, 1}, {0, 1}});
  auto s = a.solve({2, 1});
  REQUIRE(s.has_value());
  CHECK((*s)[0] == 1);
  CHECK((*s)[1] == 1);
}

TEST_CASE("modulus mixing is a hard error") {
  auto a = MatrixFl::identity(3, 2);
  auto b = MatrixFl::identity(5, 2);
  CHECK_THROWS_AS(a.mul(b), std::invalid_argument);
  CHECK_THROWS_AS(a.add(b), std::invalid_argument);
  CHECK_THROWS_AS(MatrixFl(4, 1, 1), std::invalid_argument);  // 4 not prime
}

TEST_CASE("random-matrix oracle: rank/kernel/image vs exhaustive enumeration") {
  std::mt19937 rng(20240817);
  const long primes[] = {2, 3, 5};
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    long l = primes[rng() % 3];
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;  // dims <= 4 keeps the
    // span enumeration l^r <= 5^4 = 625 tuples cheap; criterion allows <= 5
    if (trial % 7 == 0) r = 5;
    MatrixFl a(l, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        a.set(i, j, static_cast<long>(rng() % l));

    std::size_t rk = a.rank();
    CHECK(rk == rank_by_span(a));
    CHECK(rk == a.transpose().rank());  // rank(A) = rank(A^T)
    CHECK(a.kernel_basis().size() == c - rk);
    CHECK(kernel_count(a) == pow_sz(l, c - rk));
    CHECK(a.image_basis().size() == rk);
    // kernel vectors really lie in the kernel
    for (const auto& v : a.kernel_basis()) {
      for (long y : a.apply(v)) CHECK(y == 0);
    }
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("solve always returns an exact solution when consistent") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    long l = trial % 2 ? 3 : 5;
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    MatrixFl a(l, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        a.set(i, j, static_cast<long>(rng() % l));
    // build a consistent b = A*x0
    std::vector<long> x0(c);
    for (auto& x : x0) x = static_cast<long>(rng() % l);
    auto b = a.apply(x0);
    auto x = a.solve(b);
    REQUIRE(x.has_value());
    CHECK(a.apply(*x) == b);
  }
}

TEST_CASE("fm_eliminate frozen examples") {
  // {x <= y, y <= 3} eliminate y -> {x <= 3}
  LinearSystem s;
  s.declare_var("x");
  s.declare_var("y");
  s.add_le(LinExpr::var("x"), LinExpr::var("y"));
  s.add_le(LinExpr::var("y"), LinExpr::lit(Rational(3)));
  auto p = s.fm_eliminate("y");
  std::map<std::string, Rational> pt{{"x", Rational(3)}};
  CHECK(p.satisfied_by(pt));
  pt["x"] = Rational(4);
  CHECK_FALSE(p.satisfied_by(pt));

  // {x + y <= 2, -y <= 0} eliminate y -> {x <= 2}
  LinearSystem s2;
  s2.declare_var("x");
  s2.declare_var("y");
  s2.add_le(LinExpr::var("x").plus(LinExpr::var("y")), LinExpr::lit(Rational(2)));
  s2.add_le(LinExpr::lit(Rational(0)), LinExpr::var("y"));
  auto p2 = s2.fm_eliminate("y");
  pt = {{"x", Rational(2)}};
  CHECK(p2.satisfied_by(pt));
  pt["x"] = Rational(3);
  CHECK_FALSE(p2.satisfied_by(pt));

  // {z = x + y, 0 <= x <= 1, 0 <= y <= 2} eliminate x,y -> {0 <= z <= 3}
  LinearSystem s3;
  for (const char* v : {"x", "y", "z"}) s3.declare_var(v);
  s3.add_eq(LinExpr::var("z").minus(LinExpr::var("x")).minus(LinExpr::var("y")));
  s3.add_le(LinExpr::lit(Rational(0)), LinExpr::var("x"));
  s3.add_le(LinExpr::var("x"), LinExpr::lit(Rational(1)));
  s3.add_le(LinExpr::lit(Rational(0)), LinExpr::var("y"));
  s3.add_le(LinExpr::var("y"), LinExpr::lit(Rational(2)));
  auto p3 = s3.fm_eliminate("x").fm_eliminate("y");
  for (long z = 0; z <= 3; ++z) {
    pt = {{"z", Rational(z)}};
    CHECK(p3.satisfied_by(pt));
  }
  pt = {{"z", Rational(-1)}};
  CHECK_FALSE(p3.satisfied_by(pt));
  pt = {{"z", Rational(4)}};
  CHECK_FALSE(p3.satisfied_by(pt));
}

TEST_CASE("fm oracle: projection matches brute-force box projection") {
  // 100 random systems, <=4 vars, coefficients in [-3,3]; compare the
  // projected system against direct integer enumeration over [0,6]^k.
  std::mt19937 rng(424242);
  auto coin = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
  };
  int done = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t nv = 2 + rng() % 3;  // 2..4 variables
    std::vector<std::string> names;
    LinearSystem sys;
    for (std::size_t i = 0; i < nv; ++i) {
      names.push_back("v" + std::to_string(i));
      sys.declare_var(names.back());
    }
    // box constraints keep everything bounded
    for (const auto& n : names) {
      sys.add_le(LinExpr::lit(Rational(0)), LinExpr::var(n));
      sys.add_le(LinExpr::var(n), LinExpr::lit(Rational(6)));
    }
    std::size_t nc = 1 + rng() % 3;
    for (std::size_t c = 0; c < nc; ++c) {
      LinExpr e;
      for (const auto& n : names) e.add_term(n, Rational(coin(-3, 3)));
      e.constant = Rational(coin(-6, 6));
      sys.add_le(e);
    }
    // eliminate one random variable
    std::string gone = names[rng() % nv];
    auto proj = sys.fm_eliminate(gone);

    // brute force: which assignments of the remaining vars are feasible?
    std::vector<std::string> rest;
    for (const auto& n : names)
      if (n != gone) rest.push_back(n);

    auto all_in = sys.integer_points(0, 6);
    std::set<std::vector<long>> feasible_proj;
    for (const auto& p : all_in) {
      std::vector<long> key;
      for (const auto& n : rest) key.push_back(p.at(n).floor_long());
      feasible_proj.insert(key);
    }

    // soundness: every feasible point's projection satisfies proj;
    // box-completeness: every box point satisfying proj must lift.
    std::vector<long> cur(rest.size(), 0);
    for (;;) {
      std::map<std::string, Rational> pt;
      for (std::size_t i = 0; i < rest.size(); ++i)
        pt[rest[i]] = Rational(cur[i]);
      bool proj_ok = proj.satisfied_by(pt);
      bool has_lift = feasible_proj.count(cur) > 0;
      if (has_lift) CHECK(proj_ok);  // soundness
      if (proj_ok) {
        // Exactness: a RATIONAL lift must exist. Solve the 1-d feasibility
        // problem for `gone` after pinning the remaining variables.
        bool feasible = true;
        bool lo_set = false, hi_set = false;
        Rational lo(0), hi(0);
        auto tighten = [&](const Rational& a, const Rational& rest_val,
                           bool equality) {
          if (a.is_zero()) {
            if (equality ? !rest_val.is_zero() : rest_val.sign() > 0)
              feasible = false;
            return;
          }
          Rational bound = -rest_val / a;
          bool acts_upper = a.sign() > 0;
          if (equality || acts_upper) {
            if (!hi_set || bound < hi) hi = bound;
            hi_set = true;
          }
          if (equality || !acts_upper) {
            if (!lo_set || bound > lo) lo = bound;
            lo_set = true;
          }
        };
        std::map<std::string, Rational> zeroed = pt;
        zeroed[gone] = Rational(0);
        for (const auto& c : sys.equalities())
          tighten(c.expr.coeff_of(gone), c.expr.eval(zeroed), true);
        for (const auto& c : sys.inequalities())
          tighten(c.expr.coeff_of(gone), c.expr.eval(zeroed), false);
        if (lo_set && hi_set && lo > hi) feasible = false;
        CHECK_MESSAGE(feasible, "projection keeps a point with no lift");
      }
      std::size_t i = 0;
      while (i < cur.size()) {
        if (++cur[i] <= 6) break;
        cur[i] = 0;
        ++i;
      }
      if (i == cur.size() || rest.empty()) break;
    }
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("rational basics") {
  Rational a(1, 2), b(1, 3);
  CHECK((a + b).str() == "5/6");
  CHECK((a * b).str() == "1/6");
  CHECK((a - b).str() == "1/6");
  CHECK((a / b).str() == "3/2");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(-4, 8).str() == "-1/2");
  CHECK(Rational(2, -4).str() == "-1/2");  // canonical: positive denominator
  CHECK(Rational(7, 3).floor_long() == 2);
  CHECK(Rational(-7, 3).floor_long() == -3);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(a / Rational(0), std::invalid_argument);
}
