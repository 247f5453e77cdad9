#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "reflectlab/groups.hpp"

using namespace reflectlab;

TEST_CASE("group orders and parameters") {
  CHECK(FiniteGroup::build(Family::S3).order() == 6);
  CHECK(FiniteGroup::build(Family::S4).order() == 24);
  CHECK(FiniteGroup::build(Family::A4).order() == 12);
  CHECK(FiniteGroup::build(Family::D2l, 5).order() == 10);
  auto sd = FiniteGroup::build(Family::SemiDirect, 7, 3);
  CHECK(sd.order() == 21);
  CHECK(sd.zeta() == 2);  // 2^3 = 8 = 1 mod 7, order exactly 3
  CHECK(FiniteGroup::build(Family::SemiDirect, 11, 5).zeta() == 3);
  CHECK(FiniteGroup::build(Family::SemiDirect, 13, 3).zeta() == 3);
}

TEST_CASE("invalid parameters rejected") {
  CHECK_THROWS_AS(FiniteGroup::build(Family::D2l, 2), std::invalid_argument);
  CHECK_THROWS_AS(FiniteGroup::build(Family::D2l, 9), std::invalid_argument);
  CHECK_THROWS_AS(FiniteGroup::build(Family::SemiDirect, 7, 5),
                  std::invalid_argument);  // 5 does not divide 6
  CHECK_THROWS_AS(FiniteGroup::build(Family::SemiDirect, 8, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(FiniteGroup::build(Family::S3, 5), std::invalid_argument);
}

TEST_CASE("presentation relations hold") {
  for (long l : {3L, 5L, 7L, 11L, 13L}) {
    auto g = FiniteGroup::build(Family::D2l, l);
    int s = g.generator("sigma"), t = g.generator("tau");
    CHECK(g.element_order(s) == 2);
    CHECK(g.element_order(t) == static_cast<int>(l));
    CHECK(g.mul(g.mul(s, t), s) == g.inv(t));
  }
  auto sd = FiniteGroup::build(Family::SemiDirect, 7, 3);
  int s = sd.generator("sigma"), t = sd.generator("tau");
  CHECK(sd.element_order(s) == 3);
  CHECK(sd.element_order(t) == 7);
  // sigma tau sigma^-1 = tau^zeta
  int lhs = sd.mul(sd.mul(s, t), sd.inv(s));
  int rhs = 0;
  for (long i = 0; i < sd.zeta(); ++i) rhs = sd.mul(rhs, t);
  CHECK(lhs == rhs);
}

TEST_CASE("subgroup_generated basics") {
  auto s3 = FiniteGroup::build(Family::S3);
  CHECK(subgroup_generated(s3, {}).order() == 1);
  CHECK(subgroup_generated(s3, {s3.generator("sigma")}).order() == 2);
  CHECK(subgroup_generated(s3, {s3.generator("tau")}).order() == 3);

  // S4: a transposition and a 3-cycle generate an S3 copy (order 6)
  auto s4 = FiniteGroup::build(Family::S4);
  int trans = -1, three = -1;
  for (int e = 0; e < 24; ++e) {
    const auto& p = s4.perm(e);
    if (p == std::vector<int>{1, 0, 2, 3}) trans = e;      // (01)
    if (p == std::vector<int>{1, 2, 0, 3}) three = e;      // (012)
  }
  REQUIRE(trans >= 0);
  REQUIRE(three >= 0);
  CHECK(subgroup_generated(s4, {trans, three}).order() == 6);
}

TEST_CASE("all_subgroups frozen counts") {
  CHECK(all_subgroups(FiniteGroup::build(Family::S3)).size() == 6);
  CHECK(all_subgroups(FiniteGroup::build(Family::S4)).size() == 30);
  CHECK(all_subgroups(FiniteGroup::build(Family::A4)).size() == 10);
  CHECK(all_subgroups(FiniteGroup::build(Family::D2l, 5)).size() == 8);

  auto sd = FiniteGroup::build(Family::SemiDirect, 7, 3);
  auto subs = all_subgroups(sd);
  CHECK(subs.size() == 10);  // 1 + 7 Sylow-3 + Sylow-7 + whole
  std::set<int> orders;
  for (const auto& h : subs) orders.insert(h.order());
  CHECK(orders == std::set<int>{1, 3, 7, 21});
}

TEST_CASE("subgroup invariants: closure and Lagrange") {
  for (const auto& g :
       {FiniteGroup::build(Family::S4), FiniteGroup::build(Family::A4),
        FiniteGroup::build(Family::D2l, 7),
        FiniteGroup::build(Family::SemiDirect, 13, 3)}) {
    for (const auto& h : all_subgroups(g)) {
      CHECK(g.order() % h.order() == 0);
      CHECK(h.contains(0));
      for (int a : h.elems) {
        CHECK(h.contains(g.inv(a)));
        for (int b : h.elems) CHECK(h.contains(g.mul(a, b)));
      }
    }
  }
}

TEST_CASE("klein four subgroup") {
  auto s4 = FiniteGroup::build(Family::S4);
  auto v4 = klein_four(s4);
  CHECK(v4.order() == 4);
  for (int e : v4.elems) CHECK((e == 0 || s4.element_order(e) == 2));
  auto a4 = FiniteGroup::build(Family::A4);
  CHECK(klein_four(a4).order() == 4);
  CHECK_THROWS_AS(klein_four(FiniteGroup::build(Family::S3)),
                  std::invalid_argument);
}

TEST_CASE("coset actions") {
  auto s3 = FiniteGroup::build(Family::S3);
  // H = G: one coset, trivial action
  auto whole = coset_action(s3, full_subgroup(s3));
  CHECK(whole.cosets.size() == 1);

  // S3 / <sigma>: 3 cosets permuted like {1, tau, tau^2}
  auto bysigma =
      coset_action(s3, subgroup_generated(s3, {s3.generator("sigma")}));
  CHECK(bysigma.cosets.size() == 3);
  int t = s3.generator("tau");
  // tau acts as a 3-cycle on the cosets
  const auto& p = bysigma.perm_of[t];
  std::set<int> orbit{0, p[0], p[p[0]]};
  CHECK(orbit.size() == 3);

  // S4 / S3-copy: 4 cosets
  auto s4 = FiniteGroup::build(Family::S4);
  int trans = -1, three = -1;
  for (int e = 0; e < 24; ++e) {
    if (s4.perm(e) == std::vector<int>{1, 0, 2, 3}) trans = e;
    if (s4.perm(e) == std::vector<int>{1, 2, 0, 3}) three = e;
  }
  auto s3copy = subgroup_generated(s4, {trans, three});
  auto act = coset_action(s4, s3copy);
  CHECK(act.cosets.size() == 4);
}

TEST_CASE("coset action is a homomorphism (exhaustive, |G| <= 24)") {
  for (const auto& g :
       {FiniteGroup::build(Family::S4), FiniteGroup::build(Family::A4),
        FiniteGroup::build(Family::S3), FiniteGroup::build(Family::D2l, 11)}) {
    for (const auto& h : all_subgroups(g)) {
      auto act = coset_action(g, h);
      for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b) {
          int ab = g.mul(a, b);
          for (std::size_t j = 0; j < act.cosets.size(); ++j)
            CHECK(act.perm_of[ab][j] == act.perm_of[a][act.perm_of[b][j]]);
        }
    }
  }
}

TEST_CASE("word table reconstructs elements") {
  for (const auto& g :
       {FiniteGroup::build(Family::S4), FiniteGroup::build(Family::A4),
        FiniteGroup::build(Family::SemiDirect, 11, 5)}) {
    for (int e = 0; e < g.order(); ++e) {
      int acc = 0;
      for (int k : g.word(e))
        acc = g.mul(acc, g.generator(g.generator_names()[k]));
      CHECK(acc == e);
    }
  }
}
