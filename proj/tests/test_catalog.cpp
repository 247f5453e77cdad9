#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <stdexcept>

#include "doctest.h"
#include "reflectlab/catalog.hpp"

using namespace reflectlab;

namespace {

const GModule* by_label(const CaseInstance& c, const std::string& label) {
  for (const ModPtr& m : c.modules)
    if (m->label() == label) return m.get();
  REQUIRE(false);
  return nullptr;
}

}  // namespace

TEST_CASE("setting table") {
  Setting a = make_setting("ff-mu", 3);
  CHECK(a.kind == Setting::Kind::FunctionField);
  CHECK(a.mu_in_base);
  CHECK(!a.b_nontrivial);
  CHECK(a.ambient_h0 == 1);
  CHECK(a.ambient_h1 == 1);
  CHECK(a.ambient_h2 == 1);

  Setting b = make_setting("ff-nomu", 5);
  CHECK(!b.mu_in_base);
  CHECK(b.b_nontrivial);
  CHECK(b.ambient_h0 == 0);
  CHECK(b.ambient_h1 == 0);
  CHECK(b.ambient_h2 == 1);
  CHECK_THROWS_AS(make_setting("ff-nomu", 2), std::invalid_argument);

  Setting c2 = make_setting("nf", 2);
  CHECK(c2.mu_in_base);
  CHECK(c2.ambient_h0 == 1);
  CHECK(c2.ambient_h1 == 2);
  CHECK(c2.ambient_h2 == 1);
  Setting c3 = make_setting("nf", 3);
  CHECK(!c3.mu_in_base);
  CHECK(c3.ambient_h0 == 0);
  CHECK(c3.ambient_h1 == 1);
  CHECK(c3.ambient_h2 == 0);

  CHECK_THROWS_AS(make_setting("bogus", 3), std::invalid_argument);
}

TEST_CASE("s3 case structure and verification") {
  CaseInstance c = build_case(Family::S3, 0, 0, "ff-mu");
  CHECK(c.l == 3);
  CHECK(c.modules.size() == 6);
  CHECK(c.sequences.size() == 2);
  CHECK(c.M->dim() == 3);
  CHECK(c.N->dim() == 2);
  CHECK(by_label(c, "T1")->dim() == 1);
  CHECK(by_label(c, "M'")->dim() == 2);
  CHECK(by_label(c, "N'")->dim() == 1);
  CHECK(by_label(c, "T")->dim() == 1);
  CHECK(c.inertia_family.size() == 4);
  CHECK(c.parameter_parts.size() == 1);
  CHECK(c.parameter_parts[0]->label() == "N'");

  // Global sections in the split function-field setting.
  CHECK(c.h0_table.at(c.M.get()) == 1);
  CHECK(c.h0_table.at(c.N.get()) == 1);
  CHECK(c.h0_table.at(by_label(c, "M'")) == 0);
  CHECK(c.h0_table.at(by_label(c, "N'")) == 0);
  CHECK(c.h0_table.at(by_label(c, "T1")) == 1);
  CHECK(c.h0_table.at(by_label(c, "T")) == 1);

  CHECK(c.ambient_pinned.at(by_label(c, "T1")));
  CHECK(c.ambient_pinned.at(by_label(c, "T")));
  CHECK(!c.ambient_pinned.at(c.M.get()));
  CHECK(!c.ambient_pinned.at(by_label(c, "N'")));
  for (const ModPtr& m : c.modules) CHECK(c.euler_flag.at(m.get()));

  CaseReport rep = verify_case(c);
  INFO(rep.str());
  CHECK(rep.all_pass);
}

TEST_CASE("s3 number-field setting kills h0 and euler flags") {
  CaseInstance c = build_case(Family::S3, 3, 0, "nf");
  for (const ModPtr& m : c.modules) {
    CHECK(c.h0_table.at(m.get()) == 0);
    CHECK(!c.euler_flag.at(m.get()));
  }
  CaseReport rep = verify_case(c);
  INFO(rep.str());
  CHECK(rep.all_pass);
}

TEST_CASE("s4 case structure and verification") {
  CaseInstance c = build_case(Family::S4, 0, 0, "ff-mu");
  CHECK(c.l == 2);
  CHECK(c.modules.size() == 6);
  CHECK(c.sequences.size() == 2);
  CHECK(c.M->dim() == 4);
  CHECK(by_label(c, "M1")->dim() == 3);
  CHECK(by_label(c, "N'")->dim() == 2);
  CHECK(by_label(c, "T")->dim() == 1);
  CHECK(by_label(c, "Tw")->dim() == 1);
  CHECK(c.N->dim() == 3);
  CHECK(c.inertia_family.size() == 15);

  CaseReport rep = verify_case(c);
  INFO(rep.str());
  CHECK(rep.all_pass);
  // Six transposition triples were checked plus two pinned-h0 rows.
  int triples = 0;
  for (const auto& d : rep.dim_checks)
    if (d.what.find("(3,2,1)") != std::string::npos) ++triples;
  CHECK(triples == 6);

  CHECK_THROWS_AS(build_case(Family::S4, 0, 0, "ff-nomu"),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_case(Family::S4, 3, 0, "nf"), std::invalid_argument);
  CHECK_THROWS_AS(build_case(Family::S4, 0, 3, "nf"), std::invalid_argument);
}

TEST_CASE("a4 case structure and verification") {
  CaseInstance c = build_case(Family::A4, 2, 0, "nf");
  CHECK(c.l == 2);
  CHECK(c.M->dim() == 4);
  CHECK(c.N->dim() == 3);
  CHECK(c.inertia_family.size() == 5);

  CaseReport rep = verify_case(c);
  INFO(rep.str());
  CHECK(rep.all_pass);
  // No order-two inertia exists, so no transposition triple rows.
  for (const auto& d : rep.dim_checks)
    CHECK(d.what.find("(3,2,1)") == std::string::npos);
  CHECK_THROWS_AS(build_case(Family::A4, 0, 0, "ff-nomu"),
                  std::invalid_argument);
}

TEST_CASE("d2l ladder structure") {
  CaseInstance c = build_case(Family::D2l, 5, 0, "nf");
  CHECK(c.l == 5);
  CHECK(c.sequences.size() == 5);
  // chain M0..M3 + M + {T, N'} + N + zero module
  CHECK(c.modules.size() == 9);
  CHECK(c.N->dim() == 2);
  CHECK(c.inertia_family.size() == 6);
  CHECK(by_label(c, "0")->dim() == 0);

  // Graded pieces alternate: top row (k = 4) is pinned, then sign, ...
  CHECK(c.sequences[0].C->label() == "T");
  CHECK(c.sequences[1].C->label() == "N'");
  CHECK(c.sequences[2].C->label() == "T");
  CHECK(c.sequences[3].C->label() == "N'");
  CHECK(c.sequences[4].C->label() == "T");  // bottom row
  CHECK(c.sequences[4].A->dim() == 0);
  CHECK(c.sequences[0].B.get() == c.M.get());

  // Number-field setting: no Euler rows for this family.
  for (const ModPtr& m : c.modules) CHECK(!c.euler_flag.at(m.get()));

  CaseReport rep = verify_case(c);
  INFO(rep.str());
  CHECK(rep.all_pass);

  CHECK_THROWS_AS(build_case(Family::D2l, 9, 0, "nf"), std::invalid_argument);
  CHECK_THROWS_AS(build_case(Family::D2l, 2, 0, "nf"), std::invalid_argument);
  CHECK_THROWS_AS(build_case(Family::D2l, 5, 3, "nf"), std::invalid_argument);
}

TEST_CASE("semidirect ladder structure") {
  CaseInstance c = build_case(Family::SemiDirect, 7, 3, "nf");
  CHECK(c.l == 7);
  CHECK(c.r == 3);
  CHECK(c.sequences.size() == 7);
  // chain M0..M5 + M + {R0,R1,R2} + N + zero module
  CHECK(c.modules.size() == 12);
  CHECK(c.N->dim() == 3);
  CHECK(c.inertia_family.size() == 8);
  CHECK(c.parameter_parts.size() == 2);
  CHECK(c.parameter_parts[0]->label() == "R1");
  CHECK(c.parameter_parts[1]->label() == "R2");
  CHECK(c.notes.size() == 1);

  // Row k has graded piece R_{k mod 3}, top row k = 6 first.
  CHECK(c.sequences[0].C->label() == "R0");
  CHECK(c.sequences[1].C->label() == "R2");
  CHECK(c.sequences[2].C->label() == "R1");
  CHECK(c.sequences[3].C->label() == "R0");
  CHECK(c.sequences[4].C->label() == "R2");
  CHECK(c.sequences[5].C->label() == "R1");
  CHECK(c.sequences[6].C->label() == "R0");  // bottom row
  CHECK(c.sequences[6].A->dim() == 0);

  // R1 carries weight zeta^{-1} = 4 on the order-r generator (zeta = 2).
  const GModule* r1 = by_label(c, "R1");
  CHECK(r1->rho(c.group->generator("sigma")).at(0, 0) == 4);
  CHECK(r1->rho(c.group->generator("tau")).at(0, 0) == 1);

  // Number-field setting flags exactly the chain modules for Euler rows.
  for (const ModPtr& m : c.modules) {
    bool is_chain = m->label() == "M" || (m->label()[0] == 'M' &&
                                          m->label().size() > 1);
    CHECK(c.euler_flag.at(m.get()) == is_chain);
  }

  CaseReport rep = verify_case(c);
  INFO(rep.str());
  CHECK(rep.all_pass);

  // Composition multiplicities of M: R0 three times, R1 and R2 twice.
  int mult_rows = 0;
  for (const auto& d : rep.dim_checks)
    if (d.what.find("multiplicity") != std::string::npos) {
      ++mult_rows;
      CHECK(d.pass);
    }
  CHECK(mult_rows == 3);

  CHECK_THROWS_AS(build_case(Family::SemiDirect, 7, 5, "nf"),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_case(Family::SemiDirect, 8, 3, "nf"),
                  std::invalid_argument);
}

TEST_CASE("by-id lookup") {
  CHECK(case_ids().size() == 5);
  CHECK(family_of_id("semidirect") == Family::SemiDirect);
  CHECK(id_of_family(Family::D2l) == "d2l");
  CHECK_THROWS_AS(family_of_id("sp4"), std::invalid_argument);
  CaseInstance c = build_case_by_id("s3", 0, 0, "ff-mu");
  CHECK(c.l == 3);
}

TEST_CASE("full grid builds and verifies") {
  struct Spec {
    Family fam;
    long l, r;
  };
  std::vector<Spec> grid = {
      {Family::S3, 0, 0},          {Family::S4, 0, 0},
      {Family::A4, 0, 0},          {Family::D2l, 3, 0},
      {Family::D2l, 5, 0},         {Family::D2l, 7, 0},
      {Family::D2l, 11, 0},        {Family::D2l, 13, 0},
      {Family::SemiDirect, 7, 3},  {Family::SemiDirect, 11, 5},
      {Family::SemiDirect, 13, 3},
  };
  for (const Spec& g : grid) {
    for (const std::string& s : setting_names()) {
      long canonical_l = g.l;
      if (g.fam == Family::S3) canonical_l = 3;
      if (g.fam == Family::S4 || g.fam == Family::A4) canonical_l = 2;
      if (s == "ff-nomu" && canonical_l == 2) continue;
      CaseInstance c = build_case(g.fam, g.l, g.r, s);
      CaseReport rep = verify_case(c);
      INFO(family_name(g.fam) << " l=" << c.l << " r=" << c.r << " "
                              << s << "\n"
                              << rep.str());
      CHECK(rep.all_pass);
    }
  }
}
