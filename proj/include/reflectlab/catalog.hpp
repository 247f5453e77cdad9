#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "reflectlab/gmodules.hpp"
#include "reflectlab/groups.hpp"

namespace reflectlab {

// Arithmetic ambient data for a case: where the l-th roots of unity live and
// the resulting ranks (h0, h1, h2) of the ambient twist coefficient.
struct Setting {
  enum class Kind { FunctionField, NumberField };
  Kind kind = Kind::FunctionField;
  bool mu_in_base = true;
  bool b_nontrivial = false;  // = !mu_in_base; nontrivial twist kills h0
  long ambient_h0 = 0, ambient_h1 = 0, ambient_h2 = 0;
  std::string name;  // "ff-mu" | "ff-nomu" | "nf"
};

// Validates the combination (e.g. "ff-nomu" is impossible for l = 2).
Setting make_setting(const std::string& name, long l);
std::vector<std::string> setting_names();

struct DirectSumRecord {
  ModPtr whole;
  std::vector<ModPtr> parts;  // with multiplicity: repeated entries
  std::string note;
};

struct CaseInstance {
  Family family = Family::S3;
  long l = 0, r = 0;
  Setting setting;
  std::shared_ptr<const FiniteGroup> group;

  ModPtr M;  // permutation module of the degree-n side
  ModPtr N;  // permutation module of the resolvent side
  std::vector<ModPtr> modules;          // every distinct module object
  std::vector<SES> sequences;           // ladder ordered top row first
  std::vector<DirectSumRecord> direct_sums;
  std::vector<Subgroup> inertia_family;

  // Per-object derived data (keys are the shared objects in `modules`).
  std::map<const GModule*, bool> euler_flag;      // Euler constraint applies
  std::map<const GModule*, long> h0_table;        // global-section rank
  std::map<const GModule*, bool> ambient_pinned;  // h1,h2 fixed to ambient

  // The simple resolvent-side factors whose h1 carries the parameter
  // (N' for S3/S4/A4/D2l; R_1..R_{r-1} for SemiDirect).
  std::vector<ModPtr> parameter_parts;

  std::vector<std::string> notes;  // modeling deviations, recorded verbatim
};

// Throws std::invalid_argument on bad parameters; throws std::logic_error if
// an internal consistency check fails (an implementation bug, not user error).
CaseInstance build_case(Family family, long l, long r,
                        const std::string& setting_name);

// Stable external identifiers used by the CLI.
std::vector<std::string> case_ids();  // {"s3","s4","a4","d2l","semidirect"}
Family family_of_id(const std::string& id);
std::string id_of_family(Family f);
// Resolves defaulted parameters (s3 -> l=3, s4/a4 -> l=2) and builds.
CaseInstance build_case_by_id(const std::string& id, long l, long r,
                              const std::string& setting_name);

struct SeqVerdict {
  std::string note;
  bool exact = false;
};
struct InvVerdict {
  std::string seq_note;
  std::string subgroup_desc;
  bool left_exact = false, right_exact = false;
};
struct IsoVerdict {
  std::string what;
  IsoCheck verdict = IsoCheck::Undetermined;
};
struct DimCheck {
  std::string what;
  bool pass = false;
};

struct CaseReport {
  std::vector<SeqVerdict> sequences;
  std::vector<InvVerdict> invariants;
  std::vector<IsoVerdict> isos;
  std::vector<DimCheck> dim_checks;
  std::vector<std::string> notes;
  bool all_pass = false;
  std::string str() const;
};

CaseReport verify_case(const CaseInstance& c);

}  // namespace reflectlab
