#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "biprod/abelian_group.hpp"
#include "biprod/characters.hpp"
#include "biprod/constructions.hpp"
#include "biprod/hopf_biproduct.hpp"
#include "biprod/perm_search.hpp"

namespace biprod {

// Insertion-ordered documents keep reports byte-stable across runs.
using Json = nlohmann::ordered_json;

// Parsing is strict: objects carry exactly the documented keys and every
// value goes through the library constructors. Violations surface as
// invalid_input_error carrying the offending location.

Json group_to_json(const FiniteAbelianGroup& g); // {"moduli":[...]}
FiniteAbelianGroup group_from_json(const Json& j);

Json elem_to_json(const GroupElem& e); // [c0, c1, ...]
GroupElem elem_from_json(const FiniteAbelianGroup& g, const Json& j);

Json map_to_json(const GroupMap& f); // {"images":[[...], ...]}
GroupMap map_from_json(const FiniteAbelianGroup& g, const Json& j);

Json perm_to_json(const Perm& p); // [t0, t1, ...]
Perm perm_from_json(const Json& j);

Json character_to_json(const Character& a); // {"modulus":m,"exps":[...]}
Character character_from_json(const FiniteAbelianGroup& g, const Json& j);

Json witness_to_json(const GammaWitness& w); // {"tau":[...],"alpha":{...}}

// Common report schema for enumeration results. Witnesses are attached for
// the witness-group target, null otherwise.
Json perm_report_to_json(const PermGroupReport& rep, const GroupMap& sigma,
                         const std::vector<GammaWitness>* witnesses);

// ---------------------------------------------------------------------------
// Instance library. A single checked-in file drives the theorem batches;
// the loader validates everything eagerly so a broken library fails fast
// rather than mid-suite.
// ---------------------------------------------------------------------------

struct LibraryInstance {
  std::string name;
  FiniteAbelianGroup group;
  GroupMap sigma;
  std::vector<std::string> tags;
  std::string nofix_case; // set iff tagged "nofix"

  bool has_tag(const std::string& t) const;
};

struct CosetInstance {
  std::string name;
  CosetShiftSpec spec;
};

struct ChainInstance {
  struct Pattern {
    std::string name;
    TwistPatternSpec spec;
    std::string expect; // "aut" | "gamma-not-aut" | "sym-not-gamma"
  };
  std::string name;
  CosetShiftSpec carrier;
  std::vector<Pattern> patterns;
};

struct LocalRingInstance {
  std::string name;
  long p = 0;
  LocalRingKind kind = LocalRingKind::PrimeSquare;
};

struct BiproductInstance {
  std::string name;
  BiproductSpec spec;
  bool core_shape = false; // built from the cyclic-core template
};

struct ExampleLibrary {
  std::vector<LibraryInstance> instances;
  std::vector<CosetInstance> main_examples;
  std::vector<ChainInstance> chains;
  std::vector<LocalRingInstance> local_rings;
  std::vector<BiproductInstance> biproducts;
  std::vector<std::vector<long>> small_groups; // exhaustive-sigma batches
  std::vector<std::vector<long>> odd_groups;   // involution batches
};

ExampleLibrary load_library(const std::string& path);

// Single-instance config consumed by the CLI front end:
// {"moduli":[...]} with optional "name" and "sigma_images".
struct InstanceConfig {
  std::string name;
  FiniteAbelianGroup group;
  std::optional<GroupMap> sigma;
};

InstanceConfig instance_config_from_json(const Json& j);

// File plumbing shared by the CLI and the batch suites.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// "Z2 x Z4" style label from moduli, for summaries.
std::string moduli_label(const std::vector<long>& moduli);

} // namespace biprod
