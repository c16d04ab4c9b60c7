#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oag/deffn.hpp"
#include "oag/group.hpp"
#include "oag/quotient.hpp"

namespace oag {

// A verification run of one registry entry over a parameter grid.
struct LemmaCase {
  std::string id;
  GroupSpec spec;
  unsigned samples = 200;
  std::uint64_t seed = 0x0a67;
  unsigned cap = 32;
  unsigned smax = 3;
  unsigned rmax = 3;
};

struct CaseResult {
  std::string name;
  bool pass = true;
  bool inconclusive = false;
  std::string witness;  // concrete element or system on failure
};

struct VerificationReport {
  std::string lemma;
  std::string group;
  std::uint64_t seed = 0;
  unsigned cap = 0;
  unsigned samples = 0;
  std::vector<CaseResult> cases;
  double wall_ms = 0;

  bool passed() const;
  bool inconclusive() const;
  // timing is opt-in so that reports are reproducible byte for byte
  std::string to_json(bool include_timing = false) const;
};

const std::vector<std::string>& registry_ids();
bool registry_has(const std::string& id);
GroupSpec default_spec_for(const std::string& id);

// The all-cells-(2,2) partitioned family at desk scale.
GroupSpec spec_72(unsigned cells = 8);

VerificationReport run_lemma_suite(const LemmaCase& c);  // UnknownLemma, IncompatibleFamily

struct DimProfileRow {
  unsigned s;
  IndexValue dim;
};

std::vector<DimProfileRow> dim_profile(const GroupSpec& spec, const Int& p, unsigned smax,
                                       unsigned cap = 32);  // IncompatibleFamily
std::string dim_profile_csv(const std::vector<DimProfileRow>& rows);

}  // namespace oag
