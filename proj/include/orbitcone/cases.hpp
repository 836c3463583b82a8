#ifndef ORBITCONE_CASES_HPP
#define ORBITCONE_CASES_HPP

#include <string>
#include <vector>

#include "orbitcone/json_io.hpp"

namespace orbitcone {

/// One machine-checked expectation of a catalog case.
struct CaseAssertion {
  std::string name;
  bool pass = false;
  Json expected;
  Json actual;
  std::string citation;
};

struct CaseResult {
  std::string name;
  bool pass = false;
  std::vector<CaseAssertion> assertions;
  Json details;

  Json to_json() const;
};

/// Runs a catalog case definition (see schema/v1/catalog_case.schema.json).
/// Kinds: sp_search | orbit_sum | tuple_table | whittaker | ac_cartan |
/// elliptic_search.
CaseResult run_case(const Json& case_def, std::uint64_t seed,
                    ExecPolicy policy = ExecPolicy::Parallel);

std::vector<std::string> builtin_case_names();
Json builtin_case(const std::string& name);

}  // namespace orbitcone

#endif
