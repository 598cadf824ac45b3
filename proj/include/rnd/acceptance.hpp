#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rnd/exec.hpp"

namespace rnd {

struct AcceptanceOptions {
  Exec exec = Exec::Parallel;
  int a_count = 10;                        // a values for the winding sweep
  std::vector<double> radii{1e3, 1e4, 1e5};
  std::vector<int> only;                   // empty: all of 1..10
};

struct CriterionResult {
  int id = 0;
  bool pass = false;
  std::vector<std::string> checks;  // one line per sub-check, "ok ..." or "FAILED ..."
};

// Runs the criteria and prints each sub-check followed by one
// "criterion N: PASS|FAIL" line.
std::vector<CriterionResult> run_acceptance(std::ostream& os, const AcceptanceOptions& opt = {});

}  // namespace rnd
