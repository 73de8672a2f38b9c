// selfcheck.hpp — Cross-route and oracle invariant suite behind the `check`
// CLI command
#pragma once

#include <string>
#include <vector>

namespace retroatom::selfcheck {

struct CheckOptions {
  // Test fixture: rebuilds the thermal channel with a doubled coherence
  // decay rate so the oracle comparisons must fail. Negative control only.
  bool corrupt_thermal_coherence = false;
  unsigned long long seed = 0x5eedu;
};

struct CheckItem {
  std::string name;
  bool pass = false;
  double measured = 0.0;  // worst observed deviation
  double tol = 0.0;
};

struct CheckReport {
  // Oracle-grounded invariants; these decide the exit status.
  std::vector<CheckItem> invariants;
  // Literal-coefficient forms audited against the generator/adjoint routes.
  // Entries that miss the tolerance are reported with their measured
  // discrepancy but do not fail the run.
  std::vector<CheckItem> audit;

  bool all_pass() const;
};

CheckReport run_self_check(const CheckOptions& options = {});

}  // namespace retroatom::selfcheck
