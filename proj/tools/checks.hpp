// Acceptance checks shared by `tcg selftest` and the acceptance binary.
#pragma once

#include <string>
#include <vector>

namespace tcg::cli {

struct CheckResult {
  int id = 0;  // acceptance criterion number, 0 for artifact checks
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string format(const CheckResult& r);

// 1: engine thresholds against the closed forms at orders 3, 5 and 7.
CheckResult check_threshold_equivalence(const std::vector<double>& gammas,
                                        const std::vector<double>& betas);
// 2: order-7 threshold against the Floquet oracle, and refinement with order.
CheckResult check_oracle_agreement(const std::vector<double>& gammas,
                                   const std::vector<double>& betas);
// 3: upper stability boundary.
CheckResult check_upper_boundary();
// 4: first-order rotating-frame matrices and offsets.
CheckResult check_frame_matrices();
// 5: vanishing second order, delta-window collapse, Dynkin idempotence.
CheckResult check_symmetry_collapse();
// 8: effective against filtered trajectories of the modulated pendulum.
CheckResult check_phase_space();
// 9: second- and third-order coefficients of the modulated pendulum.
CheckResult check_modulated_forms();
// 10: parametric oscillator couplings.
CheckResult check_parametric();
// Third-order Kapitza operator against the stored reference dump.
CheckResult check_golden(const std::string& path = "");

// Reference dump of the third-order Kapitza operator, one term per line.
std::string golden_dump();

}  // namespace tcg::cli
