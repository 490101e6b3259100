// Subcommands of the tcg tool and the scenarios they share with the
// acceptance checks.
#pragma once

#include "config.hpp"

#include "tcg/analysis.hpp"
#include "tcg/models.hpp"
#include "tcg/sim.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace tcg::cli {

enum ExitCode { kOk = 0, kUsage = 1, kNumeric = 2, kAcceptance = 3 };

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  int order = -1;  // overrides engine.order when positive
  int threads = 1;
};

int cmd_threshold(const Options& opt, std::ostream& log);
int cmd_phase_space(const Options& opt, std::ostream& log);
int cmd_couplings(const Options& opt, std::ostream& log);
int cmd_selftest(std::ostream& out);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

WindowSpec window_from(const Config& c, double default_tau);

// Exact, filtered and effective trajectories of the length-modulated pendulum.
struct PhaseSpaceSetup {
  KapitzaParams params{std::sqrt(0.02), 0.3, 0.05, 20.0};
  ModulationParams modulation{ModulationKind::periodic, 0.0, 0.0, 0.2, 5.0 / (2.0 * M_PI)};
  WindowSpec window = WindowSpec::gaussian(0.4);
  int order = 3;
  int grade_max = -1;
  double theta0 = 0.01;
  double p0 = 0.0;
  double t_start = -2.0;
  double t_end = 40.0;
  int steps_per_period = 256;
  int area_vertices = 64;
  double area_radius = 2e-3;
};

struct EffectiveRun {
  int order = 0;
  Trajectory traj;
  ComparisonReport report;
  double max_abs_theta = 0.0;
};

struct PhaseSpaceRun {
  Trajectory exact;
  Trajectory filtered;
  std::vector<EffectiveRun> effective;  // order 1 then the requested order
  AreaSeries area;                      // under the highest-order dynamics
  std::vector<std::string> warnings;
};

PhaseSpaceRun run_phase_space(const PhaseSpaceSetup& s);
PhaseSpaceSetup phase_space_setup(const Config& c, int order_override);

struct Coupling {
  double omega1 = 0.0, omega2 = 0.0;
  double g = 0.0;      // Hamiltonian (commutator) magnitude
  double gamma = 0.0;  // non-Hamiltonian magnitude
};

// Second-order coupling of two harmonic letters split by the Dynkin projection.
Coupling coupling(double omega1, double omega2, const WindowSpec& win);

}  // namespace tcg::cli
