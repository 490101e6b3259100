// Trajectory integration, window filtering of sampled trajectories,
// integration of effective dynamics, comparison metrics and phase-space
// area tracking.
#pragma once

#include "tcg/analysis.hpp"
#include "tcg/cumulant.hpp"
#include "tcg/expavg.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace tcg {

using State = std::array<double, 2>;  // (theta, p)
using Field = std::function<State(double, const State&)>;

class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, double last_good)
      : NumericError(what), last_good_time(last_good) {}
  double last_good_time;
};

class InsufficientSupport : public DomainError {
 public:
  using DomainError::DomainError;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  // Max state difference against a half-step run, when requested.
  double richardson_error = -1.0;

  std::size_t size() const { return times.size(); }
};

// Fixed-step RK4 on [t0, t1]; sample i sits at t0 + i dt.
Trajectory integrate(const Field& f, const State& init, double t0, double t1, double dt,
                     bool richardson = false);

// Convolution with the sampled window, renormalized at the edges; keeps
// samples whose window mass inside the span is at least 99%.
Trajectory filter_trajectory(const Trajectory& traj, const WindowSpec& win);

// Sum_i f_i(t) times the coordinate action of each letter.
Field model_field(const ModelSpec<PsOp>& model);
// Coordinate action of a truncated generator series, coefficients evaluated
// at every step.
Field effective_field(const GeneratorSeries<PsOp>& series, int up_to = -1);
Field effective_field(const GeneratorSeries<MatrixOp>& series, int up_to = -1);

Trajectory effective_trajectory(const GeneratorSeries<PsOp>& series, const State& init, double t0,
                                double t1, double dt, int up_to = -1);

struct ComparisonReport {
  double rms = 0.0;
  double max_dev = 0.0;
  std::vector<double> times;
  std::vector<double> deviations;  // Euclidean distance in (theta, p)
};

// Deviation over the times the two trajectories share (within 1e-9 dt).
ComparisonReport compare(const Trajectory& a, const Trajectory& b);

struct AreaSeries {
  std::vector<double> times;
  std::vector<double> areas;
  std::vector<int> vertices;
  std::vector<bool> self_intersecting;
};

std::vector<State> circle_polygon(const State& center, double radius, int n);
double shoelace_area(const std::vector<State>& poly);
bool self_intersects(const std::vector<State>& poly);

// Advects the polygon with RK4, sampling every `stride` steps; an edge longer
// than twice the initial spacing gets a midpoint vertex.
AreaSeries phase_space_area(const Field& f, std::vector<State> poly, double t0, double t1,
                            double dt, int stride = 1, int max_vertices = 4096);

// Header `t,theta,p`, 17 significant digits, optional leading comment lines.
void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& comments = {});

}  // namespace tcg
