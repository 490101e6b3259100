#include "tcg/sim.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace tcg {

namespace {

State axpy(const State& y, double h, const State& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }

State rk4_step(const Field& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State k4 = f(t + h, axpy(y, h, k3));
  return {y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

std::size_t step_count(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw DomainError("integrate: dt must be positive");
  if (!(t1 >= t0)) throw DomainError("integrate: t1 must not precede t0");
  return static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9));
}

Trajectory run(const Field& f, const State& init, double t0, std::size_t n, double dt, int sub) {
  Trajectory tr;
  tr.times.reserve(n + 1);
  tr.states.reserve(n + 1);
  State y = init;
  tr.times.push_back(t0);
  tr.states.push_back(y);
  const double h = dt / sub;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = t0 + double(i) * dt;
    for (int s = 0; s < sub; ++s) y = rk4_step(f, ti + s * h, y, h);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      throw DivergenceError("integrate: non-finite state after t = " + std::to_string(ti), ti);
    tr.times.push_back(t0 + double(i + 1) * dt);
    tr.states.push_back(y);
  }
  return tr;
}

}  // namespace

Trajectory integrate(const Field& f, const State& init, double t0, double t1, double dt,
                     bool richardson) {
  const std::size_t n = step_count(t0, t1, dt);
  Trajectory tr = run(f, init, t0, n, dt, 1);
  if (richardson) {
    const Trajectory half = run(f, init, t0, n, dt, 2);
    double e = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i)
      e = std::max(e, std::hypot(tr.states[i][0] - half.states[i][0],
                                 tr.states[i][1] - half.states[i][1]));
    tr.richardson_error = e;
  }
  return tr;
}

Trajectory filter_trajectory(const Trajectory& traj, const WindowSpec& win) {
  const std::size_t n = traj.size();
  if (n < 2) throw InsufficientSupport("filter_trajectory: trajectory too short");
  if (win.kind == WindowKind::delta) return traj;
  const double dt = traj.times[1] - traj.times[0];
  const long half = static_cast<long>(std::ceil(win.support() / dt));
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  double total = 0.0;
  for (long j = -half; j <= half; ++j) {
    const double w = win.density(double(j) * dt);
    kernel[static_cast<std::size_t>(j + half)] = w;
    total += w;
  }
  Trajectory out;
  for (std::size_t i = 0; i < n; ++i) {
    double mass = 0.0, th = 0.0, p = 0.0;
    for (long j = -half; j <= half; ++j) {
      // Output at t uses samples at t - s with weight w(s).
      const long idx = static_cast<long>(i) - j;
      if (idx < 0 || idx >= static_cast<long>(n)) continue;
      const double w = kernel[static_cast<std::size_t>(j + half)];
      mass += w;
      th += w * traj.states[static_cast<std::size_t>(idx)][0];
      p += w * traj.states[static_cast<std::size_t>(idx)][1];
    }
    if (mass < 0.99 * total) continue;
    out.times.push_back(traj.times[i]);
    out.states.push_back({th / mass, p / mass});
  }
  if (out.times.empty()) throw InsufficientSupport("filter_trajectory: span shorter than the window");
  return out;
}

namespace {

struct CoordTerm {
  ExpPoly coeff;
  PhaseFn f_theta, f_p;
};

State eval_terms(const std::vector<CoordTerm>& terms, double t, const State& y) {
  double a = 0.0, b = 0.0;
  for (const auto& term : terms) {
    const cplx c = term.coeff(t);
    a += (c * term.f_theta(y[0], y[1])).real();
    b += (c * term.f_p(y[0], y[1])).real();
  }
  return {a, b};
}

}  // namespace

Field model_field(const ModelSpec<PsOp>& model) {
  std::vector<CoordTerm> terms;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const VectorField v = vector_field(model.ops[i]);
    terms.push_back({model.f[i], v.f_theta, v.f_p});
  }
  return [terms](double t, const State& y) { return eval_terms(terms, t, y); };
}

Field effective_field(const GeneratorSeries<PsOp>& series, int up_to) {
  const int top = up_to < 0 ? series.n_max() : std::min(up_to, series.n_max());
  // Terms sharing a coefficient function are merged to keep evaluation cheap.
  std::vector<CoordTerm> terms;
  for (int n = 1; n <= top; ++n)
    for (const auto& term : series.orders[static_cast<std::size_t>(n - 1)]) {
      const VectorField v = vector_field(term.element);
      if (v.f_theta.is_zero() && v.f_p.is_zero()) continue;
      bool merged = false;
      for (auto& existing : terms) {
        if (!approx_equal(existing.coeff, term.coeff, 0.0)) continue;
        existing.f_theta += v.f_theta;
        existing.f_p += v.f_p;
        merged = true;
        break;
      }
      if (!merged) terms.push_back({term.coeff, v.f_theta, v.f_p});
    }
  return [terms](double t, const State& y) { return eval_terms(terms, t, y); };
}

Field effective_field(const GeneratorSeries<MatrixOp>& series, int up_to) {
  return [series, up_to](double t, const State& y) {
    const Eigen::MatrixXcd a = series.evaluate(t, up_to).m;
    return State{(a(0, 0) * y[0] + a(0, 1) * y[1]).real(), (a(1, 0) * y[0] + a(1, 1) * y[1]).real()};
  };
}

Trajectory effective_trajectory(const GeneratorSeries<PsOp>& series, const State& init, double t0,
                                double t1, double dt, int up_to) {
  return integrate(effective_field(series, up_to), init, t0, t1, dt);
}

ComparisonReport compare(const Trajectory& a, const Trajectory& b) {
  ComparisonReport r;
  if (a.size() < 2 && b.size() < 2) throw DomainError("compare: trajectories too short");
  const double dt = a.size() >= 2 ? a.times[1] - a.times[0] : b.times[1] - b.times[0];
  const double tol = 1e-9 * dt;
  std::size_t j = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (j < b.size() && b.times[j] < a.times[i] - tol) ++j;
    if (j == b.size()) break;
    if (std::abs(b.times[j] - a.times[i]) > tol) continue;
    const double d = std::hypot(a.states[i][0] - b.states[j][0], a.states[i][1] - b.states[j][1]);
    r.times.push_back(a.times[i]);
    r.deviations.push_back(d);
    sum += d * d;
    r.max_dev = std::max(r.max_dev, d);
  }
  if (r.times.empty()) throw DomainError("compare: no common sample times");
  r.rms = std::sqrt(sum / double(r.times.size()));
  return r;
}

std::vector<State> circle_polygon(const State& center, double radius, int n) {
  std::vector<State> out;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    out.push_back({center[0] + radius * std::cos(a), center[1] + radius * std::sin(a)});
  }
  return out;
}

double shoelace_area(const std::vector<State>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const State& a = poly[i];
    const State& b = poly[(i + 1) % poly.size()];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * std::abs(s);
}

bool self_intersects(const std::vector<State>& poly) {
  const std::size_t n = poly.size();
  auto cross = [](const State& o, const State& a, const State& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const State &p1 = poly[i], &p2 = poly[(i + 1) % n], &q1 = poly[j], &q2 = poly[(j + 1) % n];
      const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
      const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
      if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 * d2 < 0 && d3 * d4 < 0) return true;
    }
  return false;
}

AreaSeries phase_space_area(const Field& f, std::vector<State> poly, double t0, double t1,
                            double dt, int stride, int max_vertices) {
  if (poly.size() < 32) throw DomainError("phase_space_area: polygon needs at least 32 vertices");
  if (stride < 1) throw DomainError("phase_space_area: stride must be positive");
  const std::size_t n = step_count(t0, t1, dt);
  double spacing = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const State& a = poly[i];
    const State& b = poly[(i + 1) % poly.size()];
    spacing = std::max(spacing, std::hypot(a[0] - b[0], a[1] - b[1]));
  }
  AreaSeries out;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.areas.push_back(shoelace_area(poly));
    out.vertices.push_back(static_cast<int>(poly.size()));
    out.self_intersecting.push_back(self_intersects(poly));
  };
  record(t0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + double(i) * dt;
    for (auto& v : poly) v = rk4_step(f, t, v, dt);
    if (static_cast<int>(poly.size()) < max_vertices) {
      std::vector<State> refined;
      refined.reserve(poly.size() * 2);
      for (std::size_t k = 0; k < poly.size(); ++k) {
        const State& a = poly[k];
        const State& b = poly[(k + 1) % poly.size()];
        refined.push_back(a);
        if (std::hypot(a[0] - b[0], a[1] - b[1]) > 2.0 * spacing &&
            static_cast<int>(refined.size() + poly.size() - k) < max_vertices)
          refined.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
      }
      poly.swap(refined);
    }
    if ((i + 1) % static_cast<std::size_t>(stride) == 0 || i + 1 == n)
      record(t0 + double(i + 1) * dt);
  }
  return out;
}

void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << "\n";
  os << "t,theta,p\n" << std::setprecision(17);
  for (std::size_t i = 0; i < traj.size(); ++i)
    os << traj.times[i] << "," << traj.states[i][0] << "," << traj.states[i][1] << "\n";
}

}  // namespace tcg
