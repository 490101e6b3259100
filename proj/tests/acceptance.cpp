// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
#include "checks.hpp"
#include "oracles.hpp"

#include "tcg/models.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>

using namespace tcg;
using namespace tcg::cli;

namespace {

const std::vector<double> kGammas{0.05, 0.1, 0.15, 0.2};
const std::vector<double> kBetas{0.0, 0.02, 0.05};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckResult moment_oracle() {
  CheckResult r{6, "ordered moments against nested quadrature", true, ""};
  const auto model = kapitza_psop({0.1, 0.3, 0.05, 1.0});
  double worst = 0.0;
  int words = 0;
  for (const WindowSpec& win : {WindowSpec::gaussian(1.0), WindowSpec::rectangular(2.0)}) {
    const auto nodes = oracle::window_nodes(win);
    for (int len = 1; len <= 4; ++len)
      for (const Word& w : all_words(static_cast<int>(model.size()), len)) {
        ++words;
        const ExpPoly m = ordered_moment(w, model.f, win);
        std::vector<double> times;
        const std::vector<double> ts{0.0, 1.0, 2.5, 4.0, 5.0};
        for (double t : ts)
          for (const auto& [s, wt] : nodes) times.push_back(t - s);
        const auto vals = oracle::nested_integral(w, model.f, times);
        for (std::size_t i = 0; i < ts.size(); ++i) {
          cplx acc = 0.0;
          for (std::size_t j = 0; j < nodes.size(); ++j) acc += nodes[j].second * vals[i * nodes.size() + j];
          worst = std::max(worst, std::abs(acc - m(ts[i])));
        }
      }
  }
  r.pass = worst <= 1e-8;
  r.detail = std::to_string(words) + " words, two windows, max |error| " + sci(worst) + " (tol 1e-8)";
  return r;
}

ModelSpec<MatrixOp> random_two_letter(double eps) {
  std::mt19937 rng(21);
  std::normal_distribution<double> n;
  ModelSpec<MatrixOp> m;
  const double freqs[] = {1.3, -0.7};
  for (int l = 0; l < 2; ++l) {
    Eigen::MatrixXcd a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = eps * cplx(n(rng), n(rng));
    m.ops.emplace_back(a);
    m.f.push_back(ExpPoly::harmonic(freqs[l]) + ExpPoly::constant(0.3 * l));
  }
  return m;
}

// Averaged propagator at T from the order-n effective generator, started at
// the averaged propagator at 0.
Eigen::MatrixXcd effective_propagator(const GeneratorSeries<MatrixOp>& g, const Eigen::MatrixXcd& m0,
                                      double T, int steps) {
  Eigen::MatrixXcd mm = m0;
  const double h = T / steps;
  auto u = [&](double s) { return g.evaluate(s).m; };
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    const Eigen::MatrixXcd k1 = mm * u(t);
    const Eigen::MatrixXcd k2 = (mm + 0.5 * h * k1) * u(t + 0.5 * h);
    const Eigen::MatrixXcd k3 = (mm + 0.5 * h * k2) * u(t + 0.5 * h);
    const Eigen::MatrixXcd k4 = (mm + h * k3) * u(t + h);
    mm += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return mm;
}

CheckResult propagator_scaling() {
  CheckResult r{7, "propagator order scaling and Magnus route", true, ""};
  const WindowSpec win = WindowSpec::gaussian(0.5);
  const double T = 2.0;
  const std::vector<double> eps{0.02, 0.04, 0.08, 0.16};
  std::string slopes;
  bool ok = true;
  double magnus_gap = 0.0;
  std::vector<std::vector<double>> err(3);
  for (double e : eps) {
    const auto m = random_two_letter(e);
    const Eigen::MatrixXcd m0 = oracle::averaged_propagator(m, win, 0.0, 1e-3);
    const Eigen::MatrixXcd m1 = oracle::averaged_propagator(m, win, T, 1e-3);
    for (int n = 1; n <= 3; ++n) {
      TruncationPolicy pol;
      pol.n_max = n;
      pol.slow_cutoff = 1e9;
      pol.coeff_floor = 0.0;
      const auto g = effective_generator(m, win, pol);
      err[n - 1].push_back((effective_propagator(g, m0, T, 2000) - m1).norm());
      const auto mg = magnus_generator(m, win, pol);
      for (double t : {0.0, 0.7, 2.0})
        magnus_gap = std::max(magnus_gap, norm_inf(sub(mg.evaluate(t), g.evaluate(t))) / std::pow(e, n + 1));
    }
  }
  for (int n = 1; n <= 3; ++n) {
    // Least-squares slope of log error against log eps.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double x = std::log(eps[i]), y = std::log(err[n - 1][i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    ok = ok && std::abs(slope - (n + 1)) <= 0.3;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%sn=%d %.3f", n > 1 ? ", " : "", n, slope);
    slopes += buf;
  }
  // Magnus and Dyson generators differ only by terms of order eps^(n+1) or
  // higher, so the gap scaled by eps^-(n+1) stays bounded at round-off size.
  r.pass = ok && magnus_gap <= 1e-8;
  r.detail = "slopes " + slopes + " (target n+1, tol 0.3), Magnus-Dyson gap / eps^(n+1) " + sci(magnus_gap) +
             " (tol 1e-8)";
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    double budget;  // seconds
    std::function<CheckResult()> run;
  };
  const std::vector<Criterion> criteria = {
      {120, [] { return check_threshold_equivalence(kGammas, kBetas); }},
      {60, [] { return check_oracle_agreement(kGammas, kBetas); }},
      {60, check_upper_boundary},
      {10, check_frame_matrices},
      {10, check_symmetry_collapse},
      {120, moment_oracle},
      {60, propagator_scaling},
      {180, check_phase_space},
      {10, check_modulated_forms},
      {10, check_parametric},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget) {
      r.pass = false;
      r.detail += ", runtime over budget";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, " [%.1f s, budget %.0f s]", secs, c.budget);
    std::cout << format(r) << buf << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (failed == 0 ? "acceptance: all criteria passed" : "acceptance: " + std::to_string(failed) + " failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
