#include "checks.hpp"

#include "commands.hpp"

#include "tcg/analysis.hpp"
#include "tcg/freewords.hpp"
#include "tcg/models.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#ifndef TCG_GOLDEN_DIR
#define TCG_GOLDEN_DIR "."
#endif

namespace tcg::cli {

namespace {

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

const WindowSpec kSlow = WindowSpec::gaussian(8.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

std::string format(const CheckResult& r) {
  std::string s = r.pass ? "PASS" : "FAIL";
  s += r.id > 0 ? "  criterion " + std::to_string(r.id) : "  artifact";
  return s + "  " + r.name + ": " + r.detail;
}

CheckResult check_threshold_equivalence(const std::vector<double>& gammas,
                                        const std::vector<double>& betas) {
  CheckResult r{1, "threshold formula equivalence", true, ""};
  double worst = 0.0;
  std::string where;
  for (int order : {3, 5, 7}) {
    const KapitzaThreshold engine(order, kSlow);
    for (double g : gammas)
      for (double b : betas) {
        const ThresholdResult t = engine.lambda0(g, b);
        const double e = t.found ? rel(t.value, closed_form_lambda0(order, g, b)) : INFINITY;
        if (!(e <= worst)) {
          worst = e;
          where = "order " + std::to_string(order) + fmt(" gamma %g", g) + fmt(" beta %g", b);
        }
      }
  }
  r.pass = worst <= 1e-4;
  r.detail = "max relative error " + sci(worst) + " at " + where + " (tol 1e-4)";
  return r;
}

CheckResult check_oracle_agreement(const std::vector<double>& gammas,
                                   const std::vector<double>& betas) {
  CheckResult r{2, "Floquet oracle agreement", true, ""};
  const KapitzaThreshold t3(3, kSlow), t7(7, kSlow);
  const FloquetBounds ref = floquet_bounds(0.1, 0.0);
  const double l7 = t7.lambda0(0.1, 0.0).value;
  const double e = ref.lower.found ? rel(l7, ref.lower.value) : INFINITY;
  int violations = 0;
  for (double g : gammas)
    for (double b : betas) {
      const FloquetBounds fb = floquet_bounds(g, b);
      if (!fb.lower.found) {
        ++violations;
        continue;
      }
      const double e3 = std::abs(t3.lambda0(g, b).value - fb.lower.value);
      const double e7 = std::abs(t7.lambda0(g, b).value - fb.lower.value);
      if (e7 > e3) ++violations;
    }
  r.pass = e <= 0.01 && violations == 0;
  r.detail = "order-7 relative error " + sci(e) + " (tol 1e-2), refinement violations " +
             std::to_string(violations) + "/" + std::to_string(gammas.size() * betas.size());
  return r;
}

CheckResult check_upper_boundary() {
  CheckResult r{3, "upper stability boundary", true, ""};
  const double l0 = lambda_c_first_order(0.0, 0.0).value;
  const double e0 = std::abs(l0 - 0.454163);
  double e1 = 0.0;
  for (double g : {0.1, 0.2}) {
    const double g2 = g * g;
    const double closed = (std::sqrt(117 + 232 * g2 + 80 * g2 * g2) - 9 - 4 * g2) / 4;
    e1 = std::max(e1, std::abs(lambda_c_first_order(g, 0.0).value - closed));
  }
  const FloquetBounds fb = floquet_bounds(0.1, 0.0);
  const double ef = fb.upper.found ? rel(lambda_c_first_order(0.1, 0.0).value, fb.upper.value) : INFINITY;
  r.pass = e0 <= 1e-5 && e1 <= 1e-8 && ef <= 0.02;
  r.detail = "limit " + fmt("%.6f", l0) + " (err " + sci(e0) + ", tol 1e-5), closed form err " + sci(e1) +
             " (tol 1e-8), Floquet rel err " + sci(ef) + " (tol 2e-2)";
  return r;
}

CheckResult check_frame_matrices() {
  CheckResult r{4, "rotating-frame first-order matrices", true, ""};
  double worst = 0.0;
  TruncationPolicy pol;
  pol.n_max = 1;
  for (const KapitzaParams& p : {KapitzaParams{0.1, 0.3, 0.05, 1.0}, KapitzaParams{0.2, 0.45, 0.1, 2.0}}) {
    const double g2 = p.gamma * p.gamma, b = p.beta, l = p.lambda, nu = p.nu, amp = 0.7;
    for (int frame : {1, 2}) {
      const auto a = effective_generator(ct_frame(frame, p, amp), kSlow, pol).evaluate(0.0).m;
      const Eigen::Matrix2d m = -a.real().topLeftCorner(2, 2);
      const Eigen::Vector2d z0 = m.inverse() * a.real().block(0, 2, 2, 1);
      Eigen::Matrix2d em;
      Eigen::Vector2d ez;
      if (frame == 1) {
        const double c = (9 + 4 * g2) * nu / 12;
        em << 0.5 * b * nu, c, -c, 0.5 * b * nu;
        const double s = 2 * l * amp / ((9 + 4 * g2) * (9 + 4 * g2) + 36 * b * b);
        ez << s * (9 + 4 * g2), -s * 6 * b;
      } else {
        em << 0.5 * b * nu, (1 + 2 * l + 4 * g2) * nu / 4, -(1 - 2 * l + 4 * g2) * nu / 4, 0.5 * b * nu;
        const double s = 2 * l * amp / ((1 + 4 * g2) * (1 + 4 * g2) - 4 * l * l + 4 * b * b);
        ez << s * (1 + 2 * l + 4 * g2), -s * 2 * b;
      }
      worst = std::max({worst, (m - em).cwiseAbs().maxCoeff(), (z0 - ez).cwiseAbs().maxCoeff(),
                        a.imag().cwiseAbs().maxCoeff()});
    }
  }
  r.pass = worst <= 1e-9;
  r.detail = "max entry error " + sci(worst) + " over both frames and two parameter sets (tol 1e-9)";
  return r;
}

CheckResult check_symmetry_collapse() {
  CheckResult r{5, "symmetry and collapse", true, ""};
  const KapitzaParams p{0.1, 0.3, 0.05, 1.0};
  TruncationPolicy pol;
  pol.n_max = 2;
  const auto gm = effective_generator(kapitza_matrix(p), kSlow, pol);
  const auto gp = effective_generator(kapitza_psop(p), kSlow, pol);
  double u2 = 0.0;
  for (double t : {0.0, 0.7, 2.3})
    u2 = std::max({u2, norm_inf(gm.order_element(2, t)), norm_inf(gp.order_element(2, t))});

  std::mt19937 rng(2024);
  std::normal_distribution<double> n;
  ModelSpec<MatrixOp> m;
  const double freqs[] = {1.3, -0.7, 0.0};
  for (int l = 0; l < 3; ++l) {
    Eigen::MatrixXcd a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = 0.5 * cplx(n(rng), n(rng));
    m.ops.emplace_back(a);
    m.f.push_back(ExpPoly::harmonic(freqs[l]) + ExpPoly::monomial(0.2, 1, 0.0));
  }
  TruncationPolicy dpol;
  dpol.n_max = 4;
  dpol.coeff_floor = 0.0;
  const auto gd = effective_generator(m, WindowSpec::delta(), dpol);
  double collapse = 0.0;
  for (double t : {0.0, 1.3, 4.0})
    for (int k = 2; k <= 4; ++k) collapse = std::max(collapse, norm_inf(gd.order_element(k, t)));

  int bad = 0;
  for (int len = 1; len <= 5; ++len)
    for (const Word& w : all_words(3, len)) {
      const WordSum once = dynkin_expand(w);
      if (dynkin_apply(once) != once) ++bad;
    }
  r.pass = u2 <= 1e-12 && collapse <= 1e-10 && bad == 0;
  r.detail = "Kapitza U2 " + sci(u2) + " (tol 1e-12), delta-window U2..U4 " + sci(collapse) +
             " (tol 1e-10), non-idempotent words " + std::to_string(bad);
  return r;
}

CheckResult check_phase_space() {
  CheckResult r{8, "modulated pendulum trajectories", true, ""};
  PhaseSpaceSetup s;
  const PhaseSpaceRun run = run_phase_space(s);
  const EffectiveRun& e1 = run.effective.at(0);
  const EffectiveRun& e3 = run.effective.at(1);
  const bool ratio = e3.report.rms <= 0.5 * e1.report.rms;
  r.pass = ratio && e1.max_abs_theta > 0.1 && e3.max_abs_theta <= 0.1;
  r.detail = "rms order 1 " + sci(e1.report.rms) + ", order 3 " + sci(e3.report.rms) + " (ratio tol 0.5), max|theta| order 1 " +
             fmt("%.4f", e1.max_abs_theta) + ", order 3 " + fmt("%.4f", e3.max_abs_theta) + " (bound 0.1)";
  return r;
}

CheckResult check_modulated_forms() {
  CheckResult r{9, "modulated pendulum closed forms", true, ""};
  const double g2 = 0.02, tau = 0.4, beta = 0.05, lam = 0.3, a1 = 0.02, a2 = 0.01, nu = 20.0;
  const KapitzaParams p{std::sqrt(g2), lam, beta, nu};
  ModulationParams mod;
  mod.alpha1 = a1;
  mod.alpha2 = a2;
  TruncationPolicy pol;
  pol.n_max = 3;
  pol.grade_max = 1;
  const auto gen = effective_generator(modulated_kapitza(p, mod, tau).spec, WindowSpec::gaussian(tau), pol);
  const SplitResult s2 = split_hamiltonian_dissipator(gen.order_element(2, 0.0));
  const SplitResult s3 = split_hamiltonian_dissipator(gen.order_element(3, 0.0));

  const PhaseFn sn = PhaseFn::sin_theta(), cs = PhaseFn::cos_theta(), c2 = PhaseFn::cos_theta(2);
  const PhaseFn p1 = PhaseFn::monomial(1.0, 0, 1), p2 = p1 * p1, p3 = p2 * p1;
  const double dbar = a2 * tau * tau, ddot = a1, t4 = std::pow(tau, 4);
  const double c = g2 * tau * tau * nu * nu * ddot;
  const PhaseFn h2 = (sn * p1 - cs * cplx(beta * nu)) * cplx(c);
  const PhaseFn d2 = cs * p2 * cplx(-0.5 * c);
  const double k2 = lam * lam * nu * nu / 8 + dbar * lam * lam * nu * nu / 4 -
                    a2 * (lam * lam + g2 * g2 * std::pow(nu, 4) * t4 / 4);
  const PhaseFn h3 = (cs * p2 + sn * p1 * cplx(beta * nu)) * cplx(-g2 * a2 * nu * nu * t4) +
                     cs * cplx(a2 * beta * beta * g2 * std::pow(nu, 4) * t4) - c2 * cplx(k2);
  const PhaseFn d3 = (cs * p2 * cplx(beta * nu) + sn * p3 * cplx(2.0)) * cplx(a2 * g2 * nu * nu * t4 / 2);

  double worst = 0.0;
  std::string where = "none";
  int mismatched = 0;
  auto compare = [&](const std::string& label, const PhaseFn& got, const PhaseFn& want) {
    const double scale = std::max(got.max_abs(), want.max_abs());
    std::map<PhaseKey, std::pair<cplx, cplx>> keys;
    for (const auto& [k, v] : got.terms) keys[k].first = v;
    for (const auto& [k, v] : want.terms) keys[k].second = v;
    for (const auto& [k, pr] : keys) {
      if (std::abs(pr.first) <= 1e-12 * scale && std::abs(pr.second) == 0.0) continue;
      const double e = std::abs(pr.first - pr.second) / std::max(std::abs(pr.second), 1e-12 * scale);
      if (e > 1e-6) ++mismatched;
      if (e > worst) {
        worst = e;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s key (k=%d, a=%d): engine %.9g%+.9gi, expected %.9g%+.9gi",
                      label.c_str(), k.k, k.a, pr.first.real(), pr.first.imag(), pr.second.real(),
                      pr.second.imag());
        where = buf;
      }
    }
  };
  compare("H2", s2.h_eff, h2);
  compare("D2", s2.d_eff, d2);
  compare("H3", s3.h_eff, h3);
  compare("D3", s3.d_eff, d3);
  r.pass = worst <= 1e-6;
  r.detail = std::to_string(mismatched) + " mismatched coefficients, worst relative error " + sci(worst) +
             " at " + where + " (tol 1e-6)";
  return r;
}

CheckResult check_parametric() {
  CheckResult r{10, "parametric oscillator couplings", true, ""};
  const WindowSpec win = WindowSpec::gaussian(1.0);
  double pair_rem = 0.0, struct_err = 0.0, k2_err = 0.0;
  for (double dl : {0.01, 0.005, -0.005, -0.01}) {
    ParamOscParams pp;
    pp.eps = 0.05;
    pp.drive = 2.0 + dl;
    const auto m = parametric_oscillator(pp);
    MomentTable mt(m.f, win);
    mt.populate(2);
    const CumulantTable cum = compute_cumulants(mt, 2);
    for (Letter a : {0, 2, 4}) {
      const Letter b = a + 1;
      const std::map<Word, cplx> pair{{{a, b}, cum.u.at({a, b})(0.0)}, {{b, a}, cum.u.at({b, a})(0.0)}};
      const auto ls = dynkin_project(pair, m.ops);
      pair_rem = std::max(pair_rem, norm_inf(ls.remainder));
      if (a == 4) {
        const SplitResult s = split_hamiltonian_dissipator(ls.lie_part);
        auto it = s.h_eff.terms.find({0, 1});
        const double k2 = it == s.h_eff.terms.end() ? 0.0 : it->second.real();
        const double target = pp.eps * pp.eps * pp.omega0 * pp.omega0 * pp.delta() / 16.0;
        k2_err = std::max(k2_err, std::abs(k2 / target - 1.0));
      }
    }
    const auto ls = dynkin_project(std::map<Word, cplx>{{{4, 4}, cum.u.at({4, 4})(0.0)}}, m.ops);
    auto it = ls.remainder.terms.find({-4, 0, 2, 0});
    if (it == ls.remainder.terms.end() || it->second == 0.0) {
      struct_err = INFINITY;
      continue;
    }
    const cplx c = it->second;
    PsOp expect;
    expect.add({-4, 0, 2, 0}, c);
    expect.add({-4, 2, 0, 2}, -4.0 * c);
    expect.add({-4, 1, 1, 1}, cplx(0.0, 4.0) * c);
    expect.add({-4, 0, 1, 0}, cplx(0.0, -2.0) * c);
    struct_err = std::max(struct_err, (norm_inf(sub(ls.remainder, expect)) + norm_inf(ls.lie_part)) / std::abs(c));
  }
  r.pass = pair_rem <= 1e-12 && struct_err <= 1e-12 && k2_err <= 0.05;
  r.detail = "pair remainder " + sci(pair_rem) + " (tol 1e-12), I/Q structure defect " + sci(struct_err) +
             " (tol 1e-12), K2 relative error " + sci(k2_err) + " (tol 5e-2)";
  return r;
}

std::string golden_dump() {
  TruncationPolicy pol;
  pol.n_max = 3;
  const auto g = effective_generator(kapitza_psop({0.1, 0.2, 0.05, 1.0}), kSlow, pol);
  const PsOp u3 = pruned(g.order_element(3, 0.0), 1e-14);
  std::ostringstream os;
  char buf[160];
  for (const auto& [k, c] : u3.terms) {
    std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g %.17g\n", k.k, k.a, k.dth, k.dp, c.real(), c.imag());
    os << buf;
  }
  return os.str();
}

CheckResult check_golden(const std::string& path) {
  const std::string file = path.empty() ? std::string(TCG_GOLDEN_DIR) + "/kapitza_order3.txt" : path;
  CheckResult r{0, "golden file " + file, false, ""};
  std::ifstream in(file);
  if (!in) {
    r.detail = "cannot read file";
    return r;
  }
  auto parse = [](std::istream& is, std::map<PsKey, cplx>& out) {
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      PsKey k;
      double re, im;
      if (!(ls >> k.k >> k.a >> k.dth >> k.dp >> re >> im)) return false;
      out[k] = {re, im};
    }
    return true;
  };
  std::map<PsKey, cplx> stored, fresh;
  std::istringstream now(golden_dump());
  parse(now, fresh);
  if (!parse(in, stored)) {
    r.detail = "malformed line";
    return r;
  }
  double worst = 0.0;
  int missing = 0;
  for (const auto& [k, c] : fresh) {
    auto it = stored.find(k);
    if (it == stored.end()) ++missing;
    else worst = std::max(worst, std::abs(it->second - c));
  }
  for (const auto& [k, c] : stored)
    if (!fresh.count(k)) ++missing;
  r.pass = missing == 0 && worst <= 1e-12;
  r.detail = std::to_string(fresh.size()) + " terms, " + std::to_string(missing) + " unmatched, max deviation " +
             sci(worst) + " (tol 1e-12)";
  return r;
}

}  // namespace tcg::cli
