#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcg/analysis.hpp"
#include "tcg/models.hpp"

#include <random>

using namespace tcg;

namespace {

const WindowSpec kSlow = WindowSpec::gaussian(8.0);

GeneratorSeries<MatrixOp> matrix_gen(const KapitzaParams& p, int n) {
  TruncationPolicy pol;
  pol.n_max = n;
  return effective_generator(kapitza_matrix(p), kSlow, pol);
}

GeneratorSeries<PsOp> psop_gen(const KapitzaParams& p, int n) {
  TruncationPolicy pol;
  pol.n_max = n;
  return effective_generator(kapitza_psop(p), kSlow, pol);
}

cplx coeff(const PhaseFn& f, int k, int a) {
  auto it = f.terms.find({k, a});
  return it == f.terms.end() ? cplx(0.0) : it->second;
}

// Coefficient pair of c sin(theta) expressed in the e^{ik theta} basis.
cplx sin_coeff(double c) { return c / cplx(0.0, 2.0); }

}  // namespace

TEST_CASE("kapitza second order vanishes") {
  const KapitzaParams p{0.1, 0.3, 0.05, 1.0};
  const auto gm = matrix_gen(p, 2);
  const auto gp = psop_gen(p, 2);
  for (double t : {0.0, 0.7, 2.3}) {
    CHECK(norm_inf(gm.order_element(2, t)) <= 1e-12);
    CHECK(norm_inf(gp.order_element(2, t)) <= 1e-12);
  }
}

TEST_CASE("kapitza first order jacobian") {
  const KapitzaParams p{0.1, 0.3, 0.05, 2.0};
  const auto j = jacobian_at(matrix_gen(p, 1), 0.0);
  CHECK(j(0, 0) == doctest::Approx(0.0));
  CHECK(j(0, 1) == doctest::Approx(2.0));
  CHECK(j(1, 0) == doctest::Approx(0.01 * 2.0));
  CHECK(j(1, 1) == doctest::Approx(-0.05 * 2.0));
  const auto jp = jacobian_at(psop_gen(p, 1), 0.0, 0.0, 0.0);
  CHECK((jp - j).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("undriven matrix model") {
  const KapitzaParams p{0.2, 0.0, 0.1, 3.0};
  const MatrixOp a = kapitza_matrix(p).at(0.4);
  CHECK(a.m.trace().real() == doctest::Approx(-0.1 * 3.0));
  CHECK(a.m.determinant().real() == doctest::Approx(-0.04 * 9.0));
  const auto j3 = jacobian_at(matrix_gen(p, 3), 0.0);
  const auto j1 = jacobian_at(matrix_gen(p, 1), 0.0);
  CHECK((j3 - j1).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("backend consistency after linearization") {
  const KapitzaParams p{0.1, 0.25, 0.05, 1.0};
  for (int n : {3, 5}) {
    const auto jm = jacobian_at(matrix_gen(p, n), 0.0);
    const auto jp = jacobian_at(psop_gen(p, n), 0.0, 0.0, 0.0);
    CAPTURE(n);
    CHECK((jm - jp).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("kapitza third order operator") {
  const double l = 0.2, g = 0.1;
  for (double b : {0.0, 0.05}) {
    const KapitzaParams p{g, l, b, 1.0};
    const PsOp u3 = psop_gen(p, 3).order_element(3, 0.0);
    // -(l^2/2) [ 1/2 sin 2th d_p + sin th (p cos th + b sin th) d_p^2 - sin^2 th d_th d_p ]
    const PhaseFn s = PhaseFn::sin_theta(), c = PhaseFn::cos_theta();
    const PhaseFn p1 = PhaseFn::monomial(1.0, 0, 1);
    PsOp expect = PsOp::from_fn(PhaseFn::sin_theta(2) * cplx(0.5), 0, 1);
    expect = add(expect, PsOp::from_fn(s * (p1 * c + s * cplx(b)), 0, 2));
    expect = add(expect, PsOp::from_fn(s * s * cplx(-1.0), 1, 1));
    expect = scale(expect, -0.5 * l * l);
    CAPTURE(b);
    CHECK(norm_inf(sub(u3, expect)) <= 1e-12);

    const VectorField v = vector_field(u3);
    const double th = 0.3, pp = 0.1;
    CHECK(std::abs(v.f_theta(th, pp)) <= 1e-14);
    CHECK(v.f_p(th, pp).real() == doctest::Approx(-0.25 * l * l * std::sin(2 * th)).epsilon(1e-12));
  }
}

TEST_CASE("third order linearization") {
  const KapitzaParams p{0.1, 0.2, 0.0, 1.0};
  const auto j = jacobian_at(matrix_gen(p, 3), 0.0);
  CHECK(j(0, 1) == doctest::Approx(1.0));
  CHECK(j(1, 0) == doctest::Approx(0.01 - 0.02));
  CHECK(std::abs(j(1, 1)) <= 1e-12);
  CHECK(j.determinant() > 0.0);
  const auto j2 = jacobian_at(matrix_gen({0.1, 0.1, 0.0, 1.0}, 3), 0.0);
  CHECK(j2.determinant() < 0.0);
}

TEST_CASE("reality of every model") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> t(-10.0, 10.0);
  const KapitzaParams p{0.1, 0.3, 0.05, 2.0};
  ModulationParams poly;
  poly.alpha1 = 0.02;
  poly.alpha2 = 0.01;
  ModulationParams per;
  per.kind = ModulationKind::periodic;
  per.amplitude = 0.2;
  per.period = 5.0 / (2.0 * M_PI);
  const auto mk1 = modulated_kapitza(p, poly, 0.4).spec;
  const auto mk2 = modulated_kapitza(p, per, 0.4).spec;
  const auto po = parametric_oscillator({0.1, 1.0, 2.3});
  for (int i = 0; i < 20; ++i) {
    const double s = t(rng);
    CHECK(reality_defect(kapitza_psop(p), s) <= 1e-12);
    CHECK(reality_defect(kapitza_matrix(p), s) <= 1e-12);
    CHECK(reality_defect(mk1, s) <= 1e-12);
    CHECK(reality_defect(mk2, s) <= 1e-12);
    CHECK(reality_defect(ct_frame(1, p, 0.3), s) <= 1e-12);
    CHECK(reality_defect(ct_frame(2, p, 0.3), s) <= 1e-12);
    CHECK(reality_defect(po, s) <= 1e-12);
  }
}

TEST_CASE("parametric letters are conjugate pairs") {
  const auto hs = parametric_hamiltonians({0.1, 1.3, 2.5});
  for (std::size_t i = 0; i < hs.size(); i += 2) {
    for (const auto& [k, c] : hs[i].terms) {
      auto it = hs[i + 1].terms.find({-k.k, k.a});
      REQUIRE(it != hs[i + 1].terms.end());
      CHECK(std::abs(it->second - std::conj(c)) <= 1e-15);
    }
  }
}

TEST_CASE("rotating frame first-order matrices") {
  for (const KapitzaParams& p :
       {KapitzaParams{0.1, 0.3, 0.05, 1.0}, KapitzaParams{0.2, 0.45, 0.1, 2.0}}) {
    const double g2 = p.gamma * p.gamma, b = p.beta, l = p.lambda, nu = p.nu;
    const double amp = 0.7;
    TruncationPolicy pol;
    pol.n_max = 1;
    for (int frame : {1, 2}) {
      const auto gen = effective_generator(ct_frame(frame, p, amp), kSlow, pol);
      const Eigen::MatrixXcd a = gen.evaluate(0.0).m;
      CHECK(a.imag().cwiseAbs().maxCoeff() <= 1e-12);
      const Eigen::Matrix2d m = -a.real().topLeftCorner(2, 2);
      const Eigen::Vector2d z0 = -a.real().topLeftCorner(2, 2).inverse() * a.real().block(0, 2, 2, 1);
      Eigen::Matrix2d em;
      Eigen::Vector2d ez;
      if (frame == 1) {
        const double c = (9 + 4 * g2) * nu / 12;
        em << 0.5 * b * nu, c, -c, 0.5 * b * nu;
        const double s = 2 * l * amp / ((9 + 4 * g2) * (9 + 4 * g2) + 36 * b * b);
        ez << s * (9 + 4 * g2), -s * 6 * b;
      } else {
        em << 0.5 * b * nu, (1 + 2 * l + 4 * g2) * nu / 4, -(1 - 2 * l + 4 * g2) * nu / 4,
            0.5 * b * nu;
        const double s = 2 * l * amp / ((1 + 4 * g2) * (1 + 4 * g2) - 4 * l * l + 4 * b * b);
        ez << s * (1 + 2 * l + 4 * g2), -s * 2 * b;
      }
      CAPTURE(frame);
      CHECK((m - em).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((z0 - ez).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(a.row(2).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("modulated pendulum low orders") {
  const KapitzaParams p{std::sqrt(0.02), 0.3, 0.05, 20.0};
  ModulationParams mod;
  mod.alpha1 = 0.02;
  mod.alpha2 = 0.01;
  const double tau = 0.4;
  const auto mm = modulated_kapitza(p, mod, tau);
  CHECK(mm.warnings.empty());
  TruncationPolicy pol;
  pol.n_max = 2;
  pol.grade_max = 1;
  const auto gen = effective_generator(mm.spec, WindowSpec::gaussian(tau), pol);

  const double g2 = 0.02, nu = 20.0, beta = 0.05;
  const double dbar = mod.alpha2 * tau * tau;
  const auto s1 = split_hamiltonian_dissipator(gen.order_element(1, 0.0));
  CHECK(coeff(s1.h_eff, 0, 2).real() == doctest::Approx(0.5 - dbar));
  CHECK(coeff(s1.h_eff, 1, 0).real() == doctest::Approx(0.5 * g2 * nu * nu * (1 + dbar)));
  CHECK(coeff(s1.d_eff, 0, 2).real() == doctest::Approx(-0.5 * beta * nu));

  const auto s2 = split_hamiltonian_dissipator(gen.order_element(2, 0.0));
  const double c = g2 * tau * tau * nu * nu * mod.alpha1;
  CHECK(std::abs(coeff(s2.h_eff, 1, 1) - sin_coeff(c)) <= 1e-12);
  CHECK(std::abs(coeff(s2.h_eff, 1, 0) - (-0.5 * c * beta * nu)) <= 1e-12);
  CHECK(std::abs(coeff(s2.d_eff, 1, 2) - (-0.25 * c)) <= 1e-12);
  CHECK(std::abs(coeff(s2.h_eff, 0, 2)) <= 1e-12);
}

TEST_CASE("modulation window warnings") {
  const KapitzaParams p{0.1, 0.3, 0.05, 20.0};
  ModulationParams mod;
  mod.alpha1 = 5.0;
  CHECK_FALSE(modulated_kapitza(p, mod, 0.4).warnings.empty());
  CHECK_FALSE(modulated_kapitza(p, ModulationParams{}, 0.01).warnings.empty());
  ModulationParams per;
  per.kind = ModulationKind::periodic;
  per.amplitude = 0.2;
  per.period = 5.0 / (2.0 * M_PI);
  CHECK(modulated_kapitza(p, per, 0.4).warnings.empty());
  const ExpPoly d = modulation_function(per);
  CHECK(std::abs(d(0.3) - 0.2 * std::sin(0.3 / per.period)) <= 1e-14);
}

TEST_CASE("parametric oscillator near resonance") {
  ParamOscParams pp;
  pp.eps = 0.05;
  pp.drive = 2.0 + 0.01;
  const auto full = parametric_oscillator(pp);
  ModelSpec<PsOp> m;
  m.f = {full.f[4], full.f[5]};
  m.ops = {full.ops[4], full.ops[5]};
  const WindowSpec win = WindowSpec::gaussian(1.0);
  MomentTable mt(m.f, win);
  mt.populate(2);
  const auto cum = compute_cumulants(mt, 2);
  const double dl = pp.delta();

  SUBCASE("first order is the averaged resonant term") {
    const double t = 0.8;
    const auto s = split_hamiltonian_dissipator(
        add(scale(m.ops[0], cum.u.at({0})(t)), scale(m.ops[1], cum.u.at({1})(t))));
    const double w = std::exp(-0.5 * dl * dl);
    const double j = 1.7, th = 0.4;
    const double k1 = 0.25 * pp.eps * pp.omega0 * j *
                      (std::cos(2 * th) * std::cos(dl * t) - std::sin(2 * th) * std::sin(dl * t));
    CHECK(s.h_eff(th, j).real() == doctest::Approx(w * k1).epsilon(1e-12));
  }
  SUBCASE("conjugate pair gives a frequency shift") {
    const std::map<Word, cplx> pair{{{0, 1}, cum.u.at({0, 1})(0.0)},
                                    {{1, 0}, cum.u.at({1, 0})(0.0)}};
    const auto ls = dynkin_project(pair, m.ops);
    CHECK(norm_inf(ls.remainder) <= 1e-12);
    const auto s = split_hamiltonian_dissipator(ls.lie_part);
    const double k2 = coeff(s.h_eff, 0, 1).real();
    const double target = pp.eps * pp.eps * pp.omega0 * pp.omega0 * dl / 16.0;
    CHECK(std::abs(k2 / target - 1.0) <= 0.05);
  }
  SUBCASE("repeated letter remainder has the I + iQ structure") {
    const auto ls = dynkin_project(std::map<Word, cplx>{{{0, 0}, cum.u.at({0, 0})(0.0)}}, m.ops);
    CHECK(norm_inf(ls.lie_part) <= 1e-15);
    const cplx c = ls.remainder.terms.at({-4, 0, 2, 0});
    PsOp expect;
    expect.add({-4, 0, 2, 0}, c);
    expect.add({-4, 2, 0, 2}, -4.0 * c);
    expect.add({-4, 1, 1, 1}, cplx(0.0, 4.0) * c);
    expect.add({-4, 0, 1, 0}, cplx(0.0, -2.0) * c);
    CHECK(norm_inf(sub(ls.remainder, expect)) <= 1e-12 * std::abs(c));
  }
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(kapitza_psop({0.0, 0.1, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(kapitza_matrix({0.1, 0.1, -1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(ct_frame(3, {}, 0.1), DomainError);
  CHECK_THROWS_AS(parametric_oscillator({-1.0, 1.0, 2.0}), DomainError);
}
