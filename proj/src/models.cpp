#include "tcg/models.hpp"

#include <cmath>
#include <map>

namespace tcg {

void validate(const KapitzaParams& p) {
  if (!(p.gamma > 0.0)) throw DomainError("kapitza: gamma must be positive");
  if (!(p.beta >= 0.0)) throw DomainError("kapitza: beta must be nonnegative");
  if (!(p.lambda >= 0.0)) throw DomainError("kapitza: lambda must be nonnegative");
  if (!(p.nu > 0.0)) throw DomainError("kapitza: nu must be positive");
}

ModelSpec<PsOp> kapitza_psop(const KapitzaParams& p) {
  validate(p);
  const double nu = p.nu;
  const double g2 = p.gamma * p.gamma;
  PsOp l0 = PsOp::from_fn(PhaseFn::monomial(nu, 0, 1), 1, 0);
  l0 = add(l0, PsOp::from_fn(PhaseFn::sin_theta() * cplx(nu * g2) -
                                 PhaseFn::monomial(nu * p.beta, 0, 1),
                             0, 1));
  const PsOp ld = PsOp::from_fn(PhaseFn::sin_theta() * cplx(-0.5 * nu * p.lambda), 0, 1);
  ModelSpec<PsOp> m;
  m.name = "kapitza";
  m.f = {ExpPoly::constant(1.0), ExpPoly::harmonic(-nu), ExpPoly::harmonic(nu)};
  m.ops = {l0, ld, ld};
  m.letter_names = {"L0", "L+nu", "L-nu"};
  return m;
}

ModelSpec<MatrixOp> kapitza_matrix(const KapitzaParams& p) {
  validate(p);
  const double nu = p.nu;
  Eigen::MatrixXcd a0(2, 2), ad(2, 2);
  a0 << 0.0, nu, nu * p.gamma * p.gamma, -nu * p.beta;
  ad << 0.0, 0.0, -0.5 * nu * p.lambda, 0.0;
  ModelSpec<MatrixOp> m;
  m.name = "kapitza-linear";
  m.f = {ExpPoly::constant(1.0), ExpPoly::harmonic(-nu), ExpPoly::harmonic(nu)};
  m.ops = {MatrixOp(a0), MatrixOp(ad), MatrixOp(ad)};
  m.letter_names = {"L0", "L+nu", "L-nu"};
  return m;
}

ExpPoly modulation_function(const ModulationParams& m) {
  if (m.kind == ModulationKind::polynomial)
    return ExpPoly::monomial(m.alpha1, 1, 0.0) + ExpPoly::monomial(m.alpha2, 2, 0.0);
  if (!(m.period > 0.0)) throw DomainError("modulation: period must be positive");
  const double w = 1.0 / m.period;
  // A sin(w t) = A (e^{i w t} - e^{-i w t}) / 2i
  return ExpPoly::harmonic(-w, m.amplitude / cplx(0.0, 2.0)) +
         ExpPoly::harmonic(w, -m.amplitude / cplx(0.0, 2.0));
}

ModulatedModel modulated_kapitza(const KapitzaParams& p, const ModulationParams& mod, double tau) {
  validate(p);
  ModulatedModel out;
  const double nu = p.nu;
  const double g = p.gamma * p.gamma * nu * nu;
  const PhaseFn kinetic = PhaseFn::monomial(0.5, 0, 2);
  const PhaseFn potential = PhaseFn::cos_theta() * cplx(g);
  const PhaseFn dissip = PhaseFn::monomial(-0.5 * p.beta * nu, 0, 2);
  const PsOp l0 = add(PsOp::poisson(kinetic + potential), PsOp::double_bracket(dissip));
  const PsOp drive = PsOp::poisson(PhaseFn::cos_theta() * cplx(0.5 * p.lambda * nu * nu));
  const PsOp ldelta = PsOp::poisson(PhaseFn::monomial(-1.0, 0, 2) + potential);
  const ExpPoly delta = modulation_function(mod);

  ModelSpec<PsOp>& m = out.spec;
  m.name = "modulated-kapitza";
  m.f = {ExpPoly::constant(1.0), ExpPoly::harmonic(-nu), ExpPoly::harmonic(nu), delta,
         delta * ExpPoly::harmonic(-nu), delta * ExpPoly::harmonic(nu)};
  m.ops = {l0, drive, drive, ldelta, drive, drive};
  m.letter_names = {"L0", "drive+", "drive-", "delta", "delta*drive+", "delta*drive-"};
  m.grades = {0, 0, 0, 1, 1, 1};

  if (!(tau * nu > 1.0))
    out.warnings.push_back("averaging scale tau is not long compared to 1/nu");
  if (mod.kind == ModulationKind::polynomial) {
    if (mod.alpha1 != 0.0 && !(tau * std::abs(mod.alpha1) < 1.0))
      out.warnings.push_back("tau is not short compared to 1/alpha1");
    if (mod.alpha2 != 0.0 && !(tau * std::sqrt(std::abs(mod.alpha2)) < 1.0))
      out.warnings.push_back("tau is not short compared to 1/sqrt(alpha2)");
  } else {
    if (!(tau < mod.period)) out.warnings.push_back("tau is not short compared to the modulation period");
    if (!(std::abs(mod.amplitude) < 1.0)) out.warnings.push_back("modulation amplitude is not small");
  }
  return out;
}

// ----------------------------------------------------------- CT frames

namespace {

// Quadratic polynomial in (theta, P) with complex coefficients.
struct Quad {
  cplx tt, pp, tp, t, p;

  Quad operator*(cplx s) const { return {tt * s, pp * s, tp * s, t * s, p * s}; }
  Quad& operator+=(const Quad& o) {
    tt += o.tt;
    pp += o.pp;
    tp += o.tp;
    t += o.t;
    p += o.p;
    return *this;
  }
};

using Series = std::map<int, Quad>;

void add_cos(Series& s, int k, const Quad& q) {
  if (k == 0) {
    s[0] += q;
    return;
  }
  s[k] += q * 0.5;
  s[-k] += q * 0.5;
}

void add_sin(Series& s, int k, const Quad& q) {
  s[k] += q * (1.0 / cplx(0.0, 2.0));
  s[-k] += q * (-1.0 / cplx(0.0, 2.0));
}

// Builds the Fourier series of the frame Hamiltonian and dissipator; each key
// k multiplies exp(i k nu t).
void frame_series(int frame, const KapitzaParams& prm, double a, Series& h, Series& d) {
  const double g2 = prm.gamma * prm.gamma;
  const double l = prm.lambda;
  const double nu = prm.nu;
  const double n2 = nu * nu;
  const double b = prm.beta;
  if (frame == 1) {
    add_cos(h, 0, {-n2 / 16 * (9 + 4 * g2), -(9 + 4 * g2) / 36, 0.0, n2 / 16 * 4 * a * l, 0.0});
    add_cos(h, 1, {n2 / 16 * 4 * l, l / 9, 0.0, -n2 / 16 * 2 * a * (1 + 4 * g2 - 2 * l), 0.0});
    add_cos(h, 2, {n2 / 8 * l, -l / 18, 0.0, -n2 / 8 * a * (1 - 2 * l + 4 * g2), 0.0});
    add_cos(h, 3, {-n2 / 16 * (9 + 4 * g2), (9 + 4 * g2) / 36, 0.0, n2 / 16 * 4 * a * l, 0.0});
    add_cos(h, 4, {n2 * l / 8, -l / 18, 0.0, 0.0, 0.0});
    add_sin(h, 1, {0.0, 0.0, 0.0, 0.0, -a * nu / 12 * (1 + 4 * g2 - 2 * l)});
    add_sin(h, 2, {0.0, 0.0, l * nu / 6, 0.0, -(1 + 4 * g2 - 2 * l) * nu / 12 * a});
    add_sin(h, 3, {0.0, 0.0, -nu / 12 * (9 + 4 * g2), 0.0, nu / 12 * 2 * a * l});
    add_sin(h, 4, {0.0, 0.0, l * nu / 6, 0.0, 0.0});

    add_cos(d, 0, {-b * nu / 16 * 9 * n2, -b * nu / 16 * 4, 0.0, 0.0, 0.0});
    add_cos(d, 1, {0.0, 0.0, 0.0, -b * nu * n2 * a / 16 * 6, 0.0});
    add_sin(d, 1, {0.0, 0.0, 0.0, 0.0, -b * n2 * a / 4});
    add_cos(d, 2, {0.0, 0.0, 0.0, 3 * b * nu * n2 * a / 8, 0.0});
    add_sin(d, 2, {0.0, 0.0, 0.0, 0.0, b * n2 * a / 4});
    add_cos(d, 3, {b * nu / 16 * 9 * n2, -b * nu / 16 * 4, 0.0, 0.0, 0.0});
    add_sin(d, 3, {0.0, 0.0, 3 * b * n2 / 4, 0.0, 0.0});
  } else {
    add_cos(h, 0, {-n2 / 16 * (1 + 4 * g2 - 2 * l), -(1 + 4 * g2 + 2 * l) / 4, 0.0,
                   n2 / 16 * 4 * a * l, 0.0});
    add_cos(h, 1, {-n2 / 16 * (1 + 4 * g2 - 4 * l), (1 + 4 * g2 + 4 * l) / 4, 0.0,
                   -n2 / 16 * 2 * a * (9 + 4 * g2 - 2 * l), 0.0});
    add_cos(h, 2, {n2 / 8 * l, -l / 2, 0.0, -n2 / 8 * a * (9 - 2 * l + 4 * g2), 0.0});
    add_cos(h, 3, {0.0, 0.0, 0.0, n2 / 16 * a * 4 * l, 0.0});
    add_sin(h, 1, {0.0, 0.0, -nu / 4 * (1 + 4 * g2), 0.0, nu / 4 * a * (9 + 4 * g2 + 2 * l)});
    add_sin(h, 2, {0.0, 0.0, nu / 4 * 2 * l, 0.0, -nu / 4 * (9 + 4 * g2 + 2 * l) * a});
    add_sin(h, 3, {0.0, 0.0, 0.0, 0.0, l * nu / 2 * a});

    add_cos(d, 0, {-b * nu / 16 * n2, -b * nu / 16 * 4, 0.0, 0.0, 0.0});
    // Sign of this harmonic follows from transforming -beta nu p^2 / 2 directly.
    add_cos(d, 1, {b * nu / 16 * n2, -b * nu / 16 * 4, 0.0, -b * nu / 16 * n2 * 6 * a, 0.0});
    add_cos(d, 2, {0.0, 0.0, 0.0, 3 * b * nu * n2 / 8 * a, 0.0});
    add_sin(d, 1, {0.0, 0.0, b * n2 / 4, 0.0, b * n2 / 4 * 3 * a});
    add_sin(d, 2, {0.0, 0.0, 0.0, 0.0, 3 * b * n2 / 4 * a});
  }
}

}  // namespace

ModelSpec<MatrixOp> ct_frame(int frame, const KapitzaParams& p, double amplitude) {
  validate(p);
  if (frame != 1 && frame != 2) throw DomainError("ct_frame: frame must be 1 or 2");
  const double nu = p.nu;
  // Rotation rate and scale of the dimensionless frame momentum, P = s p~.
  const double omega = frame == 1 ? 1.5 * nu : 0.5 * nu;
  const double s = omega;
  const int m2 = frame == 1 ? 3 : 1;  // 2 omega in units of nu
  Series h, d;
  frame_series(frame, p, amplitude, h, d);

  // Metric of the transformed double bracket, v v^T / s^2 with
  // v = (-sin wt, cos wt), split into harmonics of nu.
  std::map<int, Eigen::Matrix2cd> metric;
  const double inv = 1.0 / (2.0 * s * s);
  Eigen::Matrix2cd c2, s2;
  c2 << -inv, 0.0, 0.0, inv;
  s2 << 0.0, -inv, -inv, 0.0;
  metric[0] = Eigen::Matrix2cd::Identity() * inv;
  metric[m2] = 0.5 * c2 + s2 / cplx(0.0, 2.0);
  metric[-m2] = 0.5 * c2 - s2 / cplx(0.0, 2.0);

  std::map<int, Eigen::MatrixXcd> gen;
  auto slot = [&](int k) -> Eigen::MatrixXcd& {
    auto it = gen.find(k);
    if (it == gen.end()) it = gen.emplace(k, Eigen::MatrixXcd::Zero(3, 3)).first;
    return it->second;
  };
  for (const auto& [k, q] : h) {
    Eigen::MatrixXcd& a = slot(k);
    a(0, 0) += q.tp;
    a(0, 1) += 2.0 * q.pp * s;
    a(0, 2) += q.p;
    a(1, 0) += -2.0 * q.tt / s;
    a(1, 1) += -q.tp;
    a(1, 2) += -q.t / s;
  }
  for (const auto& [k, q] : d) {
    // Gradient of D in (theta, p~) as affine rows.
    Eigen::Matrix<cplx, 2, 3> grad;
    grad << 2.0 * q.tt, q.tp * s, q.t, s * q.tp, 2.0 * q.pp * s * s, s * q.p;
    for (const auto& [j, gm] : metric) {
      Eigen::MatrixXcd& a = slot(k + j);
      a.topRows(2) += gm * grad;
    }
  }

  ModelSpec<MatrixOp> m;
  m.name = frame == 1 ? "ct1" : "ct2";
  for (const auto& [k, a] : gen) {
    if (a.cwiseAbs().maxCoeff() == 0.0) continue;
    m.f.push_back(ExpPoly::harmonic(-k * nu));
    m.ops.emplace_back(a);
    m.letter_names.push_back("k=" + std::to_string(k));
  }
  return m;
}

// ------------------------------------------------- parametric oscillator

std::vector<PhaseFn> parametric_hamiltonians(const ParamOscParams& p) {
  const double e = p.eps * p.omega0;
  const PhaseFn hw = PhaseFn::monomial(e / 4.0, 0, 1);
  const PhaseFn hm = PhaseFn::monomial(e / 8.0, -2, 1);
  const PhaseFn hp = PhaseFn::monomial(e / 8.0, 2, 1);
  return {hw, hw, hm, hp, hm, hp};
}

ModelSpec<PsOp> parametric_oscillator(const ParamOscParams& p) {
  if (!(p.eps >= 0.0)) throw DomainError("parametric oscillator: eps must be nonnegative");
  if (!(p.omega0 > 0.0)) throw DomainError("parametric oscillator: omega0 must be positive");
  const auto hs = parametric_hamiltonians(p);
  const double freqs[] = {p.drive, -p.drive, p.sigma(), -p.sigma(), p.delta(), -p.delta()};
  ModelSpec<PsOp> m;
  m.name = "parametric-oscillator";
  const char* names[] = {"+Omega", "-Omega", "+Sigma", "-Sigma", "+Delta", "-Delta"};
  for (int i = 0; i < 6; ++i) {
    m.f.push_back(ExpPoly::harmonic(freqs[i]));
    m.ops.push_back(PsOp::poisson(hs[static_cast<std::size_t>(i)]));
    m.letter_names.emplace_back(names[i]);
  }
  return m;
}

double reality_defect(const ModelSpec<PsOp>& m, double t) { return m.at(t).reality_defect(); }

double reality_defect(const ModelSpec<MatrixOp>& m, double t) {
  return m.at(t).m.imag().cwiseAbs().maxCoeff();
}

}  // namespace tcg
