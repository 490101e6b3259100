#include "tcg/algebra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

namespace tcg {

// ---------------------------------------------------------------- matrices

namespace {

void check_dims(const MatrixOp& a, const MatrixOp& b) {
  if (a.m.rows() != b.m.rows() || a.m.cols() != b.m.cols() || a.m.rows() != a.m.cols())
    throw DimensionMismatch("MatrixOp dimension mismatch");
}

}  // namespace

MatrixOp add(const MatrixOp& a, const MatrixOp& b) {
  check_dims(a, b);
  return MatrixOp(a.m + b.m);
}

MatrixOp sub(const MatrixOp& a, const MatrixOp& b) {
  check_dims(a, b);
  return MatrixOp(a.m - b.m);
}

MatrixOp scale(const MatrixOp& a, cplx s) { return MatrixOp(a.m * s); }

MatrixOp compose(const MatrixOp& a, const MatrixOp& b) {
  check_dims(a, b);
  return MatrixOp(b.m * a.m);
}

MatrixOp zero_like(const MatrixOp& a) { return MatrixOp::zero(a.dim()); }

double norm_inf(const MatrixOp& a) {
  return a.m.size() == 0 ? 0.0 : a.m.cwiseAbs().maxCoeff();
}

// ------------------------------------------------- phase-space functions

PhaseFn PhaseFn::constant(cplx c) { return monomial(c, 0, 0); }

PhaseFn PhaseFn::monomial(cplx c, int k, int a) {
  PhaseFn f;
  f.add(k, a, c);
  return f;
}

PhaseFn PhaseFn::sin_theta(int m) {
  PhaseFn f;
  f.add(m, 0, cplx(0.0, -0.5));
  f.add(-m, 0, cplx(0.0, 0.5));
  return f;
}

PhaseFn PhaseFn::cos_theta(int m) {
  PhaseFn f;
  f.add(m, 0, 0.5);
  f.add(-m, 0, 0.5);
  return f;
}

void PhaseFn::add(int k, int a, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms.try_emplace(PhaseKey{k, a}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms.erase(it);
  }
}

PhaseFn& PhaseFn::operator+=(const PhaseFn& o) {
  for (const auto& [key, c] : o.terms) add(key.k, key.a, c);
  return *this;
}

PhaseFn& PhaseFn::operator-=(const PhaseFn& o) {
  for (const auto& [key, c] : o.terms) add(key.k, key.a, -c);
  return *this;
}

PhaseFn& PhaseFn::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms.clear();
    return *this;
  }
  for (auto& [key, c] : terms) c *= s;
  return *this;
}

cplx PhaseFn::operator()(double theta, double p) const {
  cplx acc = 0.0;
  for (const auto& [key, c] : terms)
    acc += c * std::exp(cplx(0.0, key.k * theta)) * std::pow(p, key.a);
  return acc;
}

cplx PhaseFn::d_theta_at(double theta, double p) const { return d_theta(*this)(theta, p); }

cplx PhaseFn::d_p_at(double theta, double p) const { return d_p(*this)(theta, p); }

bool PhaseFn::is_zero(double tol) const { return max_abs() <= tol; }

double PhaseFn::max_abs() const {
  double m = 0.0;
  for (const auto& [key, c] : terms) m = std::max(m, std::abs(c));
  return m;
}

double PhaseFn::reality_defect() const {
  double m = 0.0;
  for (const auto& [key, c] : terms) {
    auto it = terms.find(PhaseKey{-key.k, key.a});
    const cplx partner = it == terms.end() ? cplx(0.0) : it->second;
    m = std::max(m, std::abs(c - std::conj(partner)));
  }
  return m;
}

PhaseFn operator+(PhaseFn a, const PhaseFn& b) { return a += b; }
PhaseFn operator-(PhaseFn a, const PhaseFn& b) { return a -= b; }
PhaseFn operator*(PhaseFn a, cplx s) { return a *= s; }
PhaseFn operator*(cplx s, PhaseFn a) { return a *= s; }

PhaseFn operator*(const PhaseFn& a, const PhaseFn& b) {
  PhaseFn out;
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) out.add(ka.k + kb.k, ka.a + kb.a, ca * cb);
  return out;
}

PhaseFn d_theta(const PhaseFn& f) {
  PhaseFn out;
  for (const auto& [key, c] : f.terms)
    if (key.k != 0) out.add(key.k, key.a, c * cplx(0.0, key.k));
  return out;
}

PhaseFn d_p(const PhaseFn& f) {
  PhaseFn out;
  for (const auto& [key, c] : f.terms)
    if (key.a > 0) out.add(key.k, key.a - 1, c * double(key.a));
  return out;
}

PhaseFn integrate_p(const PhaseFn& f) {
  PhaseFn out;
  for (const auto& [key, c] : f.terms) out.add(key.k, key.a + 1, c / double(key.a + 1));
  return out;
}

PhaseFn integrate_theta(const PhaseFn& f, PhaseFn* rest) {
  PhaseFn out;
  for (const auto& [key, c] : f.terms) {
    if (key.k == 0) {
      if (rest) rest->add(key.k, key.a, c);
      continue;
    }
    out.add(key.k, key.a, c / cplx(0.0, key.k));
  }
  return out;
}

PhaseFn pruned(const PhaseFn& f, double tol) {
  PhaseFn out;
  for (const auto& [key, c] : f.terms)
    if (std::abs(c) > tol) out.terms.emplace(key, c);
  return out;
}

// ----------------------------------------------------- differential ops

namespace {

PsLimits g_limits;
std::atomic<long long> g_dropped{0};

double falling(int n, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= double(n - i);
  return r;
}

}  // namespace

PsLimits& ps_limits() { return g_limits; }
long long ps_dropped_terms() { return g_dropped.load(); }
void ps_reset_dropped() { g_dropped = 0; }

PsOp PsOp::identity() {
  PsOp o;
  o.add(PsKey{0, 0, 0, 0}, 1.0);
  return o;
}

PsOp PsOp::from_fn(const PhaseFn& f, int dth, int dp) {
  PsOp o;
  for (const auto& [key, c] : f.terms) o.add(PsKey{key.k, key.a, dth, dp}, c);
  return o;
}

PsOp PsOp::poisson(const PhaseFn& h) {
  PsOp o = from_fn(d_p(h), 1, 0);
  PsOp q = from_fn(d_theta(h), 0, 1);
  return sub(o, q);
}

PsOp PsOp::double_bracket(const PhaseFn& d) { return from_fn(d_p(d), 0, 1); }

void PsOp::add(const PsKey& key, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms.erase(it);
  }
}

PhaseFn PsOp::apply(const PhaseFn& f) const {
  PhaseFn out;
  for (const auto& [key, c] : terms) {
    for (const auto& [fk, fc] : f.terms) {
      if (fk.a < key.dp) continue;
      if (key.dth > 0 && fk.k == 0) continue;
      const cplx v = c * fc * std::pow(cplx(0.0, fk.k), key.dth) * falling(fk.a, key.dp);
      out.add(key.k + fk.k, key.a + fk.a - key.dp, v);
    }
  }
  return out;
}

std::string PsOp::dump() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [key, c] : terms)
    os << '(' << c.real() << ',' << c.imag() << ") " << key.k << ' ' << key.a << ' ' << key.dth
       << ' ' << key.dp << '\n';
  return os.str();
}

double PsOp::max_abs() const {
  double m = 0.0;
  for (const auto& [key, c] : terms) m = std::max(m, std::abs(c));
  return m;
}

double PsOp::reality_defect() const {
  double m = 0.0;
  for (const auto& [key, c] : terms) {
    auto it = terms.find(PsKey{-key.k, key.a, key.dth, key.dp});
    const cplx partner = it == terms.end() ? cplx(0.0) : it->second;
    m = std::max(m, std::abs(c - std::conj(partner)));
  }
  return m;
}

PsOp add(const PsOp& a, const PsOp& b) {
  PsOp out = a;
  for (const auto& [key, c] : b.terms) out.add(key, c);
  return out;
}

PsOp sub(const PsOp& a, const PsOp& b) {
  PsOp out = a;
  for (const auto& [key, c] : b.terms) out.add(key, -c);
  return out;
}

PsOp scale(const PsOp& a, cplx s) {
  PsOp out;
  if (s == cplx(0.0)) return out;
  for (const auto& [key, c] : a.terms) out.terms.emplace(key, c * s);
  return out;
}

PsOp compose(const PsOp& a, const PsOp& b) {
  const PsLimits lim = g_limits;
  PsOp out;
  long long dropped = 0;
  for (const auto& [ka, ca] : a.terms) {
    for (const auto& [kb, cb] : b.terms) {
      // d_theta^b1 d_p^c1 (g h) expanded by Leibniz, g = exp(i k2 theta) p^a2.
      cplx ik_pow = 1.0;
      for (int i = 0; i <= ka.dth; ++i) {
        if (i > 0) ik_pow *= cplx(0.0, kb.k);
        if (ik_pow == cplx(0.0)) break;
        const double bi = double(binomial(ka.dth, i));
        for (int j = 0; j <= ka.dp && j <= kb.a; ++j) {
          const cplx c = ca * cb * bi * double(binomial(ka.dp, j)) * ik_pow * falling(kb.a, j);
          PsKey key{ka.k + kb.k, ka.a + kb.a - j, ka.dth - i + kb.dth, ka.dp - j + kb.dp};
          if (std::abs(key.k) > lim.k_max || key.a > lim.a_max) {
            if (std::abs(c) > lim.coeff_floor) ++dropped;
            continue;
          }
          out.add(key, c);
        }
      }
    }
  }
  if (dropped) g_dropped += dropped;
  return out;
}

PsOp zero_like(const PsOp&) { return {}; }

double norm_inf(const PsOp& a) { return a.max_abs(); }

PsOp pruned(const PsOp& a, double tol) {
  PsOp out;
  for (const auto& [key, c] : a.terms)
    if (std::abs(c) > tol) out.terms.emplace(key, c);
  return out;
}

VectorField vector_field(const PsOp& g) {
  VectorField v;
  for (const auto& [key, c] : g.terms) {
    if (key.dth == 1 && key.dp == 0)
      v.f_theta.add(key.k, key.a, c);
    else if (key.dth == 0 && key.dp == 1)
      v.f_p.add(key.k, key.a, c);
    else
      ++v.higher_derivative_terms;
  }
  return v;
}

SplitResult split_hamiltonian_dissipator(const PsOp& g, double mass_scale) {
  SplitResult r;
  for (const auto& [key, c] : g.terms) {
    const bool first = (key.dth == 1 && key.dp == 0) || (key.dth == 0 && key.dp == 1);
    if (!first) r.remainder.add(key, c);
  }
  const VectorField v = vector_field(g);
  const PhaseFn ft = v.f_theta * cplx(mass_scale);
  const PhaseFn fp = v.f_p * cplx(mass_scale);

  // H = int F_theta dp + H0(theta), with H0 fixed so that dD/dp has no p^0 part.
  PhaseFn h = integrate_p(ft);
  PhaseFn fp0;
  for (const auto& [key, c] : fp.terms)
    if (key.a == 0) fp0.add(key.k, 0, c);
  PhaseFn stuck;
  h -= integrate_theta(fp0, &stuck);
  if (!stuck.terms.empty()) {
    r.flagged = true;
    for (const auto& [key, c] : stuck.terms) r.remainder.add(PsKey{key.k, key.a, 0, 1}, c / mass_scale);
  }
  PhaseFn dd = fp + d_theta(h);
  for (const auto& [key, c] : stuck.terms) dd.add(key.k, key.a, -c);
  r.h_eff = h;
  r.d_eff = integrate_p(dd);
  return r;
}

VectorField reconstruct(const SplitResult& s, double mass_scale) {
  VectorField v;
  const cplx inv = 1.0 / mass_scale;
  v.f_theta = d_p(s.h_eff) * inv;
  v.f_p = (d_p(s.d_eff) - d_theta(s.h_eff)) * inv;
  const VectorField rest = vector_field(s.remainder);
  v.f_theta += rest.f_theta;
  v.f_p += rest.f_p;
  v.higher_derivative_terms = rest.higher_derivative_terms;
  return v;
}

// ------------------------------------------------------------ free words

FreeOp FreeOp::letter(Letter l) {
  FreeOp o;
  o.terms[Word{l}] = 1.0;
  return o;
}

namespace {

void free_add(FreeOp& out, const Word& w, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = out.terms.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) out.terms.erase(it);
  }
}

}  // namespace

FreeOp add(const FreeOp& a, const FreeOp& b) {
  FreeOp out = a;
  for (const auto& [w, c] : b.terms) free_add(out, w, c);
  return out;
}

FreeOp sub(const FreeOp& a, const FreeOp& b) {
  FreeOp out = a;
  for (const auto& [w, c] : b.terms) free_add(out, w, -c);
  return out;
}

FreeOp scale(const FreeOp& a, cplx s) {
  FreeOp out;
  if (s == cplx(0.0)) return out;
  for (const auto& [w, c] : a.terms) out.terms.emplace(w, c * s);
  return out;
}

FreeOp compose(const FreeOp& a, const FreeOp& b) {
  FreeOp out;
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) free_add(out, concat(wa, wb), ca * cb);
  return out;
}

FreeOp zero_like(const FreeOp&) { return {}; }

double norm_inf(const FreeOp& a) {
  double m = 0.0;
  for (const auto& [w, c] : a.terms) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace tcg
