#include "tcg/expavg.hpp"

#include "tcg/freewords.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tcg {

namespace {

bool key_less(const ExpPolyTerm& a, const ExpPolyTerm& b) {
  if (a.power != b.power) return a.power < b.power;
  return a.freq < b.freq - kFreqTol;
}

bool same_key(const ExpPolyTerm& a, const ExpPolyTerm& b) {
  return a.power == b.power && std::abs(a.freq - b.freq) <= kFreqTol;
}

// Sorts and merges equal keys; drops exact zeros.
std::vector<ExpPolyTerm> normalize(std::vector<ExpPolyTerm> v) {
  std::sort(v.begin(), v.end(), [](const ExpPolyTerm& a, const ExpPolyTerm& b) {
    if (a.power != b.power) return a.power < b.power;
    return a.freq < b.freq;
  });
  std::vector<ExpPolyTerm> out;
  out.reserve(v.size());
  for (const auto& t : v) {
    if (!out.empty() && same_key(out.back(), t))
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const ExpPolyTerm& t) { return t.coeff == cplx(0.0); }),
            out.end());
  return out;
}

}  // namespace

ExpPoly ExpPoly::constant(cplx c) { return monomial(c, 0, 0.0); }

ExpPoly ExpPoly::monomial(cplx c, int power, double freq) {
  ExpPoly p;
  p.add_term(c, power, freq);
  return p;
}

ExpPoly ExpPoly::harmonic(double freq, cplx c) { return monomial(c, 0, freq); }

ExpPoly ExpPoly::from_terms(std::vector<ExpPolyTerm> terms) {
  ExpPoly p;
  p.terms_ = normalize(std::move(terms));
  return p;
}

void ExpPoly::add_term(cplx c, int power, double freq) {
  if (c == cplx(0.0)) return;
  ExpPolyTerm t{c, power, freq};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t, key_less);
  if (it != terms_.end() && same_key(*it, t)) {
    it->coeff += c;
    if (it->coeff == cplx(0.0)) terms_.erase(it);
  } else {
    terms_.insert(it, t);
  }
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  std::vector<ExpPolyTerm> v = terms_;
  v.insert(v.end(), o.terms_.begin(), o.terms_.end());
  terms_ = normalize(std::move(v));
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) {
  std::vector<ExpPolyTerm> v = terms_;
  for (auto t : o.terms_) {
    t.coeff = -t.coeff;
    v.push_back(t);
  }
  terms_ = normalize(std::move(v));
  return *this;
}

ExpPoly& ExpPoly::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

cplx ExpPoly::operator()(double t) const {
  cplx acc = 0.0;
  for (const auto& term : terms_)
    acc += term.coeff * std::pow(t, term.power) *
           std::exp(cplx(0.0, -term.freq * t));
  return acc;
}

int ExpPoly::max_power() const {
  int p = 0;
  for (const auto& t : terms_) p = std::max(p, t.power);
  return p;
}

double ExpPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

ExpPoly ExpPoly::truncated(double freq_cut, double floor) const {
  ExpPoly out;
  for (const auto& t : terms_)
    if (std::abs(t.freq) <= freq_cut && std::abs(t.coeff) >= floor)
      out.terms_.push_back(t);
  return out;
}

ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
ExpPoly operator*(ExpPoly a, cplx s) { return a *= s; }
ExpPoly operator*(cplx s, ExpPoly a) { return a *= s; }

ExpPoly multiply(const ExpPoly& f, const ExpPoly& g) {
  std::vector<ExpPolyTerm> v;
  v.reserve(f.size() * g.size());
  for (const auto& a : f.terms())
    for (const auto& b : g.terms())
      v.push_back({a.coeff * b.coeff, a.power + b.power, a.freq + b.freq});
  return ExpPoly::from_terms(std::move(v));
}

ExpPoly operator*(const ExpPoly& f, const ExpPoly& g) { return multiply(f, g); }

ExpPoly derivative(const ExpPoly& f) {
  std::vector<ExpPolyTerm> v;
  for (const auto& t : f.terms()) {
    if (t.power > 0) v.push_back({t.coeff * double(t.power), t.power - 1, t.freq});
    if (std::abs(t.freq) > kFreqTol) v.push_back({t.coeff * cplx(0.0, -t.freq), t.power, t.freq});
  }
  return ExpPoly::from_terms(std::move(v));
}

ExpPoly antiderivative(const ExpPoly& f) {
  std::vector<ExpPolyTerm> v;
  for (const auto& t : f.terms()) {
    if (std::abs(t.freq) <= kFreqTol) {
      v.push_back({t.coeff / double(t.power + 1), t.power + 1, t.freq});
      continue;
    }
    // int_0^t s^k e^{a s} ds with a = -i w, by parts.
    const cplx a(0.0, -t.freq);
    const int k = t.power;
    cplx fall = 1.0;  // k!/(k-j)!
    cplx apow = a;    // a^{j+1}
    for (int j = 0; j <= k; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      v.push_back({t.coeff * sign * fall / apow, k - j, t.freq});
      if (j == k) v.push_back({-t.coeff * sign * fall / apow, 0, 0.0});
      fall *= double(k - j);
      apow *= a;
    }
  }
  return ExpPoly::from_terms(std::move(v));
}

bool approx_equal(const ExpPoly& a, const ExpPoly& b, double tol) {
  ExpPoly d = a - b;
  return d.max_abs_coeff() <= tol;
}

std::string to_string(const ExpPoly& f) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& t : f.terms()) {
    if (!first) os << " + ";
    first = false;
    os << '(' << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag()
       << "i)";
    if (t.power) os << "*t^" << t.power;
    if (t.freq != 0.0) os << "*exp(-i*" << t.freq << "*t)";
  }
  if (first) os << '0';
  return os.str();
}

WindowSpec WindowSpec::gaussian(double tau) {
  if (!(tau > 0)) throw std::invalid_argument("gaussian window needs tau > 0");
  return {WindowKind::gaussian, tau};
}

WindowSpec WindowSpec::rectangular(double tau) {
  if (!(tau > 0)) throw std::invalid_argument("rectangular window needs tau > 0");
  return {WindowKind::rectangular, tau};
}

WindowSpec WindowSpec::delta() { return {WindowKind::delta, 0.0}; }

double WindowSpec::density(double s) const {
  switch (kind) {
    case WindowKind::gaussian:
      return std::exp(-0.5 * s * s / (tau * tau)) / (tau * std::sqrt(2.0 * std::numbers::pi));
    case WindowKind::rectangular:
      return std::abs(s) <= 0.5 * tau ? 1.0 / tau : 0.0;
    case WindowKind::delta:
      return s == 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double WindowSpec::support() const {
  switch (kind) {
    case WindowKind::gaussian:
      return 8.0 * tau;
    case WindowKind::rectangular:
      return 0.5 * tau;
    case WindowKind::delta:
      return 0.0;
  }
  return 0.0;
}

WindowKind parse_window_kind(const std::string& s) {
  if (s == "gaussian") return WindowKind::gaussian;
  if (s == "rectangular") return WindowKind::rectangular;
  if (s == "delta") return WindowKind::delta;
  throw std::invalid_argument("unknown window kind: " + s);
}

std::string to_string(WindowKind k) {
  switch (k) {
    case WindowKind::gaussian:
      return "gaussian";
    case WindowKind::rectangular:
      return "rectangular";
    case WindowKind::delta:
      return "delta";
  }
  return "?";
}

namespace {

cplx gaussian_transform(double tau, int j, double omega) {
  // W_j = P_j(w) exp(-w^2 tau^2 / 2), P_{j+1} = -i (P_j' - w tau^2 P_j).
  std::vector<cplx> p{1.0};
  const double t2 = tau * tau;
  for (int step = 0; step < j; ++step) {
    std::vector<cplx> q(p.size() + 1, 0.0);
    for (std::size_t m = 1; m < p.size(); ++m) q[m - 1] += p[m] * double(m);
    for (std::size_t m = 0; m < p.size(); ++m) q[m + 1] -= t2 * p[m];
    for (auto& c : q) c *= cplx(0.0, -1.0);
    p = std::move(q);
  }
  cplx poly = 0.0;
  for (std::size_t m = p.size(); m-- > 0;) poly = poly * omega + p[m];
  return poly * std::exp(-0.5 * omega * omega * t2);
}

cplx rectangular_transform(double width, int j, double omega) {
  const double h = 0.5 * width;
  const double x = omega * h;
  if (std::abs(x) < 2.0) {
    // Power series in i w s; only even total powers survive the symmetric interval.
    cplx acc = 0.0;
    cplx fac = 1.0;  // (i w)^m / m!
    for (int m = 0; m < 80; ++m) {
      const int q = j + m;
      if (q % 2 == 0) acc += fac * (2.0 * std::pow(h, q + 1) / double(q + 1));
      fac *= cplx(0.0, omega) / double(m + 1);
      if (std::abs(fac) * std::pow(h, q + 2) < 1e-300) break;
    }
    return acc / width;
  }
  // Integration by parts upward from I_0 = 2 sin(w h) / w.
  const cplx iw(0.0, omega);
  cplx I = 2.0 * std::sin(omega * h) / omega;
  const cplx ep = std::exp(cplx(0.0, x));
  const cplx em = std::exp(cplx(0.0, -x));
  for (int m = 1; m <= j; ++m) {
    const cplx boundary = (std::pow(h, m) * ep - std::pow(-h, m) * em) / iw;
    I = boundary - double(m) / iw * I;
  }
  return I / width;
}

}  // namespace

cplx window_transform(const WindowSpec& win, int j, double omega) {
  if (j < 0 || j > kMaxWindowMoment)
    throw UnsupportedOrder("window_transform: moment order " + std::to_string(j) +
                           " outside [0, " + std::to_string(kMaxWindowMoment) + "]");
  switch (win.kind) {
    case WindowKind::gaussian:
      return gaussian_transform(win.tau, j, omega);
    case WindowKind::rectangular:
      return rectangular_transform(win.tau, j, omega);
    case WindowKind::delta:
      return j == 0 ? cplx(1.0) : cplx(0.0);
  }
  return 0.0;
}

ExpPoly average(const WindowSpec& win, const ExpPoly& f) {
  if (win.kind == WindowKind::delta) return f;
  std::vector<ExpPolyTerm> v;
  for (const auto& t : f.terms()) {
    for (int j = 0; j <= t.power; ++j) {
      const cplx w = window_transform(win, j, t.freq);
      if (w == cplx(0.0)) continue;
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      v.push_back({t.coeff * double(binomial(t.power, j)) * sign * w, t.power - j, t.freq});
    }
  }
  return ExpPoly::from_terms(std::move(v));
}

}  // namespace tcg
