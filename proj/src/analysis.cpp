#include "tcg/analysis.hpp"

#include <cmath>
#include <functional>

namespace tcg {

Eigen::Matrix2d jacobian_at(const GeneratorSeries<MatrixOp>& g, double t, int up_to) {
  const MatrixOp e = g.evaluate(t, up_to);
  if (e.dim() < 2) throw DimensionMismatch("jacobian_at: generator dimension below 2");
  return e.m.topLeftCorner(2, 2).real();
}

Eigen::Matrix2d jacobian_at(const PsOp& g, double theta, double p) {
  const VectorField v = vector_field(g);
  Eigen::Matrix2d j;
  j << v.f_theta.d_theta_at(theta, p).real(), v.f_theta.d_p_at(theta, p).real(),
      v.f_p.d_theta_at(theta, p).real(), v.f_p.d_p_at(theta, p).real();
  return j;
}

Eigen::Matrix2d jacobian_at(const GeneratorSeries<PsOp>& g, double theta, double p, double t,
                            int up_to) {
  return jacobian_at(g.evaluate(t, up_to), theta, p);
}

StabilityResult classify(const Eigen::Matrix2d& j) {
  StabilityResult r;
  r.trace = j.trace();
  r.det = j.determinant();
  const std::complex<double> disc = std::sqrt(std::complex<double>(r.trace * r.trace - 4.0 * r.det));
  r.eig1 = 0.5 * (r.trace + disc);
  r.eig2 = 0.5 * (r.trace - disc);
  r.stable = r.eig1.real() < 0.0 && r.eig2.real() < 0.0;
  return r;
}

// ----------------------------------------------------------- thresholds

namespace {

ThresholdResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  ThresholdResult r;
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    r.iterations = it + 1;
  }
  r.found = true;
  r.lo = lo;
  r.hi = hi;
  r.value = 0.5 * (lo + hi);
  return r;
}

// Scans for the first sign change of f on (start, stop] and bisects it.
ThresholdResult first_root(const std::function<double(double)>& f, double start, double stop,
                           double step, double tol) {
  double a = start;
  double fa = f(a);
  while (a < stop) {
    const double b = std::min(a + step, stop);
    const double fb = f(b);
    if (fa == 0.0) return {true, a, a, a, 0};
    if ((fa > 0.0) != (fb > 0.0)) return bisect(f, a, b, tol);
    a = b;
    fa = fb;
  }
  return {};
}

}  // namespace

KapitzaThreshold::KapitzaThreshold(int order, const WindowSpec& win, double nu,
                                   const TruncationPolicy& base)
    : order_(order), nu_(nu) {
  if (order < 1) throw DomainError("threshold: order must be positive");
  const ModelSpec<MatrixOp> shape = kapitza_matrix({0.1, 0.0, 0.0, nu});
  check_size(shape.size(), order);
  MomentTable moments(shape.f, win);
  moments.populate(order);
  const CumulantTable cum = compute_cumulants(moments, order);
  TruncationPolicy pol = base;
  pol.n_max = order;
  table_ = truncate_table(cum.u, order, pol, win);
}

Eigen::Matrix2d KapitzaThreshold::jacobian(const KapitzaParams& p) const {
  KapitzaParams q = p;
  q.nu = nu_;
  const auto gen = assemble(table_, kapitza_matrix(q).ops);
  return jacobian_at(gen, 0.0);
}

double KapitzaThreshold::det(const KapitzaParams& p) const { return jacobian(p).determinant(); }

ThresholdResult KapitzaThreshold::lambda0(double gamma, double beta, double lambda_max,
                                          double tol) const {
  auto f = [&](double l) { return det({gamma, l, beta, nu_}); };
  return first_root(f, 0.0, lambda_max, 1e-3, tol);
}

double closed_form_lambda0(int order, double gamma, double beta) {
  const double g2 = gamma * gamma;
  const double b2 = beta * beta;
  switch (order) {
    case 3:
      return std::sqrt(2.0 * g2);
    case 5: {
      const double den = 1.0 - 4.0 * g2 - b2;
      if (!(den > 0.0)) throw DomainError("closed_form_lambda0: no threshold at order 5");
      return std::sqrt(2.0 * g2 / den);
    }
    case 7: {
      const double x = 1.0 - b2 + b2 * b2 - 4.0 * g2 + 8.0 * b2 * g2 + 16.0 * g2 * g2;
      return std::sqrt(8.0 / 25.0 * (std::sqrt(12.5 * g2 + x * x) - x));
    }
    default:
      throw DomainError("closed_form_lambda0: order must be 3, 5 or 7");
  }
}

ThresholdResult lambda_c_first_order(double gamma, double beta) {
  const double g2 = gamma * gamma;
  const double b2 = beta * beta;
  // Offsets of the two rotating frames grow together at the boundary.
  auto f = [&](double l) {
    const double l2 = l * l;
    const double lhs = 4.0 * l2 / ((9.0 + 4.0 * g2) * (9.0 + 4.0 * g2) + 36.0 * b2);
    const double q = (1.0 + 4.0 * g2) * (1.0 + 4.0 * g2) - 4.0 * l2 + 4.0 * b2;
    const double rhs =
        q * q / (4.0 * l2 * ((1.0 + 2.0 * l + 4.0 * g2) * (1.0 + 2.0 * l + 4.0 * g2) + 4.0 * b2));
    return lhs - rhs;
  };
  return first_root(f, 1e-3, 1.5, 1e-3, 1e-13);
}

double lambda_c_series(double gamma, double beta) {
  const double g2 = gamma * gamma;
  const double b2 = beta * beta;
  return 0.454163 + 1.681051 * g2 + 0.859551 * b2 - 0.404568 * g2 * g2 - 3.767032 * b2 * g2 -
         0.924046 * b2 * b2;
}

double lambda_c_undamped(double gamma) {
  const double g2 = gamma * gamma;
  return (std::sqrt(117.0 + 232.0 * g2 + 80.0 * g2 * g2) - 9.0 - 4.0 * g2) / 4.0;
}

// --------------------------------------------------------------- Floquet

namespace {

Eigen::Matrix2d rk4_monodromy(double gamma, double beta, double lambda, int steps) {
  const double g2 = gamma * gamma;
  auto a = [&](double t) {
    Eigen::Matrix2d m;
    m << 0.0, 1.0, g2 - lambda * std::cos(t), -beta;
    return m;
  };
  const double h = 2.0 * M_PI / steps;
  Eigen::Matrix2d y = Eigen::Matrix2d::Identity();
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const Eigen::Matrix2d k1 = a(t) * y;
    const Eigen::Matrix2d k2 = a(t + 0.5 * h) * (y + 0.5 * h * k1);
    const Eigen::Matrix2d k3 = a(t + 0.5 * h) * (y + 0.5 * h * k2);
    const Eigen::Matrix2d k4 = a(t + h) * (y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

MonodromyResult monodromy(double gamma, double beta, double lambda, int steps, double tol) {
  MonodromyResult r;
  Eigen::Matrix2d prev = rk4_monodromy(gamma, beta, lambda, steps);
  for (int k = 0; k < 8; ++k) {
    const Eigen::Matrix2d next = rk4_monodromy(gamma, beta, lambda, 2 * steps);
    steps *= 2;
    const bool done = (next - prev).cwiseAbs().maxCoeff() <= tol;
    prev = next;
    if (done) break;
    if (k == 7) throw NumericError("monodromy: step doubling did not converge");
  }
  r.phi = prev;
  r.steps = steps;
  r.trace = prev.trace();
  r.det = prev.determinant();
  r.liouville_defect = std::abs(r.det - std::exp(-2.0 * M_PI * beta));
  r.stable = std::abs(r.trace) < 1.0 + r.det;
  return r;
}

FloquetBounds floquet_bounds(double gamma, double beta, double lambda_max, double scan_step) {
  auto margin = [&](double l) {
    const MonodromyResult m = monodromy(gamma, beta, l);
    return 1.0 + m.det - std::abs(m.trace);
  };
  FloquetBounds b;
  b.lower = first_root(margin, 0.0, lambda_max, scan_step, 1e-10);
  if (b.lower.found) b.upper = first_root(margin, b.lower.hi, lambda_max, scan_step, 1e-10);
  return b;
}

}  // namespace tcg
