// Linear stability of effective generators, threshold searches and the
// Floquet reference for the damped Kapitza pendulum.
#pragma once

#include "tcg/cumulant.hpp"
#include "tcg/models.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>

namespace tcg {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Jacobian of the generator's vector field at a point, coordinates (theta, p).
Eigen::Matrix2d jacobian_at(const GeneratorSeries<MatrixOp>& g, double t, int up_to = -1);
Eigen::Matrix2d jacobian_at(const GeneratorSeries<PsOp>& g, double theta, double p, double t,
                            int up_to = -1);
Eigen::Matrix2d jacobian_at(const PsOp& g, double theta, double p);

struct StabilityResult {
  double trace = 0.0;
  double det = 0.0;
  std::complex<double> eig1, eig2;
  bool stable = false;  // both eigenvalues in the open left half-plane
};

StabilityResult classify(const Eigen::Matrix2d& j);

struct ThresholdResult {
  bool found = false;
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  // final bracket
  int iterations = 0;
};

// Stability threshold of the inverted equilibrium from the linearized
// effective generator. The truncated cumulant table depends only on the
// letter time dependence, so it is computed once and reused for every lambda.
class KapitzaThreshold {
 public:
  KapitzaThreshold(int order, const WindowSpec& win, double nu = 1.0,
                   const TruncationPolicy& base = {});

  int order() const { return order_; }
  Eigen::Matrix2d jacobian(const KapitzaParams& p) const;
  double det(const KapitzaParams& p) const;
  // First sign change of det in lambda on (0, lambda_max], refined by bisection.
  ThresholdResult lambda0(double gamma, double beta, double lambda_max = 2.0,
                          double tol = 1e-12) const;

 private:
  int order_;
  double nu_;
  TruncatedTable table_;
};

// Closed forms for orders 3, 5 and 7.
double closed_form_lambda0(int order, double gamma, double beta);

// Upper stability boundary from the first-order rotating-frame offsets.
ThresholdResult lambda_c_first_order(double gamma, double beta);
// Truncated small-parameter series of the same boundary.
double lambda_c_series(double gamma, double beta);
// Undamped closed form of the same boundary.
double lambda_c_undamped(double gamma);

struct MonodromyResult {
  Eigen::Matrix2d phi;
  double trace = 0.0;
  double det = 0.0;
  double liouville_defect = 0.0;  // |det - exp(-2 pi beta)|
  int steps = 0;
  bool stable = false;
};

// Monodromy of theta'' + beta theta' - (Gamma^2 - lambda cos t) theta = 0 over
// one period, step count doubled until the matrix changes by less than tol.
MonodromyResult monodromy(double gamma, double beta, double lambda, int steps = 4096,
                          double tol = 1e-10);

struct FloquetBounds {
  ThresholdResult lower;
  ThresholdResult upper;
};

// Stable lambda interval of the inverted equilibrium, |tr| < 1 + det.
FloquetBounds floquet_bounds(double gamma, double beta, double lambda_max = 2.0,
                             double scan_step = 2e-3);

}  // namespace tcg
