// Exponential polynomials sum_k c_k t^p_k exp(-i w_k t) and the convolution
// average against a window.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcg {

using cplx = std::complex<double>;

inline constexpr double kFreqTol = 1e-12;

struct ExpPolyTerm {
  cplx coeff;
  int power = 0;
  double freq = 0.0;
};

// Terms are kept sorted by (power, freq) with frequencies merged within
// kFreqTol; zero coefficients are never stored.
class ExpPoly {
 public:
  ExpPoly() = default;
  static ExpPoly constant(cplx c);
  static ExpPoly monomial(cplx c, int power, double freq);
  // c * exp(-i w t)
  static ExpPoly harmonic(double freq, cplx c = 1.0);
  // Builds a canonical polynomial from an unordered term list.
  static ExpPoly from_terms(std::vector<ExpPolyTerm> terms);

  const std::vector<ExpPolyTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(cplx c, int power, double freq);
  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  ExpPoly& operator*=(cplx s);

  cplx operator()(double t) const;
  int max_power() const;
  double max_abs_coeff() const;

  // Drops terms with |freq| > freq_cut or |coeff| < floor.
  ExpPoly truncated(double freq_cut, double floor) const;

 private:
  std::vector<ExpPolyTerm> terms_;
};

ExpPoly operator+(ExpPoly a, const ExpPoly& b);
ExpPoly operator-(ExpPoly a, const ExpPoly& b);
ExpPoly operator*(ExpPoly a, cplx s);
ExpPoly operator*(cplx s, ExpPoly a);
ExpPoly multiply(const ExpPoly& f, const ExpPoly& g);
ExpPoly operator*(const ExpPoly& f, const ExpPoly& g);
ExpPoly derivative(const ExpPoly& f);
// F with F(0) = 0 and F' = f.
ExpPoly antiderivative(const ExpPoly& f);

// Exact structural equality (same keys, coefficients within abs tolerance).
bool approx_equal(const ExpPoly& a, const ExpPoly& b, double tol = 0.0);

std::string to_string(const ExpPoly& f);

enum class WindowKind { gaussian, rectangular, delta };

struct WindowSpec {
  WindowKind kind = WindowKind::gaussian;
  // Gaussian: standard deviation. Rectangular: full width.
  double tau = 1.0;

  static WindowSpec gaussian(double tau);
  static WindowSpec rectangular(double tau);
  static WindowSpec delta();
  // Window density w(s).
  double density(double s) const;
  // Half-width outside of which the density is negligible (or zero).
  double support() const;
};

WindowKind parse_window_kind(const std::string& s);
std::string to_string(WindowKind k);

class UnsupportedOrder : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline constexpr int kMaxWindowMoment = 8;

// W_j(w) = int w(s) s^j exp(i w s) ds.
cplx window_transform(const WindowSpec& win, int j, double omega);

// Convolution average int w(s) f(t - s) ds, term by term.
ExpPoly average(const WindowSpec& win, const ExpPoly& f);

}  // namespace tcg
