// Algebra backends: dense matrices (reversed composition), phase-space
// differential operators, and free words. Every backend provides
// add/sub/scale/compose/zero_like/norm_inf as free functions.
#pragma once

#include "tcg/expavg.hpp"
#include "tcg/freewords.hpp"

#include <Eigen/Dense>

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tcg {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- matrices

// Linear generator z' = A z on coordinate functions. Operator composition
// L_a L_b corresponds to the matrix product B * A.
struct MatrixOp {
  Eigen::MatrixXcd m;

  MatrixOp() = default;
  explicit MatrixOp(Eigen::MatrixXcd mat) : m(std::move(mat)) {}
  static MatrixOp zero(int d) { return MatrixOp(Eigen::MatrixXcd::Zero(d, d)); }
  static MatrixOp identity(int d) { return MatrixOp(Eigen::MatrixXcd::Identity(d, d)); }
  int dim() const { return static_cast<int>(m.rows()); }
};

MatrixOp add(const MatrixOp& a, const MatrixOp& b);
MatrixOp sub(const MatrixOp& a, const MatrixOp& b);
MatrixOp scale(const MatrixOp& a, cplx s);
MatrixOp compose(const MatrixOp& a, const MatrixOp& b);
MatrixOp zero_like(const MatrixOp& a);
double norm_inf(const MatrixOp& a);

// ------------------------------------------------- phase-space functions

// Key (k, a) of the basis function exp(i k theta) p^a.
struct PhaseKey {
  int k = 0;
  int a = 0;
  auto operator<=>(const PhaseKey&) const = default;
};

// Finite sum of c exp(i k theta) p^a.
class PhaseFn {
 public:
  std::map<PhaseKey, cplx> terms;

  static PhaseFn constant(cplx c);
  static PhaseFn monomial(cplx c, int k, int a);
  static PhaseFn sin_theta(int m = 1);  // sin(m theta)
  static PhaseFn cos_theta(int m = 1);  // cos(m theta)

  void add(int k, int a, cplx c);
  PhaseFn& operator+=(const PhaseFn& o);
  PhaseFn& operator-=(const PhaseFn& o);
  PhaseFn& operator*=(cplx s);

  cplx operator()(double theta, double p) const;
  cplx d_theta_at(double theta, double p) const;
  cplx d_p_at(double theta, double p) const;
  bool is_zero(double tol = 0.0) const;
  double max_abs() const;
  // Largest |c - conj(c')| over conjugate key pairs.
  double reality_defect() const;
};

PhaseFn operator+(PhaseFn a, const PhaseFn& b);
PhaseFn operator-(PhaseFn a, const PhaseFn& b);
PhaseFn operator*(PhaseFn a, cplx s);
PhaseFn operator*(cplx s, PhaseFn a);
PhaseFn operator*(const PhaseFn& a, const PhaseFn& b);
PhaseFn d_theta(const PhaseFn& f);
PhaseFn d_p(const PhaseFn& f);
// Antiderivative in p with zero p-independent part.
PhaseFn integrate_p(const PhaseFn& f);
// Antiderivative in theta of the k != 0 part; k == 0 terms are returned in
// `rest` because they have no antiderivative in the basis.
PhaseFn integrate_theta(const PhaseFn& f, PhaseFn* rest);
// Terms with |c| <= tol removed.
PhaseFn pruned(const PhaseFn& f, double tol);

// ----------------------------------------------------- differential ops

struct PsKey {
  int k = 0;   // exp(i k theta)
  int a = 0;   // p^a
  int dth = 0; // d_theta order
  int dp = 0;  // d_p order
  auto operator<=>(const PsKey&) const = default;
};

struct PsLimits {
  int k_max = 16;
  int a_max = 12;
  double coeff_floor = 0.0;
};

// Global caps on products; terms outside are dropped and counted.
PsLimits& ps_limits();
long long ps_dropped_terms();
void ps_reset_dropped();

// Sum of c exp(i k theta) p^a d_theta^dth d_p^dp, derivatives to the right.
class PsOp {
 public:
  std::map<PsKey, cplx> terms;

  static PsOp zero() { return {}; }
  static PsOp identity();
  // f(theta, p) * d_theta^dth d_p^dp
  static PsOp from_fn(const PhaseFn& f, int dth, int dp);
  // Hamiltonian vector field {., h} = h_p d_theta - h_theta d_p.
  static PsOp poisson(const PhaseFn& h);
  // Dissipative bracket [[., d]] = d_p d * d_p.
  static PsOp double_bracket(const PhaseFn& d);

  void add(const PsKey& key, cplx c);
  // Applies the operator to a phase function.
  PhaseFn apply(const PhaseFn& f) const;
  std::string dump() const;
  double max_abs() const;
  double reality_defect() const;
};

PsOp add(const PsOp& a, const PsOp& b);
PsOp sub(const PsOp& a, const PsOp& b);
PsOp scale(const PsOp& a, cplx s);
PsOp compose(const PsOp& a, const PsOp& b);
PsOp zero_like(const PsOp& a);
double norm_inf(const PsOp& a);
PsOp pruned(const PsOp& a, double tol);

struct VectorField {
  PhaseFn f_theta;
  PhaseFn f_p;
  int higher_derivative_terms = 0;
};

// Action of g on the coordinates theta and p.
VectorField vector_field(const PsOp& g);

struct SplitResult {
  PhaseFn h_eff;
  PhaseFn d_eff;
  PsOp remainder;
  bool flagged = false;  // true when first-order terms went to the remainder
};

// Solves dH/dp = s F_theta, dD/dp = s F_p + dH/dtheta (s = mass_scale) in the
// exp(ik theta) p^a basis. D keeps only p^a with a >= 2, H has no constant
// term.
SplitResult split_hamiltonian_dissipator(const PsOp& g, double mass_scale = 1.0);

// Vector field reconstructed from a split.
VectorField reconstruct(const SplitResult& s, double mass_scale = 1.0);

// ------------------------------------------------------------ free words

// Formal sum of words with complex coefficients; compose concatenates.
struct FreeOp {
  std::map<Word, cplx> terms;
  static FreeOp letter(Letter l);
};

FreeOp add(const FreeOp& a, const FreeOp& b);
FreeOp sub(const FreeOp& a, const FreeOp& b);
FreeOp scale(const FreeOp& a, cplx s);
FreeOp compose(const FreeOp& a, const FreeOp& b);
FreeOp zero_like(const FreeOp& a);
double norm_inf(const FreeOp& a);

// --------------------------------------------------------- generic ops

template <class E>
E commutator(const E& a, const E& b) {
  return sub(compose(a, b), compose(b, a));
}

// Product L_{w1} ... L_{wn} of alphabet elements.
template <class E>
E word_element(const Word& w, const std::vector<E>& letters) {
  if (w.empty()) throw DomainError("word_element: empty word");
  E acc = letters.at(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) acc = compose(acc, letters.at(w[i]));
  return acc;
}

template <class E>
struct LieSplit {
  E lie_part;
  E remainder;
};

// Dynkin projection of a homogeneous word sum evaluated in a backend.
template <class E>
LieSplit<E> dynkin_project(const std::map<Word, cplx>& sum, const std::vector<E>& letters) {
  if (letters.empty()) throw DomainError("dynkin_project: empty alphabet");
  E full = zero_like(letters[0]);
  E lie = zero_like(letters[0]);
  std::size_t n = 0;
  for (const auto& [w, c] : sum) {
    if (n == 0) n = w.size();
    if (w.size() != n) throw DomainError("dynkin_project: inhomogeneous word sum");
    full = add(full, scale(word_element(w, letters), c));
    for (const auto& [v, r] : dynkin_expand(w)) {
      const double weight = double(r.numerator()) / double(r.denominator());
      lie = add(lie, scale(word_element(v, letters), c * weight));
    }
  }
  return {lie, sub(full, lie)};
}

}  // namespace tcg
