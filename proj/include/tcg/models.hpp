// Model constructors: damped Kapitza pendulum (phase-space and linearized),
// length-modulated Kapitza pendulum, rotating-frame models near the upper
// stability boundary, and the parametric oscillator in action-angle form.
#pragma once

#include "tcg/algebra.hpp"
#include "tcg/cumulant.hpp"

#include <string>
#include <vector>

namespace tcg {

// Gamma = w0/nu, beta = Gamma/Q, lambda = dimensionless drive. Time is
// measured in units where the drive frequency is nu (nu = 1 is the
// dimensionless convention).
struct KapitzaParams {
  double gamma = 0.1;
  double lambda = 0.2;
  double beta = 0.0;
  double nu = 1.0;
};

void validate(const KapitzaParams& p);

// Letters: 0 -> L0 (f = 1), 1 -> L_{+nu} (f = e^{i nu t}), 2 -> L_{-nu}.
ModelSpec<PsOp> kapitza_psop(const KapitzaParams& p);
// Linearization sin(theta) -> theta on coordinates (theta, p).
ModelSpec<MatrixOp> kapitza_matrix(const KapitzaParams& p);

enum class ModulationKind { polynomial, periodic };

// Delta(t) = alpha1 t + alpha2 t^2, or amplitude * sin(t / period).
struct ModulationParams {
  ModulationKind kind = ModulationKind::polynomial;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double amplitude = 0.0;
  double period = 1.0;
};

ExpPoly modulation_function(const ModulationParams& m);

struct ModulatedModel {
  ModelSpec<PsOp> spec;
  std::vector<std::string> warnings;
};

// Physical time with m = l0 = 1 and g = Gamma^2 nu^2; the Hamiltonian is
// linear in Delta. Letters: L0, drive at -+nu, Delta, Delta x drive at -+nu.
// The Delta letters carry grade 1.
ModulatedModel modulated_kapitza(const KapitzaParams& p, const ModulationParams& m, double tau);

// Affine generator on (theta, p~, 1) in one of the two rotating frames; the
// amplitude is A1 for frame 1 and A3 for frame 2. m = l = 1.
ModelSpec<MatrixOp> ct_frame(int frame, const KapitzaParams& p, double amplitude);

struct ParamOscParams {
  double eps = 0.01;
  double omega0 = 1.0;
  double drive = 2.0;  // Omega
  double delta() const { return drive - 2.0 * omega0; }
  double sigma() const { return drive + 2.0 * omega0; }
};

// Six letters in the order +Omega, -Omega, +Sigma, -Sigma, +Delta, -Delta;
// PsOp coordinates are (theta, J) with J in the momentum slot.
ModelSpec<PsOp> parametric_oscillator(const ParamOscParams& p);
// Fourier components h_w of the letters above.
std::vector<PhaseFn> parametric_hamiltonians(const ParamOscParams& p);

// Largest deviation of sum_i f_i(t) L_i from a real operator.
double reality_defect(const ModelSpec<PsOp>& m, double t);
double reality_defect(const ModelSpec<MatrixOp>& m, double t);

}  // namespace tcg
