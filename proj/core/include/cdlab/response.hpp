#pragma once

#include "cdlab/cd_expansion.hpp"
#include "cdlab/dynamics.hpp"

namespace cdlab {

// Static linear response of an extensive observable X to a drive parameter
// lambda. The family is s-parametrized with lambda(s) = lambda0 +
// dlambda * theta(s); the coefficient is reported per unit volume in the
// lambda-parametrization (the expansion's A_1 carries one factor of
// dlambda/ds which is divided out).
struct ResponseSetup {
  InteractionFamily family;
  cxmat x_dense;
  double x_herm_defect = 0.0;
  int volume = 0;
  double eval_s = 0.5;
  std::function<double(double)> dlambda_ds;  // drive-parameter speed
};

// f = i <Omega|[A_1, X]|Omega> / (L^d dlambda/ds); imaginary residue checked.
double kubo_f(const ResponseSetup& setup, const cxvec& omega, const cxmat& a1_at_s,
              double* imag_residue = nullptr);

// Numerator i eps <Omega|[A_1,X]|Omega> without normalization, for the
// second-order bound diagnostics.
double kubo_numerator(const cxvec& omega, const cxmat& a1_at_s, const cxmat& x,
                      double* imag_residue = nullptr);

struct NumericResponse {
  double value = 0.0;       // (⟨psi|X psi⟩ - ⟨Omega|X Omega⟩) / (eps dlambda/ds L^d)
  double numerator = 0.0;   // ⟨psi|X psi⟩ - ⟨Omega|X Omega⟩
  double reference = 0.0;   // ⟨Omega|X Omega⟩
};

NumericResponse numeric_response(const ResponseSetup& setup, const GroundStateFamily& gsf,
                                 double eps, double tolerance = 1e-9);

}  // namespace cdlab
