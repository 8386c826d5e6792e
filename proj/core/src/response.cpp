#include "cdlab/response.hpp"

namespace cdlab {

double kubo_numerator(const cxvec& omega, const cxmat& a1_at_s, const cxmat& x,
                      double* imag_residue) {
  complexd comm = omega.dot(a1_at_s * (x * omega)) - omega.dot(x * (a1_at_s * omega));
  complexd val = complexd(0, 1) * comm;
  if (imag_residue) *imag_residue = std::abs(val.imag());
  return val.real();
}

double kubo_f(const ResponseSetup& setup, const cxvec& omega, const cxmat& a1_at_s,
              double* imag_residue) {
  if (setup.x_herm_defect > 1e-10 || asymmetry(a1_at_s) > 1e-8)
    throw InvalidInputError("kubo_f: inputs must be Hermitian");
  double imag = 0.0;
  double num = kubo_numerator(omega, a1_at_s, setup.x_dense, &imag);
  if (imag_residue) *imag_residue = imag;
  if (imag > 1e-10) throw NumericalError("kubo_f: imaginary residue " + std::to_string(imag));
  double speed = setup.dlambda_ds(setup.eval_s);
  if (speed == 0.0) throw PreconditionError("kubo_f: dlambda/ds vanishes at the evaluation point");
  return num / (setup.volume * speed);
}

NumericResponse numeric_response(const ResponseSetup& setup, const GroundStateFamily& gsf,
                                 double eps, double tolerance) {
  double speed = setup.dlambda_ds(setup.eval_s);
  if (speed == 0.0)
    throw PreconditionError("numeric_response: dlambda/ds vanishes at the evaluation point");

  // locate the evaluation point on the family grid
  std::size_t idx = 0;
  double best = 1e300;
  for (std::size_t i = 0; i < gsf.grid.size(); ++i) {
    double d = std::abs(gsf.grid[i] - setup.eval_s);
    if (d < best) {
      best = d;
      idx = i;
    }
  }
  if (best > 1e-12)
    throw InvalidInputError("numeric_response: eval_s must lie on the family grid");

  std::vector<double> out_grid;
  for (double s = 0.0; s < setup.eval_s - 1e-12; s += setup.eval_s / 8) out_grid.push_back(s);
  out_grid.push_back(setup.eval_s);

  DriveProtocol proto(eps, out_grid);
  proto.tolerance = tolerance;
  Trajectory traj = evolve(setup.family, proto, gsf.states.front());

  const cxvec& psi = traj.states.back();
  const cxvec& om = gsf.states[idx];
  NumericResponse r;
  r.reference = std::real(om.dot(setup.x_dense * om));
  r.numerator = std::real(psi.dot(setup.x_dense * psi)) - r.reference;
  r.value = r.numerator / (eps * speed * setup.volume);
  return r;
}

}  // namespace cdlab
