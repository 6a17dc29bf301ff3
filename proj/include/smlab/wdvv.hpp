#pragma once

#include <optional>

#include "smlab/hessian.hpp"

namespace smlab {

// W_ijkl = sum Phi^pq (Phi_jlp Phi_ikq - Phi_ilp Phi_jkq). Equals -4 R_ijkl.
Tensor4 wdvv_tensor(const Derivatives& d, const Matrix& inverse);

struct WdvvReport {
  Vector point;
  double residual = 0.0;
  std::optional<double> scalar_residual;  // n = 2
  std::optional<Matrix> ricci_residual;   // n = 3
  double totaro = 0.0;
};

double wdvv_residual(const PotentialSpec& spec, const Vector& x);
// sum Phi^ik Phi^jl W_ijkl. Throws WrongDimension unless n = 2.
double wdvv_scalar_residual(const PotentialSpec& spec, const Vector& x);
// sum_jl Phi^jl W_ijkl. Throws WrongDimension unless n = 3.
Matrix wdvv_ricci_residual(const PotentialSpec& spec, const Vector& x);
// max |W_ijkl + 4 R_ijkl| with R from the Riemann routine.
double totaro_consistency(const PotentialSpec& spec, const Vector& x);

WdvvReport wdvv_report(const PotentialSpec& spec, const Vector& x);

struct LegendreWdvvReport {
  std::string dual_name;
  int samples = 0;
  double max_residual = 0.0;
};

// wdvv_residual of the dual at grad Phi(x) for sampled x.
LegendreWdvvReport legendre_wdvv_check(const PotentialSpec& spec, int samples, Rng& rng);

}  // namespace smlab
