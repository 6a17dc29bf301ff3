#pragma once

#include <functional>
#include <optional>

#include <Eigen/Cholesky>

#include "smlab/potential.hpp"
#include "smlab/tensor.hpp"

namespace smlab {

struct MetricData {
  int dim = 0;
  Matrix g;
  Eigen::LLT<Matrix> cholesky;
  Matrix inverse;
};

// Throws NotPositiveDefinite when the Cholesky factorization fails.
MetricData make_metric(const Matrix& g);

MetricData metric(const PotentialSpec& spec, const Vector& x);
Vector grad_map(const PotentialSpec& spec, const Vector& x);

struct NewtonOptions {
  int max_iterations = 100;
  // Stop once max |grad Phi(x) - u| < tolerance * max(1, max |u|).
  double tolerance = 1e-12;
};

// Damped Newton for grad Phi(x) = u. Seeds from the spec's reference point
// unless `seed` is given. Throws NotConverged or LeftDomain.
Vector inverse_grad_map(const PotentialSpec& spec, const Vector& u,
                        const std::optional<Vector>& seed = std::nullopt,
                        const NewtonOptions& options = {});

// Fenchel value <x,u> - Phi(x) at the Newton solution.
double legendre_value(const PotentialSpec& spec, const Vector& u,
                      const std::optional<Vector>& seed = std::nullopt);

// R_ijkl = -1/4 sum Phi^pq (Phi_jlp Phi_ikq - Phi_ilp Phi_jkq).
Tensor4 riemann(const Derivatives& d, const Matrix& inverse);
Tensor4 riemann(const PotentialSpec& spec, const Vector& x);

// R(v,w,v,w) / (|v|^2 |w|^2 - <v,w>^2). Throws DegeneratePlane.
double sectional(const PotentialSpec& spec, const Vector& x, const Vector& v, const Vector& w);

using MetricField = std::function<MetricData(const Vector&)>;

MetricField hessian_metric_field(const PotentialSpec& spec);

// x -> J^T g(map(x)) J with J the map's Jacobian at x.
MetricField pullback_field(const MetricField& metric_dst, const ChartMap& map);

// max |J^T g_dst(map(x)) J - g_src(x)|.
double pullback_residual(const MetricField& metric_src, const MetricField& metric_dst,
                         const ChartMap& map, const Vector& x);

// Legendre dual evaluated numerically: Newton for the base point, then series
// reversion of the gradient jet, so the dual is jet-differentiable to order 4.
PotentialSpec numeric_dual(const PotentialSpec& spec);

// The closed-form dual when the catalogue provides one, else numeric_dual.
PotentialSpec dual_spec(const PotentialSpec& spec);

}  // namespace smlab
