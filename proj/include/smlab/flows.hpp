#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "smlab/hessian.hpp"

namespace smlab {

// A time-dependent potential Phi(x, t) written as one program in (x, t):
// the time is the last coordinate, so program.dim == dim + 1.
struct FlowFamily {
  std::string name;
  int dim = 0;
  JetProgram program;
  Sampler sampler;  // samples (x, t)

  [[nodiscard]] double value(const Vector& x, double t) const;
  [[nodiscard]] PotentialSpec at_time(double t) const;
};

namespace flow_families {

FlowFamily static_potential(const PotentialSpec& spec);
// 1/2 (a x1^2 + b x2^2) + t log(ab).
FlowFamily anisotropic(double a, double b);
// 1/2 (u1^2 / a + u2^2 / b) - t log(ab).
FlowFamily anisotropic_dual(double a, double b);
// -x1^2 / (4 x2) - t log(-x2), t > 0.
FlowFamily soliton();
// Fenchel conjugate of the soliton family: -t + t log t - t log(u2 - u1^2).
FlowFamily soliton_dual();
// -(a + 2t) log x1 - (c + 2t) log x2 + b(t) with b' = log((a + 2t)(c + 2t)),
// an exact solution of the Hesse-Koszul flow on the positive quadrant.
FlowFamily separable_log(double a, double c);
// Exact flow from the Normal potential:
// -x1^2 / (4 x2) - (1/2 + 3t) log(-x2) + int_0^t log((1/2 + 3s)/2) ds.
FlowFamily normal_flow();

}  // namespace flow_families

// d_t Phi - log det D_x^2 Phi at (x, t).
double hk_residual(const FlowFamily& family, const Vector& x, double t);

// max_jk |d_t g_jk - 1/2 d_jk L + 1/2 sum_q d_q L d_j g_qk| with g = D_u^2 Phi, L = log det g.
double conj_residual(const FlowFamily& family_dual, const Vector& u, double t);

// |(D psi_t)^T g_t(psi_t(x)) D psi_t - t g_1(x)|_max for the soliton family.
double soliton_pullback_residual(double t, const Vector& x);

struct DualFamilyValue {
  double value = 0.0;  // Fenchel value of the dual of Phi_t at u
  Matrix hessian;      // Hessian of the dual at u, inverse of D^2 Phi_t at the preimage
  Vector preimage;
};
DualFamilyValue dual_family_value(double t, const Vector& u);

struct GridSpec {
  std::array<double, 2> lo{};
  std::array<double, 2> hi{};
  std::array<int, 2> nodes{};

  [[nodiscard]] double spacing(int axis) const { return (hi[axis] - lo[axis]) / (nodes[axis] - 1); }
  [[nodiscard]] double coord(int axis, int i) const { return lo[axis] + i * spacing(axis); }
  [[nodiscard]] int index(int i, int j) const { return i * nodes[1] + j; }
};

using BoundaryClosure = std::function<double(const Vector& x, double t)>;

struct GridState {
  GridSpec grid;
  std::vector<double> phi;
  double time = 0.0;
  int step = 0;
  BoundaryClosure boundary;

  [[nodiscard]] double at(int i, int j) const { return phi[grid.index(i, j)]; }
};

// Samples the closure at time t on every node.
GridState make_grid_state(const GridSpec& grid, const BoundaryClosure& closure, double t = 0.0);

// Largest inverse-Hessian eigenvalue over interior nodes of the discrete Hessian.
double max_inverse_hessian_eigenvalue(const GridState& state);
// 0.2 h^2 / lambda_max with h the smaller spacing.
double stable_dt(const GridState& state);

enum class FlowStatus { Completed, HessianDegenerate };

struct FlowTrajectory {
  std::vector<GridState> snapshots;  // initial state, then every `record_every` steps, then final
  FlowStatus status = FlowStatus::Completed;
  std::string message;

  [[nodiscard]] const GridState& final_state() const { return snapshots.back(); }
};

// Explicit Euler on phi <- phi + dt log det D_h^2 phi at interior nodes with
// the Dirichlet boundary refreshed from the closure. Throws
// StabilityViolation before the first step when dt exceeds stable_dt. A
// non-PD discrete Hessian stops the run and keeps the last valid state.
FlowTrajectory integrate_hk(const GridState& initial, double dt, int steps, int record_every = 0);

// max over interior nodes of |phi - closure(x, t)|.
double max_error(const GridState& state, const BoundaryClosure& exact, int margin = 1);

// Orthogonal MTW values from central differences of grid values (nodes
// within two cells of the boundary are skipped), for `samples` seeded
// random nodes and g-orthogonal direction pairs.
std::vector<double> grid_orthogonal_mtw(const GridState& state, int samples, unsigned long long seed);

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& trajectory);

}  // namespace smlab
