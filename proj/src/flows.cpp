#include "smlab/flows.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "smlab/catalogue.hpp"
#include "smlab/error.hpp"
#include "smlab/kahler.hpp"

namespace smlab {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vector with_time(const Vector& x, double t) {
  Vector xt(x.size() + 1);
  xt << x, t;
  return xt;
}

FlowFamily make_family(std::string name, int dim, std::function<bool(std::span<const double>)> inside,
                       std::function<Jet(std::span<const Jet>)> eval, Sampler sampler) {
  FlowFamily f;
  f.name = name;
  f.dim = dim;
  f.program = JetProgram{std::move(name), dim + 1, std::move(inside), std::move(eval)};
  f.sampler = std::move(sampler);
  return f;
}

}  // namespace

double FlowFamily::value(const Vector& x, double t) const { return eval_value(program, with_time(x, t)); }

PotentialSpec FlowFamily::at_time(double t) const {
  PotentialSpec spec;
  spec.name = name + "@t";
  spec.dim = dim;
  const JetProgram full = program;
  const int n = dim;
  spec.program.name = spec.name;
  spec.program.dim = n;
  spec.program.inside = [full, t, n](std::span<const double> x) {
    std::vector<double> xt(x.begin(), x.end());
    xt.push_back(t);
    return full.inside(std::span<const double>(xt.data(), xt.size()));
  };
  spec.program.eval = [full, t](std::span<const Jet> x) {
    std::vector<Jet> xt(x.begin(), x.end());
    xt.push_back(Jet::constant(x[0].table(), t));
    return full.eval(xt);
  };
  const FlowFamily self = *this;
  spec.sampler = [self, t](Rng& rng) {
    const Vector xt = self.sampler(rng);
    return Vector(xt.head(self.dim));
  };
  Rng rng(1);
  spec.reference_point = spec.sampler(rng);
  for (int tries = 0; tries < 100 && !spec.contains(spec.reference_point); ++tries) {
    spec.reference_point = spec.sampler(rng);
  }
  return spec;
}

namespace flow_families {

FlowFamily static_potential(const PotentialSpec& spec) {
  const PotentialSpec base = spec;
  return make_family(
      "static-" + spec.name, spec.dim,
      [base](std::span<const double> xt) { return base.program.inside(xt.first(xt.size() - 1)); },
      [base](std::span<const Jet> xt) { return base.program.eval(xt.first(xt.size() - 1)); },
      [base](Rng& rng) { return with_time(base.sample(rng), uniform(rng, 0.0, 5.0)); });
}

FlowFamily anisotropic(double a, double b) {
  return make_family(
      "aniso", 2, [](std::span<const double>) { return true; },
      [a, b](std::span<const Jet> v) {
        return 0.5 * (a * square(v[0]) + b * square(v[1])) + std::log(a * b) * v[2];
      },
      [](Rng& rng) {
        Vector v(3);
        v << uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0), uniform(rng, 0.0, 5.0);
        return v;
      });
}

FlowFamily anisotropic_dual(double a, double b) {
  return make_family(
      "aniso-dual", 2, [](std::span<const double>) { return true; },
      [a, b](std::span<const Jet> v) {
        return 0.5 * (square(v[0]) / a + square(v[1]) / b) - std::log(a * b) * v[2];
      },
      [](Rng& rng) {
        Vector v(3);
        v << uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0), uniform(rng, 0.0, 5.0);
        return v;
      });
}

FlowFamily soliton() {
  return make_family(
      "soliton", 2, [](std::span<const double> v) { return v[1] < 0.0 && v[2] > 0.0; },
      [](std::span<const Jet> v) { return -square(v[0]) / (4.0 * v[1]) - v[2] * log(-v[1]); },
      [](Rng& rng) {
        Vector v(3);
        v << uniform(rng, -2.0, 2.0), uniform(rng, -2.0, -0.2), uniform(rng, 0.1, 10.0);
        return v;
      });
}

FlowFamily soliton_dual() {
  return make_family(
      "soliton-dual", 2, [](std::span<const double> v) { return v[1] > v[0] * v[0] && v[2] > 0.0; },
      [](std::span<const Jet> v) { return -v[2] + v[2] * log(v[2]) - v[2] * log(v[1] - square(v[0])); },
      [](Rng& rng) {
        const double x1 = uniform(rng, -2.0, 2.0);
        const double x2 = uniform(rng, -2.0, -0.2);
        const double t = uniform(rng, 0.1, 10.0);
        Vector v(3);
        v << -x1 / (2.0 * x2), x1 * x1 / (4.0 * x2 * x2) - t / x2, t;
        return v;
      });
}

FlowFamily separable_log(double a, double c) {
  return make_family(
      "separable-log", 2, [](std::span<const double> v) { return v[0] > 0.0 && v[1] > 0.0 && v[2] >= 0.0; },
      [a, c](std::span<const Jet> v) {
        const Jet& t = v[2];
        const Jet ka = a + 2.0 * t;
        const Jet kc = c + 2.0 * t;
        // b(t) = sum over k in {a, c} of ((k + 2t) log(k + 2t) - (k + 2t) - k log k + k) / 2
        const Jet b = 0.5 * (ka * log(ka) - ka + kc * log(kc) - kc) -
                      0.5 * (a * std::log(a) - a + c * std::log(c) - c);
        return -ka * log(v[0]) - kc * log(v[1]) + b;
      },
      [](Rng& rng) {
        Vector v(3);
        v << uniform(rng, 0.5, 3.0), uniform(rng, 0.5, 3.0), uniform(rng, 0.0, 2.0);
        return v;
      });
}

FlowFamily normal_flow() {
  return make_family(
      "normal-flow", 2, [](std::span<const double> v) { return v[1] < 0.0 && v[2] >= 0.0; },
      [](std::span<const Jet> v) {
        const Jet k = 0.5 + 3.0 * v[2];
        // int_0^t log((1/2 + 3s)/2) ds = int_0^t log(1/4 + 3s/2) ds
        const Jet y = 0.25 + 1.5 * v[2];
        const Jet integral = (y * log(y) - y) / 1.5 - (0.25 * std::log(0.25) - 0.25) / 1.5;
        return -square(v[0]) / (4.0 * v[1]) - k * log(-v[1]) + integral;
      },
      [](Rng& rng) {
        Vector v(3);
        v << uniform(rng, -2.0, 2.0), uniform(rng, -2.0, -0.2), uniform(rng, 0.0, 1.0);
        return v;
      });
}

}  // namespace flow_families

double hk_residual(const FlowFamily& family, const Vector& x, double t) {
  const Derivatives d = derivatives(family.program, with_time(x, t), 2);
  const int n = family.dim;
  const Matrix h = d.hess.topLeftCorner(n, n);
  const MetricData m = make_metric(h);
  double logdet = 0.0;
  const Matrix l = m.cholesky.matrixL();
  for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(l(i, i));
  return d.grad[n] - logdet;
}

double conj_residual(const FlowFamily& family_dual, const Vector& u, double t) {
  const int n = family_dual.dim;
  const Jet phi = jet_eval(family_dual.program, with_time(u, t), 4);
  // Spatial Hessian as order-2 jets in (u, t), then log det by elimination.
  std::vector<std::vector<Jet>> g(n, std::vector<Jet>(n));
  for (int i = 0; i < n; ++i) {
    const Jet di = phi.derivative(i);
    for (int j = 0; j < n; ++j) g[i][j] = di.derivative(j);
  }
  std::vector<std::vector<Jet>> work = g;
  Jet logdet = Jet::constant(g[0][0].table(), 0.0);
  for (int k = 0; k < n; ++k) {
    logdet += log(work[k][k]);
    for (int i = k + 1; i < n; ++i) {
      const Jet f = work[i][k] / work[k][k];
      for (int j = k + 1; j < n; ++j) work[i][j] -= f * work[k][j];
    }
  }
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double r = g[j][k].partial({n}) - 0.5 * logdet.partial({j, k});
      for (int q = 0; q < n; ++q) r += 0.5 * logdet.partial({q}) * g[q][k].partial({j});
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

double soliton_pullback_residual(double t, const Vector& x) {
  if (!(t > 0.0)) throw Error(ErrorCode::RangeViolation, "soliton time must be positive");
  const FlowFamily family = flow_families::soliton();
  const MetricField g_t = hessian_metric_field(family.at_time(t));
  const MetricField g_1 = hessian_metric_field(family.at_time(1.0));
  const MetricField scaled = [g_1, t](const Vector& y) { return make_metric(t * g_1(y).g); };
  return pullback_residual(scaled, g_t, catalogue::soliton_dilation(t), x);
}

DualFamilyValue dual_family_value(double t, const Vector& u) {
  if (!(t > 0.0)) throw Error(ErrorCode::RangeViolation, "flow time must be positive");
  PotentialSpec spec = flow_families::soliton().at_time(t);
  Vector seed(2);
  seed << 0.0, -t;
  spec.reference_point = seed;
  DualFamilyValue out;
  out.preimage = inverse_grad_map(spec, u);
  out.value = out.preimage.dot(u) - eval_value(spec.program, out.preimage);
  out.hessian = metric(spec, out.preimage).inverse;
  return out;
}

GridState make_grid_state(const GridSpec& grid, const BoundaryClosure& closure, double t) {
  if (grid.nodes[0] < 5 || grid.nodes[1] < 5) throw Error(ErrorCode::RangeViolation, "grid needs at least 5 nodes per axis");
  GridState s;
  s.grid = grid;
  s.time = t;
  s.boundary = closure;
  s.phi.resize(static_cast<std::size_t>(grid.nodes[0] * grid.nodes[1]));
  Vector x(2);
  for (int i = 0; i < grid.nodes[0]; ++i) {
    for (int j = 0; j < grid.nodes[1]; ++j) {
      x << grid.coord(0, i), grid.coord(1, j);
      s.phi[grid.index(i, j)] = closure(x, t);
    }
  }
  return s;
}

namespace {

Eigen::Matrix2d discrete_hessian(const GridState& s, int i, int j) {
  const double h0 = s.grid.spacing(0);
  const double h1 = s.grid.spacing(1);
  Eigen::Matrix2d h;
  h(0, 0) = (s.at(i + 1, j) - 2.0 * s.at(i, j) + s.at(i - 1, j)) / (h0 * h0);
  h(1, 1) = (s.at(i, j + 1) - 2.0 * s.at(i, j) + s.at(i, j - 1)) / (h1 * h1);
  h(0, 1) = (s.at(i + 1, j + 1) - s.at(i + 1, j - 1) - s.at(i - 1, j + 1) + s.at(i - 1, j - 1)) / (4.0 * h0 * h1);
  h(1, 0) = h(0, 1);
  return h;
}

}  // namespace

double max_inverse_hessian_eigenvalue(const GridState& state) {
  double lambda = 0.0;
  for (int i = 1; i + 1 < state.grid.nodes[0]; ++i) {
    for (int j = 1; j + 1 < state.grid.nodes[1]; ++j) {
      const Eigen::Matrix2d h = discrete_hessian(state, i, j);
      const double lo = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h, Eigen::EigenvaluesOnly).eigenvalues()[0];
      if (!(lo > 0.0)) {
        throw Error(ErrorCode::HessianDegenerate, "discrete Hessian is not positive definite");
      }
      lambda = std::max(lambda, 1.0 / lo);
    }
  }
  return lambda;
}

double stable_dt(const GridState& state) {
  const double h = std::min(state.grid.spacing(0), state.grid.spacing(1));
  return 0.2 * h * h / max_inverse_hessian_eigenvalue(state);
}

FlowTrajectory integrate_hk(const GridState& initial, double dt, int steps, int record_every) {
  if (!(dt > 0.0) || steps < 1) throw Error(ErrorCode::RangeViolation, "dt and steps must be positive");
  const double bound = stable_dt(initial);
  if (dt > bound * (1.0 + 1e-12)) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "dt = %.6g exceeds the stability bound %.6g", dt, bound);
    throw Error(ErrorCode::StabilityViolation, msg);
  }
  FlowTrajectory traj;
  traj.snapshots.push_back(initial);
  GridState cur = initial;
  GridState next = initial;
  const auto& grid = initial.grid;
  Vector x(2);
  for (int step = 1; step <= steps; ++step) {
    bool degenerate = false;
    for (int i = 1; i + 1 < grid.nodes[0] && !degenerate; ++i) {
      for (int j = 1; j + 1 < grid.nodes[1]; ++j) {
        const Eigen::Matrix2d h = discrete_hessian(cur, i, j);
        const double det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
        if (!(h(0, 0) > 0.0 && det > 0.0)) {
          degenerate = true;
          break;
        }
        next.phi[grid.index(i, j)] = cur.at(i, j) + dt * std::log(det);
      }
    }
    if (degenerate) {
      traj.status = FlowStatus::HessianDegenerate;
      traj.message = "discrete Hessian lost positive definiteness at step " + std::to_string(step);
      if (traj.snapshots.back().step != cur.step) traj.snapshots.push_back(cur);
      return traj;
    }
    next.time = initial.time + step * dt;
    next.step = step;
    for (int i = 0; i < grid.nodes[0]; ++i) {
      for (int j = 0; j < grid.nodes[1]; ++j) {
        if (i == 0 || j == 0 || i + 1 == grid.nodes[0] || j + 1 == grid.nodes[1]) {
          x << grid.coord(0, i), grid.coord(1, j);
          next.phi[grid.index(i, j)] = initial.boundary(x, next.time);
        }
      }
    }
    std::swap(cur, next);
    if ((record_every > 0 && step % record_every == 0) || step == steps) traj.snapshots.push_back(cur);
  }
  return traj;
}

double max_error(const GridState& state, const BoundaryClosure& exact, int margin) {
  double worst = 0.0;
  Vector x(2);
  for (int i = margin; i + margin < state.grid.nodes[0]; ++i) {
    for (int j = margin; j + margin < state.grid.nodes[1]; ++j) {
      x << state.grid.coord(0, i), state.grid.coord(1, j);
      worst = std::max(worst, std::abs(state.at(i, j) - exact(x, state.time)));
    }
  }
  return worst;
}

std::vector<double> grid_orthogonal_mtw(const GridState& state, int samples, unsigned long long seed) {
  const auto& grid = state.grid;
  if (grid.nodes[0] < 5 || grid.nodes[1] < 5) return {};
  const double h[2] = {grid.spacing(0), grid.spacing(1)};
  // 1-D central difference weights at offsets -2..2 for derivative orders 0..4.
  static const double w[5][5] = {{0, 0, 1, 0, 0},
                                 {0, -0.5, 0, 0.5, 0},
                                 {0, 1, -2, 1, 0},
                                 {-0.5, 1, 0, -1, 0.5},
                                 {1, -4, 6, -4, 1}};
  auto partial = [&](int i, int j, int a, int b) {
    double acc = 0.0;
    for (int p = -2; p <= 2; ++p) {
      if (w[a][p + 2] == 0.0) continue;
      for (int q = -2; q <= 2; ++q) {
        if (w[b][q + 2] == 0.0) continue;
        acc += w[a][p + 2] * w[b][q + 2] * state.at(i + p, j + q);
      }
    }
    return acc / (std::pow(h[0], a) * std::pow(h[1], b));
  };
  Rng rng(seed);
  std::uniform_int_distribution<int> pick_i(2, grid.nodes[0] - 3);
  std::uniform_int_distribution<int> pick_j(2, grid.nodes[1] - 3);
  std::vector<double> out;
  out.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    const int i = pick_i(rng);
    const int j = pick_j(rng);
    Derivatives d;
    d.dim = 2;
    d.order = 4;
    d.hess.resize(2, 2);
    d.d3 = Tensor3(2);
    d.d4 = Tensor4(2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) d.hess(a, b) = partial(i, j, (a == 0) + (b == 0), (a == 1) + (b == 1));
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int c = 0; c < 2; ++c) {
          const int n0 = (a == 0) + (b == 0) + (c == 0);
          d.d3(a, b, c) = partial(i, j, n0, 3 - n0);
          for (int e = 0; e < 2; ++e) {
            const int m0 = n0 + (e == 0);
            d.d4(a, b, c, e) = partial(i, j, m0, 4 - m0);
          }
        }
      }
    }
    const MetricData m = make_metric(d.hess);
    const auto [v, u] = random_orthogonal_pair(rng, m.g);
    out.push_back(mtw(d, m.inverse, v, u));
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& trajectory) {
  out << "step,t,x1,x2,phi\n";
  char line[192];
  for (const auto& s : trajectory.snapshots) {
    for (int i = 0; i < s.grid.nodes[0]; ++i) {
      for (int j = 0; j < s.grid.nodes[1]; ++j) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g\n", s.step, s.time, s.grid.coord(0, i),
                      s.grid.coord(1, j), s.at(i, j));
        out << line;
      }
    }
  }
}

}  // namespace smlab
