#include "smlab/hessian.hpp"

#include <cmath>
#include <limits>

#include "smlab/error.hpp"

namespace smlab {

MetricData make_metric(const Matrix& g) {
  MetricData m;
  m.dim = static_cast<int>(g.rows());
  m.g = 0.5 * (g + g.transpose());
  m.cholesky.compute(m.g);
  if (m.cholesky.info() != Eigen::Success || !m.g.allFinite()) {
    throw Error(ErrorCode::NotPositiveDefinite, "metric matrix is not positive definite");
  }
  m.inverse = m.cholesky.solve(Matrix::Identity(m.dim, m.dim));
  m.inverse = 0.5 * (m.inverse + m.inverse.transpose());
  return m;
}

MetricData metric(const PotentialSpec& spec, const Vector& x) {
  return make_metric(derivatives(spec.program, x, 2).hess);
}

Vector grad_map(const PotentialSpec& spec, const Vector& x) {
  return derivatives(spec.program, x, 1).grad;
}

Vector inverse_grad_map(const PotentialSpec& spec, const Vector& u, const std::optional<Vector>& seed,
                        const NewtonOptions& options) {
  if (u.size() != spec.dim) throw Error(ErrorCode::WrongDimension, spec.name + ": dual point dimension");
  Vector x = seed ? *seed : spec.reference_point;
  if (!spec.contains(x)) throw Error(ErrorCode::DomainViolation, spec.name + ": Newton seed outside the domain");
  const double tol = options.tolerance * std::max(1.0, u.lpNorm<Eigen::Infinity>());

  // Merit psi(x) = Phi(x) - <u, x>; its minimiser solves grad Phi = u and the
  // Newton direction is a descent direction wherever the Hessian is PD.
  for (int it = 0; it < options.max_iterations; ++it) {
    const Derivatives d = derivatives(spec.program, x, 2);
    const Vector r = d.grad - u;
    if (r.lpNorm<Eigen::Infinity>() < tol) return x;
    Eigen::LLT<Matrix> llt(d.hess);
    if (llt.info() != Eigen::Success || !d.hess.allFinite()) {
      // Only happens when iterates run into the boundary, i.e. u is not in the image.
      throw Error(ErrorCode::LeftDomain, spec.name + ": Hessian degenerates along the Newton path");
    }
    const Vector dx = -llt.solve(r);
    const double psi = d.value - u.dot(x);
    const double slope = r.dot(dx);
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(psi) + 1.0);

    double t = 1.0;
    bool any_inside = false;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Vector y = x + t * dx;
      if (!spec.contains(y)) continue;
      any_inside = true;
      const double psi_y = eval_value(spec.program, y) - u.dot(y);
      if (psi_y <= psi + 1e-4 * t * slope + slack) {
        x = y;
        accepted = true;
        break;
      }
    }
    if (!any_inside) {
      throw Error(ErrorCode::LeftDomain, spec.name + ": Newton step cannot stay inside the domain");
    }
    if (!accepted) break;
  }
  const Vector r = grad_map(spec, x) - u;
  if (r.lpNorm<Eigen::Infinity>() < tol) return x;
  throw Error(ErrorCode::NotConverged, spec.name + ": Newton inversion of the gradient map did not converge");
}

double legendre_value(const PotentialSpec& spec, const Vector& u, const std::optional<Vector>& seed) {
  const Vector x = inverse_grad_map(spec, u, seed);
  return x.dot(u) - eval_value(spec.program, x);
}

Tensor4 riemann(const Derivatives& d, const Matrix& inverse) {
  const int n = d.dim;
  Tensor4 r(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) {
              acc += inverse(p, q) * (d.d3(j, l, p) * d.d3(i, k, q) - d.d3(i, l, p) * d.d3(j, k, q));
            }
          }
          r(i, j, k, l) = -0.25 * acc;
        }
      }
    }
  }
  return r;
}

Tensor4 riemann(const PotentialSpec& spec, const Vector& x) {
  const Derivatives d = derivatives(spec.program, x, 3);
  return riemann(d, make_metric(d.hess).inverse);
}

double sectional(const PotentialSpec& spec, const Vector& x, const Vector& v, const Vector& w) {
  const Derivatives d = derivatives(spec.program, x, 3);
  const MetricData m = make_metric(d.hess);
  const double vv = v.dot(m.g * v);
  const double ww = w.dot(m.g * w);
  const double vw = v.dot(m.g * w);
  const double area = vv * ww - vw * vw;
  if (!(area > 1e-14 * vv * ww)) throw Error(ErrorCode::DegeneratePlane, "sectional: vectors are dependent");
  const Tensor4 r = riemann(d, m.inverse);
  const int n = spec.dim;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) acc += r(i, j, k, l) * v[i] * w[j] * v[k] * w[l];
      }
    }
  }
  return acc / area;
}

MetricField hessian_metric_field(const PotentialSpec& spec) {
  return [spec](const Vector& x) { return metric(spec, x); };
}

MetricField pullback_field(const MetricField& metric_dst, const ChartMap& map) {
  return [metric_dst, map](const Vector& x) {
    const Matrix j = map.jacobian(x);
    return make_metric(j.transpose() * metric_dst(map.apply(x)).g * j);
  };
}

double pullback_residual(const MetricField& metric_src, const MetricField& metric_dst, const ChartMap& map,
                         const Vector& x) {
  const Matrix j = map.jacobian(x);
  const Vector y = map.apply(x);
  const Matrix pulled = j.transpose() * metric_dst(y).g * j;
  return (pulled - metric_src(x).g).lpNorm<Eigen::Infinity>();
}

namespace {

// Taylor jet of Phi* around u0 of the given order, in dim variables.
Jet dual_series(const PotentialSpec& primal, const Vector& u0, int order) {
  const int n = primal.dim;
  const Vector x0 = inverse_grad_map(primal, u0);
  const auto& out_tab = MonomialTable::get(n, order);
  Jet result = Jet::constant(out_tab, x0.dot(u0) - eval_value(primal.program, x0));
  if (order == 0) return result;

  // x(u0 + du) - x0 to order-1 by fixed point iteration on
  // dx = H^-1 (du - (G(dx) - H dx)), G(dx) = grad Phi(x0 + dx) - u0.
  const int xorder = order - 1;
  const Jet phi = jet_eval(primal.program, x0, xorder + 1);
  const auto& xtab = MonomialTable::get(n, xorder);
  std::vector<Jet> grad_poly;
  for (int i = 0; i < n; ++i) grad_poly.push_back(phi.derivative(i));
  const Derivatives d0 = derivatives(primal.program, x0, 2);
  const Matrix hinv = make_metric(d0.hess).inverse;

  std::vector<Jet> du;
  for (int i = 0; i < n; ++i) du.push_back(Jet::variable(xtab, i, 0.0));
  std::vector<Jet> dx(n, Jet::constant(xtab, 0.0));
  for (int iter = 0; iter <= xorder; ++iter) {
    std::vector<Jet> nonlinear;
    for (int i = 0; i < n; ++i) {
      Jet gi = compose(grad_poly[i], dx) - u0[i];
      for (int j = 0; j < n; ++j) gi -= d0.hess(i, j) * dx[j];
      nonlinear.push_back(du[i] - gi);
    }
    std::vector<Jet> next;
    for (int i = 0; i < n; ++i) {
      Jet acc = Jet::constant(xtab, 0.0);
      for (int j = 0; j < n; ++j) acc += hinv(i, j) * nonlinear[j];
      next.push_back(acc);
    }
    dx = std::move(next);
  }

  // d Phi*/d u_i = x_i, so the coefficient of u^m is (x_i)_{m - e_i} / m_i.
  for (int idx = 1; idx < out_tab.size(); ++idx) {
    Exponent m = out_tab.exponent(idx);
    int i = 0;
    while (m[i] == 0) ++i;
    const double mi = m[i];
    m[i] -= 1;
    const int src = xtab.index_of(m);
    const double coeff = (src == 0 ? x0[i] : 0.0) + dx[i].coeffs()[src];
    result.coeffs()[idx] = coeff / mi;
  }
  return result;
}

}  // namespace

PotentialSpec numeric_dual(const PotentialSpec& spec) {
  auto primal = std::make_shared<const PotentialSpec>(spec);
  PotentialSpec dual;
  dual.name = spec.name + "-numeric-dual";
  dual.dim = spec.dim;
  dual.program.name = dual.name;
  dual.program.dim = spec.dim;
  dual.program.inside = [primal](std::span<const double> u) {
    Vector v = Eigen::Map<const Vector>(u.data(), static_cast<Eigen::Index>(u.size()));
    try {
      (void)inverse_grad_map(*primal, v);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  dual.program.eval = [primal](std::span<const Jet> u) {
    const int n = primal->dim;
    Vector u0(n);
    for (int i = 0; i < n; ++i) u0[i] = u[i].value();
    const Jet series = dual_series(*primal, u0, u[0].order());
    return compose(series, u);
  };
  dual.reference_point = grad_map(spec, spec.reference_point);
  dual.sampler = [primal](Rng& rng) { return grad_map(*primal, primal->sample(rng)); };
  dual.dual = primal;
  dual.flat = spec.flat;
  return dual;
}

PotentialSpec dual_spec(const PotentialSpec& spec) {
  if (spec.dual) return *spec.dual;
  return numeric_dual(spec);
}

}  // namespace smlab
