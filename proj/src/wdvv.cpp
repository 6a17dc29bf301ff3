#include "smlab/wdvv.hpp"

#include <cmath>

#include "smlab/error.hpp"

namespace smlab {
namespace {

struct Local {
  Derivatives d;
  MetricData m;
};

Local local(const PotentialSpec& spec, const Vector& x) {
  if (x.size() != spec.dim || !spec.contains(x)) throw Error(ErrorCode::DomainViolation, spec.name + ": point outside domain");
  Derivatives d = derivatives(spec.program, x, 3);
  MetricData m = make_metric(d.hess);
  return {std::move(d), std::move(m)};
}

double contract_scalar(const Tensor4& w, const Matrix& inv) {
  const int n = w.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += inv(i, k) * inv(j, l) * w(i, j, k, l);
  return acc;
}

Matrix contract_ricci(const Tensor4& w, const Matrix& inv) {
  const int n = w.dim();
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) out(i, k) += inv(j, l) * w(i, j, k, l);
  return out;
}

}  // namespace

Tensor4 wdvv_tensor(const Derivatives& d, const Matrix& inverse) {
  const int n = d.dim;
  Tensor4 w(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double lhs = 0.0;
          double rhs = 0.0;
          for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) {
              lhs += inverse(p, q) * d.d3(j, l, p) * d.d3(i, k, q);
              rhs += d.d3(i, l, p) * d.d3(j, k, q) * inverse(p, q);
            }
          }
          w(i, j, k, l) = lhs - rhs;
        }
      }
    }
  }
  return w;
}

double wdvv_residual(const PotentialSpec& spec, const Vector& x) {
  const Local loc = local(spec, x);
  return wdvv_tensor(loc.d, loc.m.inverse).max_abs();
}

double wdvv_scalar_residual(const PotentialSpec& spec, const Vector& x) {
  if (spec.dim != 2) throw Error(ErrorCode::WrongDimension, "wdvv_scalar_residual needs n = 2");
  const Local loc = local(spec, x);
  return contract_scalar(wdvv_tensor(loc.d, loc.m.inverse), loc.m.inverse);
}

Matrix wdvv_ricci_residual(const PotentialSpec& spec, const Vector& x) {
  if (spec.dim != 3) throw Error(ErrorCode::WrongDimension, "wdvv_ricci_residual needs n = 3");
  const Local loc = local(spec, x);
  return contract_ricci(wdvv_tensor(loc.d, loc.m.inverse), loc.m.inverse);
}

double totaro_consistency(const PotentialSpec& spec, const Vector& x) {
  const Local loc = local(spec, x);
  const Tensor4 w = wdvv_tensor(loc.d, loc.m.inverse);
  const Tensor4 r = riemann(loc.d, loc.m.inverse);
  const int n = spec.dim;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) worst = std::max(worst, std::abs(w(i, j, k, l) + 4.0 * r(i, j, k, l)));
  return worst;
}

WdvvReport wdvv_report(const PotentialSpec& spec, const Vector& x) {
  const Local loc = local(spec, x);
  const Tensor4 w = wdvv_tensor(loc.d, loc.m.inverse);
  WdvvReport out;
  out.point = x;
  out.residual = w.max_abs();
  if (spec.dim == 2) out.scalar_residual = contract_scalar(w, loc.m.inverse);
  if (spec.dim == 3) out.ricci_residual = contract_ricci(w, loc.m.inverse);
  out.totaro = totaro_consistency(spec, x);
  return out;
}

LegendreWdvvReport legendre_wdvv_check(const PotentialSpec& spec, int samples, Rng& rng) {
  const PotentialSpec dual = dual_spec(spec);
  LegendreWdvvReport out;
  out.dual_name = dual.name;
  out.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const Vector u = grad_map(spec, spec.sample(rng));
    out.max_residual = std::max(out.max_residual, wdvv_residual(dual, u));
  }
  return out;
}

}  // namespace smlab
