#include "smlab/kahler.hpp"

#include <cmath>

#include "smlab/error.hpp"

namespace smlab {

namespace {

void require_nonzero(const Vector& v) {
  if (!(v.lpNorm<Eigen::Infinity>() > 0.0)) throw Error(ErrorCode::ZeroVector, "direction is zero");
}

double contract(const Tensor4& t, const Vector& a, const Vector& b, const Vector& c, const Vector& d) {
  const int n = t.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) acc += t(i, j, k, l) * a[i] * b[j] * c[k] * d[l];
      }
    }
  }
  return acc;
}

// T_k = sum_ij Phi_ijk a^i b^j
Vector contract3(const Tensor3& t, const Vector& a, const Vector& b) {
  const int n = t.dim();
  Vector out = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) out[k] += t(i, j, k) * a[i] * b[j];
    }
  }
  return out;
}

// log det of a matrix of jets by elimination without pivoting (the matrix is
// positive definite, so every pivot is positive).
Jet log_det(std::vector<std::vector<Jet>> m) {
  const int n = static_cast<int>(m.size());
  Jet acc = Jet::constant(m[0][0].table(), 0.0);
  for (int k = 0; k < n; ++k) {
    acc += log(m[k][k]);
    for (int i = k + 1; i < n; ++i) {
      const Jet f = m[i][k] / m[k][k];
      for (int j = k + 1; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return acc;
}

}  // namespace

KahlerCurvature kahler_curvature(const PotentialSpec& spec, const Vector& x) {
  const Derivatives d = derivatives(spec.program, x, 4);
  const Matrix inv = make_metric(d.hess).inverse;
  const int n = spec.dim;
  KahlerCurvature k{x, Tensor4(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) acc += inv(p, q) * d.d3(i, a, p) * d.d3(j, l, q);
          }
          k.r(i, j, a, l) = (acc - d.d4(i, j, a, l)) / 16.0;
        }
      }
    }
  }
  return k;
}

RicciData ricci(const PotentialSpec& spec, const Vector& x) {
  const int n = spec.dim;
  const Jet phi = jet_eval(spec.program, x, 4);
  std::vector<std::vector<Jet>> h(n, std::vector<Jet>(n));
  for (int i = 0; i < n; ++i) {
    const Jet di = phi.derivative(i);
    for (int j = 0; j < n; ++j) h[i][j] = di.derivative(j);
  }
  Matrix hv(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) hv(i, j) = h[i][j].value();
  }
  const MetricData m = make_metric(hv);
  const Jet ld = log_det(h);
  Matrix hess_ld(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) hess_ld(i, j) = ld.partial({i, j});
  }
  RicciData r;
  r.form = -0.25 * hess_ld;
  r.lifted = -m.inverse * hess_ld;
  r.potential = -ld.value();
  r.scalar = r.lifted.trace();
  return r;
}

double holo_sectional(const PotentialSpec& spec, const Vector& x, const Vector& v) {
  require_nonzero(v);
  const KahlerCurvature k = kahler_curvature(spec, x);
  const Matrix g = 0.25 * metric(spec, x).g;
  const double norm2 = v.dot(g * v);
  return contract(k.r, v, v, v, v) / (norm2 * norm2);
}

double orth_bisectional(const PotentialSpec& spec, const Vector& x, const Vector& v, const Vector& w) {
  require_nonzero(v);
  require_nonzero(w);
  const Matrix g = 0.25 * metric(spec, x).g;
  const double vv = v.dot(g * v);
  const double ww = w.dot(g * w);
  if (std::abs(v.dot(g * w)) >= 1e-10 * std::sqrt(vv * ww)) {
    throw Error(ErrorCode::NotOrthogonal, "bisectional directions are not orthogonal");
  }
  const KahlerCurvature k = kahler_curvature(spec, x);
  return contract(k.r, v, v, w, w) / (vv * ww);
}

double mtw(const Derivatives& d, const Matrix& inverse, const Vector& xi, const Vector& eta) {
  require_nonzero(xi);
  require_nonzero(eta);
  const Vector a = contract3(d.d3, xi, xi);
  const Vector b = contract3(d.d3, eta, eta);
  return a.dot(inverse * b) - contract(d.d4, xi, xi, eta, eta);
}

double mtw(const PotentialSpec& spec, const Vector& x, const Vector& xi, const Vector& eta) {
  const Derivatives d = derivatives(spec.program, x, 4);
  return mtw(d, make_metric(d.hess).inverse, xi, eta);
}

double mirror_w(const PotentialSpec& spec, const Vector& x, const Vector& u, const Vector& v, MirrorSigns signs) {
  require_nonzero(u);
  require_nonzero(v);
  const Derivatives d = derivatives(spec.program, x, 4);
  const Matrix inv = make_metric(d.hess).inverse;
  // Raised covectors a^alpha = Phi^{i alpha} u_i, b^gamma = Phi^{gamma k} v_k.
  const Vector a = inv * u;
  const Vector b = inv * v;
  const Vector c = contract3(d.d3, a, a);  // Phi_{alpha beta gamma} a a
  const Vector e = contract3(d.d3, b, b);  // Phi_{eps zeta eta} b b
  const Vector p = contract3(d.d3, a, b);  // Phi_{alpha beta gamma} a b

  const double first = contract(d.d4, a, a, b, b);
  const double second = c.dot(inv * e);
  // d_delta Phi^{ij} = -Phi^{ia} Phi_{ab delta} Phi^{bj}; the product rule
  // gives two terms through the u-slots and one through the v-slot.
  const double correction = -2.0 * p.dot(inv * p) - c.dot(inv * e);
  if (signs == MirrorSigns::Corrected) return first + second + correction;
  return -first + second - correction;
}

Vector random_direction(Rng& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

std::pair<Vector, Vector> random_orthogonal_pair(Rng& rng, const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  while (true) {
    const Vector v = random_direction(rng, n);
    const Vector w = random_direction(rng, n);
    const Vector orth = w - (v.dot(g * w) / v.dot(g * v)) * v;
    if (orth.norm() < 1e-6) continue;
    return {v, orth / orth.norm()};
  }
}

}  // namespace smlab
