#include <cmath>

#include <gtest/gtest.h>

#include "smlab/catalogue.hpp"
#include "smlab/error.hpp"
#include "smlab/hessian.hpp"

using namespace smlab;

namespace {

Vector v2(double a, double b) {
  Vector x(2);
  x << a, b;
  return x;
}

std::vector<PotentialSpec> legendre_catalogue() {
  return {catalogue::normal(),       catalogue::normal_dual(),      catalogue::isomulnor(3),
          catalogue::negtri(),       catalogue::negtri_dual(),      catalogue::invgau(),
          catalogue::invgau_dual(),  catalogue::simplex(2),         catalogue::simplex_dual(3),
          catalogue::quadratic(2),   catalogue::coshlog(),          catalogue::coslog(),
          catalogue::cone(),         catalogue::cone_dual(),        catalogue::log_orthant(3),
          catalogue::log_orthant_dual(2), catalogue::random_convex(3, 5)};
}

}  // namespace

TEST(Metric, NormalAtReference) {
  const MetricData m = metric(catalogue::normal(), v2(0.0, -0.5));
  EXPECT_NEAR(m.g(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(m.g(0, 1), 0.0, 1e-14);
  EXPECT_NEAR(m.g(1, 1), 2.0, 1e-14);
  EXPECT_LT((m.g * m.inverse - Matrix::Identity(2, 2)).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Metric, NormalDualAtReference) {
  const MetricData m = metric(catalogue::normal_dual(), v2(0.0, 1.0));
  EXPECT_NEAR(m.g(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(m.g(0, 1), 0.0, 1e-14);
  EXPECT_NEAR(m.g(1, 1), 0.5, 1e-14);
}

TEST(Metric, QuadraticIsIdentity) {
  const MetricData m = metric(catalogue::quadratic(3), Vector::Constant(3, 1.7));
  EXPECT_LT((m.g - Matrix::Identity(3, 3)).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(Metric, IndefiniteMatrixRejected) {
  Matrix g(2, 2);
  g << 1.0, 2.0, 2.0, 1.0;
  try {
    (void)make_metric(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
}

TEST(GradMap, Examples) {
  EXPECT_LT((grad_map(catalogue::normal(), v2(0.0, -0.5)) - v2(0.0, 1.0)).norm(), 1e-15);
  const double q = std::log(0.25);
  EXPECT_LT((grad_map(catalogue::negtri(), v2(q, q)) - v2(0.5, 0.5)).norm(), 1e-14);
  EXPECT_LT((grad_map(catalogue::quadratic(2), v2(0.3, -2.0)) - v2(0.3, -2.0)).norm(), 1e-15);
}

TEST(InverseGradMap, Examples) {
  EXPECT_LT((inverse_grad_map(catalogue::normal(), v2(0.0, 1.0)) - v2(0.0, -0.5)).norm(), 1e-12);
  const double q = std::log(0.25);
  EXPECT_LT((inverse_grad_map(catalogue::negtri(), v2(0.5, 0.5)) - v2(q, q)).norm(), 1e-12);
  EXPECT_LT((inverse_grad_map(catalogue::quadratic(2), v2(4.0, -1.0)) - v2(4.0, -1.0)).norm(), 1e-12);
}

TEST(InverseGradMap, OutsideImageFails) {
  // u2 <= u1^2 is not in the image of the Normal gradient map.
  try {
    (void)inverse_grad_map(catalogue::normal(), v2(1.0, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::LeftDomain || e.code() == ErrorCode::NotConverged) << e.what();
  }
}

TEST(LegendreValue, Examples) {
  // The log-partition carries 1/2 log(2 pi) at (0, -1/2).
  EXPECT_NEAR(legendre_value(catalogue::normal(), v2(0.0, 1.0)), -0.5 - 0.5 * std::log(2.0 * M_PI), 1e-12);
  EXPECT_NEAR(legendre_value(catalogue::negtri(), v2(0.5, 0.5)), -3.0 * std::log(2.0), 1e-12);
  // InvGau at (mu, lambda) = (1, 1): eta = (1/4, 2).
  EXPECT_NEAR(legendre_value(catalogue::invgau(), v2(0.25, 2.0)), -0.5 + 0.5 * std::log(0.5), 1e-12);
}

TEST(Legendre, FenchelInvolutionAndDualHessian) {
  Rng rng(404);
  for (const auto& spec : legendre_catalogue()) {
    const PotentialSpec dual = dual_spec(spec);
    for (int s = 0; s < 25; ++s) {
      const Vector x = spec.sample(rng);
      const Derivatives d = derivatives(spec.program, x, 2);
      const Vector u = d.grad;
      const double fenchel = legendre_value(spec, u) + d.value - x.dot(u);
      EXPECT_LT(std::abs(fenchel), 1e-10 * std::max(1.0, std::abs(x.dot(u)))) << spec.name;
      EXPECT_LT((inverse_grad_map(spec, u) - x).lpNorm<Eigen::Infinity>(), 1e-9) << spec.name;
      EXPECT_LT((grad_map(dual, u) - x).lpNorm<Eigen::Infinity>(), 1e-9) << spec.name;
      const Matrix hinv = make_metric(d.hess).inverse;
      const Matrix hdual = metric(dual, u).g;
      EXPECT_LT((hdual - hinv).lpNorm<Eigen::Infinity>(), 1e-8 * std::max(1.0, hinv.lpNorm<Eigen::Infinity>()))
          << spec.name;
    }
  }
}

TEST(Legendre, DarbouxJacobianIsMetric) {
  // The Jacobian of the gradient map, read off the order-2 jet of each
  // gradient component, is the metric matrix itself.
  const auto spec = catalogue::invgau();
  Rng rng(9);
  for (int s = 0; s < 20; ++s) {
    const Vector x = spec.sample(rng);
    const Jet j = jet_eval(spec.program, x, 2);
    Matrix jac(2, 2);
    for (int i = 0; i < 2; ++i) {
      const Jet gi = j.derivative(i);
      for (int k = 0; k < 2; ++k) jac(i, k) = gi.partial({k});
    }
    EXPECT_LT((jac - metric(spec, x).g).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(NumericDual, MatchesClosedFormToOrderFour) {
  std::vector<PotentialSpec> specs = {catalogue::normal(), catalogue::negtri(), catalogue::invgau(),
                                      catalogue::cone(), catalogue::isomulnor(3)};
  Rng rng(77);
  for (const auto& spec : specs) {
    PotentialSpec stripped = spec;
    stripped.dual.reset();
    const PotentialSpec numeric = numeric_dual(stripped);
    const PotentialSpec closed = *spec.dual;
    for (int s = 0; s < 10; ++s) {
      const Vector u = grad_map(spec, spec.sample(rng));
      const Jet a = jet_eval(numeric.program, u, 4);
      const Jet b = jet_eval(closed.program, u, 4);
      for (int i = 0; i < a.table().size(); ++i) {
        const double ref = b.coeffs()[i];
        EXPECT_NEAR(a.coeffs()[i], ref, 1e-8 * std::max(1.0, std::abs(ref))) << spec.name << " coeff " << i;
      }
    }
  }
}

TEST(Riemann, NormalComponent) {
  const Tensor4 r = riemann(catalogue::normal(), v2(0.0, -0.5));
  EXPECT_NEAR(r(0, 1, 0, 1), -1.0, 1e-12);
  EXPECT_NEAR(r(1, 0, 1, 0), -1.0, 1e-12);
  EXPECT_NEAR(r(0, 1, 1, 0), 1.0, 1e-12);
}

TEST(Riemann, FrobenisCatalogueIsFlat) {
  Rng rng(3);
  for (const auto& spec : catalogue::frobenius_set()) {
    for (int s = 0; s < 20; ++s) EXPECT_LT(riemann(spec, spec.sample(rng)).max_abs(), 1e-10) << spec.name;
  }
}

TEST(Riemann, Symmetries) {
  Rng rng(5);
  for (const auto& spec : legendre_catalogue()) {
    const int n = spec.dim;
    for (int s = 0; s < 5; ++s) {
      const Tensor4 r = riemann(spec, spec.sample(rng));
      const double scale = std::max(1.0, r.max_abs());
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
              EXPECT_NEAR(r(i, j, k, l), -r(j, i, k, l), 1e-10 * scale);
              EXPECT_NEAR(r(i, j, k, l), -r(i, j, l, k), 1e-10 * scale);
              EXPECT_NEAR(r(i, j, k, l), r(k, l, i, j), 1e-10 * scale);
              EXPECT_NEAR(r(i, j, k, l) + r(i, k, l, j) + r(i, l, j, k), 0.0, 1e-10 * scale);
            }
          }
        }
      }
    }
  }
}

TEST(Sectional, NormalIsMinusHalf) {
  Rng rng(8);
  const auto spec = catalogue::normal();
  std::normal_distribution<double> g;
  for (int s = 0; s < 50; ++s) {
    const Vector x = spec.sample(rng);
    const Vector v = v2(g(rng), g(rng));
    const Vector w = v2(g(rng), g(rng));
    EXPECT_NEAR(sectional(spec, x, v, w), -0.5, 1e-8);
  }
}

TEST(Sectional, NegTriIsMinusQuarter) {
  // The Hessian metric of -log(1 - e^t1 - e^t2) has constant curvature -1/4.
  Rng rng(12);
  const auto spec = catalogue::negtri();
  std::normal_distribution<double> g;
  for (int s = 0; s < 50; ++s) {
    const Vector x = spec.sample(rng);
    EXPECT_NEAR(sectional(spec, x, v2(g(rng), g(rng)), v2(g(rng), g(rng))), -0.25, 1e-8);
  }
}

TEST(Sectional, IsoMulNorConstant) {
  Rng rng(13);
  const auto spec = catalogue::isomulnor(3);
  std::normal_distribution<double> g;
  double lo = 1e300, hi = -1e300;
  for (int s = 0; s < 50; ++s) {
    Vector v(3), w(3);
    for (int i = 0; i < 3; ++i) {
      v[i] = g(rng);
      w[i] = g(rng);
    }
    const double k = sectional(spec, spec.sample(rng), v, w);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  EXPECT_LT(hi - lo, 1e-8);
}

TEST(Sectional, DegeneratePlaneThrows) {
  try {
    (void)sectional(catalogue::normal(), v2(0.0, -0.5), v2(1.0, 2.0), v2(2.0, 4.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegeneratePlane);
  }
}

TEST(Pullback, NegTriKleinChart) {
  const MetricField natural = hessian_metric_field(catalogue::negtri());
  const MetricField p_chart = pullback_field(natural, catalogue::negtri_log_chart());
  const MetricField klein = [](const Vector& s) { return make_metric(catalogue::klein_metric(s)); };
  Rng rng(21);
  std::uniform_real_distribution<double> u(0.05, 0.6);
  for (int s = 0; s < 50; ++s) {
    Vector p = v2(u(rng), u(rng));
    if (p.sum() >= 0.95) continue;
    EXPECT_LT(pullback_residual(p_chart, klein, catalogue::negtri_klein_chart(), p), 1e-9);
  }
}

TEST(Pullback, NegTriFisherInBothCharts) {
  const Vector p = v2(0.25, 0.25);
  const Vector theta = catalogue::negtri_log_chart().apply(p);
  Matrix natural(2, 2), p_chart(2, 2);
  natural << 0.75, 0.25, 0.25, 0.75;
  p_chart << 12.0, 4.0, 4.0, 12.0;
  EXPECT_LT((metric(catalogue::negtri(), theta).g - natural).lpNorm<Eigen::Infinity>(), 1e-14);
  const MetricField g = pullback_field(hessian_metric_field(catalogue::negtri()), catalogue::negtri_log_chart());
  EXPECT_LT((g(p).g - p_chart).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Pullback, PrintedKleinCoefficientIsOneEighth) {
  const Vector p = v2(0.2, 0.3);
  const Vector s = catalogue::negtri_klein_chart().apply(p);
  const double q = 1.0 - s.squaredNorm();
  const Matrix printed = Matrix::Identity(2, 2) / (2.0 * q) + s * s.transpose() / (2.0 * q * q);
  EXPECT_LT((catalogue::klein_metric(s) - 8.0 * printed).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Pullback, InvGauDihedralMaps) {
  const MetricField half_plane =
      pullback_field(hessian_metric_field(catalogue::invgau()), catalogue::invgau_half_plane_chart());
  Rng rng(31);
  std::uniform_real_distribution<double> u(0.3, 2.5);
  for (int s = 0; s < 50; ++s) {
    const Vector x = v2(u(rng), u(rng));
    EXPECT_LT(pullback_residual(half_plane, half_plane, catalogue::quadrant_scaling(2.0), x), 1e-9);
    EXPECT_LT(pullback_residual(half_plane, half_plane, catalogue::quadrant_inversion(), x), 1e-9);
    const Matrix g = half_plane(x).g;
    Matrix expected = Matrix::Identity(2, 2) * 2.0 / (x[1] * x[1]);
    EXPECT_LT((g - expected).lpNorm<Eigen::Infinity>(), 1e-10 * expected(0, 0));
  }
}

TEST(Pullback, IdentityIsZero) {
  const ChartMap id{"id", 2, 2, [](std::span<const Jet> x) { return std::vector<Jet>(x.begin(), x.end()); },
                    [](std::span<const double>) { return true; }};
  const MetricField g = hessian_metric_field(catalogue::normal());
  EXPECT_EQ(pullback_residual(g, g, id, v2(0.4, -1.1)), 0.0);
}
