#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "smlab/catalogue.hpp"
#include "smlab/error.hpp"
#include "smlab/jet_program.hpp"

using namespace smlab;

namespace {

Vector v2(double a, double b) {
  Vector x(2);
  x << a, b;
  return x;
}

// Random cubic in `dim` variables, returned as a program.
JetProgram random_cubic(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c1(dim), c2(dim * dim), c3(dim * dim * dim);
  for (auto& c : c1) c = u(rng);
  for (auto& c : c2) c = u(rng);
  for (auto& c : c3) c = u(rng);
  const double c0 = u(rng);
  return JetProgram{"cubic", dim, [](std::span<const double>) { return true; },
                    [=](std::span<const Jet> x) {
                      Jet acc = Jet::constant(x[0].table(), c0);
                      for (int i = 0; i < dim; ++i) {
                        acc += c1[i] * x[i];
                        for (int j = 0; j < dim; ++j) {
                          acc += c2[i * dim + j] * (x[i] * x[j]);
                          for (int k = 0; k < dim; ++k) acc += c3[(i * dim + j) * dim + k] * (x[i] * x[j] * x[k]);
                        }
                      }
                      return acc;
                    }};
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(JetEval, NormalGradientAndHessian) {
  const auto spec = catalogue::normal();
  const Jet j = jet_eval(spec.program, v2(0.0, -0.5), 2);
  EXPECT_NEAR(j.partial({0}), 0.0, 1e-15);
  EXPECT_NEAR(j.partial({1}), 1.0, 1e-15);
  EXPECT_NEAR(j.partial({0, 0}), 1.0, 1e-14);
  EXPECT_NEAR(j.partial({0, 1}), 0.0, 1e-14);
  EXPECT_NEAR(j.partial({1, 1}), 2.0, 1e-14);
}

TEST(JetEval, QuadraticHasNoHigherTerms) {
  const auto spec = catalogue::quadratic(2);
  const Jet j = jet_eval(spec.program, v2(3.0, 4.0), 4);
  EXPECT_DOUBLE_EQ(j.partial({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(j.partial({1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(j.partial({0, 1}), 0.0);
  for (double c : j.coeffs().subspan(MonomialTable::get(2, 4).degree_begin(3))) EXPECT_EQ(c, 0.0);
}

TEST(JetEval, NegTriValue) {
  const auto spec = catalogue::negtri();
  EXPECT_NEAR(eval_value(spec.program, v2(std::log(0.25), std::log(0.25))), std::log(2.0), 1e-15);
}

TEST(JetEval, PermutedIndicesShareStorage) {
  const auto spec = catalogue::invgau();
  const Jet j = jet_eval(spec.program, v2(-1.3, -0.4), 4);
  EXPECT_EQ(j.partial({0, 1, 1, 0}), j.partial({1, 0, 0, 1}));
  EXPECT_EQ(j.partial({0, 1, 1}), j.partial({1, 1, 0}));
}

TEST(JetEval, OutsideDomainThrows) {
  const auto spec = catalogue::normal();
  try {
    (void)jet_eval(spec.program, v2(0.0, 0.5), 2);
    FAIL() << "expected DomainViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainViolation);
  }
}

TEST(JetEval, LogOfNegativeIsArithmeticDomain) {
  const auto& t = MonomialTable::get(1, 2);
  try {
    (void)log(Jet::variable(t, 0, -1.0));
    FAIL() << "expected ArithmeticDomain";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ArithmeticDomain);
  }
}

TEST(JetEval, DualNormalFourthPartial) {
  const auto spec = catalogue::normal_dual();
  const Vector u = v2(0.0, 1.0);
  const Jet j = jet_eval(spec.program, u, 4);
  EXPECT_NEAR(j.partial({0, 0, 0, 0}), 6.0, 1e-12);
  EXPECT_LT(jet_fd_check(spec.program, u, 4, -1.0), 1e-4);
}

TEST(JetFd, QuadraticIsExact) {
  const auto spec = catalogue::quadratic(3);
  Vector x(3);
  x << 0.4, -1.2, 2.0;
  EXPECT_LT(jet_fd_check(spec.program, x, 2, 0.25), 1e-10);
}

TEST(JetFd, NormalOrderFour) {
  EXPECT_LT(jet_fd_check(catalogue::normal().program, v2(0.0, -0.5), 4, 1e-2), 1e-5);
}

TEST(JetFd, StencilLeavingDomainThrows) {
  EXPECT_THROW((void)jet_fd_check(catalogue::normal().program, v2(0.0, -0.01), 2, 0.1), Error);
}

TEST(JetFd, CatalogueAtRandomPoints) {
  std::vector<PotentialSpec> specs = {
      catalogue::normal(),      catalogue::normal_dual(), catalogue::isomulnor(3),
      catalogue::negtri(),      catalogue::negtri_dual(), catalogue::invgau(),
      catalogue::invgau_dual(), catalogue::simplex(2),    catalogue::simplex_dual(2),
      catalogue::coshlog(),     catalogue::coslog(),      catalogue::cone(),
      catalogue::log_orthant(3), catalogue::soliton(2.0), catalogue::random_convex(3, 7)};
  Rng rng(20261015);
  for (const auto& spec : specs) {
    for (int s = 0; s < 100; ++s) {
      const Vector x = spec.sample(rng);
      ASSERT_LT(jet_fd_check(spec.program, x, 4, -1.0), 1e-4) << spec.name << " at " << x.transpose();
    }
  }
}

TEST(JetArithmetic, LeibnizOnRandomPolynomials) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 3;
    const auto f = random_cubic(dim, rng);
    const auto g = random_cubic(dim, rng);
    std::vector<double> x(dim);
    for (auto& v : x) v = u(rng);
    const Jet jf = jet_eval(f, x, 4);
    const Jet jg = jet_eval(g, x, 4);
    const Jet prod = jf * jg;
    const auto& table = prod.table();
    for (int idx = 0; idx < table.size(); ++idx) {
      const Exponent m = table.exponent(idx);
      // sum over k <= m of prod_i C(m_i, k_i) d^k f d^(m-k) g
      double expected = 0.0;
      for (int k = 0; k < table.size(); ++k) {
        const Exponent e = table.exponent(k);
        bool below = true;
        double weight = 1.0;
        Exponent rest{};
        for (int i = 0; i < dim; ++i) {
          if (e[i] > m[i]) below = false;
          else {
            weight *= binom(m[i], e[i]);
            rest[i] = static_cast<std::uint8_t>(m[i] - e[i]);
          }
        }
        if (below) expected += weight * jf.partial_of_exponent(e) * jg.partial_of_exponent(rest);
      }
      const double got = prod.partial_of_exponent(m);
      EXPECT_NEAR(got, expected, 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(JetArithmetic, ExpLogRoundTrip) {
  const auto& t = MonomialTable::get(3, 4);
  const Jet x = Jet::variable(t, 0, 0.7);
  const Jet y = Jet::variable(t, 1, -0.3);
  const Jet z = Jet::variable(t, 2, 1.1);
  const Jet f = 2.0 + square(x) + cos(y) * z + exp(x * y);
  const Jet g = exp(log(f));
  for (int i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(g.coeffs()[i], f.coeffs()[i], 1e-12 * std::max(1.0, std::abs(f.coeffs()[i])));
  }
}

TEST(JetArithmetic, DerivativeLowersOrder) {
  const auto& t = MonomialTable::get(2, 4);
  const Jet x = Jet::variable(t, 0, 0.5);
  const Jet y = Jet::variable(t, 1, 2.0);
  const Jet f = sin(x) * exp(y);
  const Jet d = f.derivative(0);
  EXPECT_EQ(d.order(), 3);
  EXPECT_NEAR(d.partial({1, 1, 0}), f.partial({0, 0, 1, 1}), 1e-13);
  EXPECT_NEAR(d.value(), std::cos(0.5) * std::exp(2.0), 1e-14);
}

TEST(JetArithmetic, ComposeMatchesDirectEvaluation) {
  // poly = Taylor jet of h(s,t) = exp(s) * t around (0.2, 1.5); args are jets in 2 other variables.
  const auto& t2 = MonomialTable::get(2, 4);
  const Jet s = Jet::variable(t2, 0, 0.2);
  const Jet tt = Jet::variable(t2, 1, 1.5);
  const Jet poly = exp(s) * tt;
  const Jet a = Jet::variable(t2, 0, 0.3);
  const Jet b = Jet::variable(t2, 1, -0.4);
  std::vector<Jet> args = {0.2 + a * b - a.value() * b.value(), 1.5 + sin(a + b) - std::sin(-0.1)};
  const Jet composed = compose(poly, args);
  const Jet direct = exp(args[0]) * args[1];
  for (int i = 0; i < t2.size(); ++i) EXPECT_NEAR(composed.coeffs()[i], direct.coeffs()[i], 1e-12);
}
