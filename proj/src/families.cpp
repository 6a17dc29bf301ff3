#include "smlab/families.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "smlab/catalogue.hpp"
#include "smlab/error.hpp"

namespace smlab {

namespace {

constexpr double kQuadratureFailure = 1e-7;
constexpr double kTailBound = 1e-10;

using Integrand = std::function<std::vector<double>(const Vector& outcome)>;

void require_range(const StatFamily& family, const Vector& familiar) {
  if (familiar.size() != family.dim) {
    throw Error(ErrorCode::WrongDimension, family.name + ": wrong number of parameters");
  }
  if (!family.in_range(familiar)) {
    throw Error(ErrorCode::RangeViolation, family.name + ": parameters out of range");
  }
}

std::vector<double> integrate_continuous(const StatFamily& family, const Vector& familiar,
                                         const Integrand& integrand, int components) {
  std::vector<double> cuts = family.breakpoints(familiar);
  const double lo = family.space == SampleSpace::PositiveLine ? 0.0
                                                              : -std::numeric_limits<double>::infinity();
  cuts.insert(cuts.begin(), lo);
  cuts.push_back(std::numeric_limits<double>::infinity());

  std::vector<double> total(components, 0.0);
  for (int c = 0; c < components; ++c) {
    double err_sum = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      auto f = [&](double z) {
        Vector outcome(1);
        outcome[0] = z;
        const double v = integrand(outcome)[c];
        return std::isfinite(v) ? v : 0.0;
      };
      double err = 0.0;
      double l1 = 0.0;
      total[c] += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          f, cuts[s], cuts[s + 1], 12, 1e-11, &err, &l1);
      err_sum += err;
    }
    if (!(err_sum <= kQuadratureFailure)) {
      throw Error(ErrorCode::ToleranceNotMet, family.name + ": quadrature error estimate " +
                                                  std::to_string(err_sum) + " above tolerance");
    }
  }
  return total;
}

std::vector<Jet> constant_params(const StatFamily& family, const Vector& familiar) {
  const auto& t = MonomialTable::get(family.dim, 0);
  std::vector<Jet> p;
  for (int i = 0; i < family.dim; ++i) p.push_back(Jet::constant(t, familiar[i]));
  return p;
}

std::vector<double> sum_lattice(const StatFamily& family, const Vector& familiar,
                                const Integrand& integrand, int components) {
  std::vector<double> total(components, 0.0);
  double previous_mass = 0.0;
  for (int shell = 0; shell < 200000; ++shell) {
    std::vector<double> shell_abs(components, 0.0);
    double mass = 0.0;
    Vector outcome(2);
    for (int j = 0; j <= shell; ++j) {
      outcome << shell - j, j;
      const auto v = integrand(outcome);
      for (int c = 0; c < components; ++c) {
        total[c] += v[c];
        shell_abs[c] += std::abs(v[c]);
      }
      mass += std::exp(family.log_density(constant_params(family, familiar), outcome).value());
    }
    if (shell >= 2 && previous_mass > 0.0) {
      // Shell terms are bounded by mass_s times a quadratic in s, so the
      // envelope ratio is q ((s+2)/(s+1))^2 with q the shell-mass ratio.
      const double q = mass / previous_mass;
      const double rho = q * std::pow((shell + 2.0) / (shell + 1.0), 2);
      if (rho < 1.0) {
        double worst = 0.0;
        for (double a : shell_abs) worst = std::max(worst, a);
        if (worst * rho / (1.0 - rho) < kTailBound) return total;
      }
    }
    previous_mass = mass;
  }
  throw Error(ErrorCode::ToleranceNotMet, family.name + ": lattice series did not reach the tail bound");
}

std::vector<double> sum_categorical(const StatFamily& family, const Integrand& integrand, int components) {
  std::vector<double> total(components, 0.0);
  Vector outcome(1);
  for (int k = 0; k < family.categories; ++k) {
    outcome[0] = k;
    const auto v = integrand(outcome);
    for (int c = 0; c < components; ++c) total[c] += v[c];
  }
  return total;
}

std::vector<double> integrate(const StatFamily& family, const Vector& familiar, const Integrand& integrand,
                              int components) {
  switch (family.space) {
    case SampleSpace::Line:
    case SampleSpace::PositiveLine:
      return integrate_continuous(family, familiar, integrand, components);
    case SampleSpace::Lattice:
      return sum_lattice(family, familiar, integrand, components);
    case SampleSpace::Categorical:
      return sum_categorical(family, integrand, components);
  }
  return {};
}

}  // namespace

Vector to_natural(const StatFamily& family, const Vector& familiar) {
  require_range(family, familiar);
  return family.familiar_to_natural.apply(familiar);
}

Vector to_expectation(const StatFamily& family, const Vector& familiar) {
  require_range(family, familiar);
  return family.expectation(familiar);
}

Matrix fisher_numeric(const StatFamily& family, const Vector& familiar, FisherChart chart) {
  require_range(family, familiar);
  const int n = family.dim;
  std::vector<Jet> params;
  if (chart == FisherChart::Familiar) {
    const auto& t = MonomialTable::get(n, 1);
    for (int i = 0; i < n; ++i) params.push_back(Jet::variable(t, i, familiar[i]));
  } else {
    params = family.natural_to_familiar.apply_jets(family.familiar_to_natural.apply(familiar), 1);
  }
  const int components = n * (n + 1) / 2;
  const Integrand integrand = [&](const Vector& outcome) {
    const Jet ld = family.log_density(params, outcome);
    const double density = std::exp(ld.value());
    std::vector<double> out;
    out.reserve(components);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) out.push_back(ld.partial({i}) * ld.partial({j}) * density);
    }
    return out;
  };
  const auto flat = integrate(family, familiar, integrand, components);
  Matrix g(n, n);
  int c = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      g(i, j) = flat[c];
      g(j, i) = flat[c];
      ++c;
    }
  }
  return g;
}

double density_normalization(const StatFamily& family, const Vector& familiar) {
  require_range(family, familiar);
  const auto params = constant_params(family, familiar);
  const Integrand integrand = [&](const Vector& outcome) {
    return std::vector<double>{std::exp(family.log_density(params, outcome).value())};
  };
  return integrate(family, familiar, integrand, 1)[0];
}

Vector expectation_numeric(const StatFamily& family, const Vector& familiar) {
  require_range(family, familiar);
  const auto params = constant_params(family, familiar);
  const int n = family.dim;
  const Integrand integrand = [&](const Vector& outcome) {
    const double density = std::exp(family.log_density(params, outcome).value());
    const Vector f = family.sufficient(outcome);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = f[i] * density;
    return out;
  };
  const auto flat = integrate(family, familiar, integrand, n);
  return Eigen::Map<const Vector>(flat.data(), n);
}

namespace families {

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

StatFamily normal() {
  StatFamily f;
  f.name = "normal";
  f.dim = 2;
  f.parameter_names = {"mu", "sigma"};
  f.in_range = [](const Vector& p) { return std::isfinite(p[0]) && p[1] > 0.0; };
  f.space = SampleSpace::Line;
  f.log_density = [](std::span<const Jet> p, const Vector& z) {
    const Jet d = z[0] - p[0];
    return -0.5 * std::log(2.0 * std::numbers::pi) - log(p[1]) - square(d) / (2.0 * square(p[1]));
  };
  f.sufficient = [](const Vector& z) { return vec2(z[0], z[0] * z[0]); };
  f.base_measure = [](const Vector&) { return 1.0; };
  f.familiar_to_natural = ChartMap{"normal-natural", 2, 2,
                                   [](std::span<const Jet> p) {
                                     const Jet v = square(p[1]);
                                     return std::vector<Jet>{p[0] / v, -0.5 / v};
                                   },
                                   [](std::span<const double> p) { return p[1] > 0.0; }};
  f.natural_to_familiar = ChartMap{"normal-familiar", 2, 2,
                                   [](std::span<const Jet> x) {
                                     return std::vector<Jet>{-x[0] / (2.0 * x[1]), sqrt(-0.5 / x[1])};
                                   },
                                   [](std::span<const double> x) { return x[1] < 0.0; }};
  f.expectation = [](const Vector& p) { return vec2(p[0], p[0] * p[0] + p[1] * p[1]); };
  f.breakpoints = [](const Vector& p) {
    std::vector<double> cuts;
    for (int k = -8; k <= 8; k += 2) cuts.push_back(p[0] + k * p[1]);
    return cuts;
  };
  f.potential = catalogue::normal();
  f.sampler = [](Rng& rng) { return vec2(uniform(rng, -2.0, 2.0), uniform(rng, 0.5, 2.0)); };
  return f;
}

StatFamily negtri() {
  StatFamily f;
  f.name = "negtri";
  f.dim = 2;
  f.parameter_names = {"p1", "p2"};
  f.in_range = [](const Vector& p) { return p[0] > 0.0 && p[1] > 0.0 && p[0] + p[1] < 1.0; };
  f.space = SampleSpace::Lattice;
  f.log_density = [](std::span<const Jet> p, const Vector& k) {
    const double log_coeff = std::lgamma(k[0] + k[1] + 1.0) - std::lgamma(k[0] + 1.0) - std::lgamma(k[1] + 1.0);
    Jet out = log(1.0 - p[0] - p[1]) + log_coeff;
    if (k[0] > 0) out += k[0] * log(p[0]);
    if (k[1] > 0) out += k[1] * log(p[1]);
    return out;
  };
  f.sufficient = [](const Vector& k) { return k; };
  f.base_measure = [](const Vector& k) {
    return std::exp(std::lgamma(k[0] + k[1] + 1.0) - std::lgamma(k[0] + 1.0) - std::lgamma(k[1] + 1.0));
  };
  f.familiar_to_natural = catalogue::negtri_log_chart();
  f.natural_to_familiar = ChartMap{
      "negtri-familiar", 2, 2, [](std::span<const Jet> t) { return std::vector<Jet>{exp(t[0]), exp(t[1])}; },
      [](std::span<const double> t) { return std::exp(t[0]) + std::exp(t[1]) < 1.0; }};
  f.expectation = [](const Vector& p) {
    const double p0 = 1.0 - p[0] - p[1];
    return vec2(p[0] / p0, p[1] / p0);
  };
  f.breakpoints = [](const Vector&) { return std::vector<double>{}; };
  f.potential = catalogue::negtri();
  f.sampler = [](Rng& rng) {
    const double a = uniform(rng, 0.2, 1.0);
    const double b = uniform(rng, 0.2, 1.0);
    const double c = uniform(rng, 0.2, 1.0);
    const double s = a + b + c;
    return vec2(a / s, b / s);
  };
  return f;
}

StatFamily invgau() {
  StatFamily f;
  f.name = "invgau";
  f.dim = 2;
  f.parameter_names = {"mu", "lambda"};
  f.in_range = [](const Vector& p) { return p[0] > 0.0 && p[1] > 0.0; };
  f.space = SampleSpace::PositiveLine;
  f.log_density = [](std::span<const Jet> p, const Vector& z) {
    const double zeta = z[0];
    return 0.5 * log(p[1] / (2.0 * std::numbers::pi * zeta * zeta * zeta)) -
           p[1] * square(zeta - p[0]) / (2.0 * square(p[0]) * zeta);
  };
  f.sufficient = [](const Vector& z) { return vec2(z[0] / 4.0, 1.0 / z[0]); };
  f.base_measure = [](const Vector& z) { return 1.0 / std::sqrt(std::numbers::pi * z[0] * z[0] * z[0]); };
  f.familiar_to_natural = ChartMap{"invgau-natural", 2, 2,
                                   [](std::span<const Jet> p) {
                                     return std::vector<Jet>{-2.0 * p[1] / square(p[0]), -0.5 * p[1]};
                                   },
                                   [](std::span<const double> p) { return p[0] > 0.0 && p[1] > 0.0; }};
  f.natural_to_familiar = ChartMap{"invgau-familiar", 2, 2,
                                   [](std::span<const Jet> t) {
                                     return std::vector<Jet>{2.0 * sqrt(t[1] / t[0]), -2.0 * t[1]};
                                   },
                                   [](std::span<const double> t) { return t[0] < 0.0 && t[1] < 0.0; }};
  f.expectation = [](const Vector& p) { return vec2(p[0] / 4.0, 1.0 / p[0] + 1.0 / p[1]); };
  f.breakpoints = [](const Vector& p) {
    std::vector<double> cuts;
    for (double s : {1.0 / 64, 1.0 / 16, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0}) cuts.push_back(s * p[0]);
    return cuts;
  };
  f.potential = catalogue::invgau();
  f.sampler = [](Rng& rng) { return vec2(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 3.0)); };
  return f;
}

StatFamily categorical(int n) {
  StatFamily f;
  f.name = "categorical-" + std::to_string(n);
  f.dim = n;
  for (int i = 1; i <= n; ++i) f.parameter_names.push_back("p" + std::to_string(i));
  f.in_range = [](const Vector& p) { return (p.array() > 0.0).all() && p.sum() < 1.0; };
  f.space = SampleSpace::Categorical;
  f.categories = n + 1;
  f.log_density = [n](std::span<const Jet> p, const Vector& k) {
    const int c = static_cast<int>(k[0]);
    if (c > 0) return log(p[c - 1]);
    Jet rest = 1.0 - p[0];
    for (int i = 1; i < n; ++i) rest -= p[i];
    return log(rest);
  };
  f.sufficient = [n](const Vector& k) {
    Vector v = Vector::Zero(n);
    const int c = static_cast<int>(k[0]);
    if (c > 0) v[c - 1] = 1.0;
    return v;
  };
  f.base_measure = [](const Vector&) { return 1.0; };
  auto simplex_inside = [](std::span<const double> p) {
    double s = 0.0;
    for (double v : p) {
      if (!(v > 0.0)) return false;
      s += v;
    }
    return s < 1.0;
  };
  f.familiar_to_natural = ChartMap{"categorical-natural", n, n,
                                   [n](std::span<const Jet> p) {
                                     Jet rest = 1.0 - p[0];
                                     for (int i = 1; i < n; ++i) rest -= p[i];
                                     const Jet lr = log(rest);
                                     std::vector<Jet> out;
                                     for (int i = 0; i < n; ++i) out.push_back(log(p[i]) - lr);
                                     return out;
                                   },
                                   simplex_inside};
  f.natural_to_familiar = ChartMap{"categorical-familiar", n, n,
                                   [n](std::span<const Jet> x) {
                                     Jet z = 1.0 + exp(x[0]);
                                     for (int i = 1; i < n; ++i) z += exp(x[i]);
                                     std::vector<Jet> out;
                                     for (int i = 0; i < n; ++i) out.push_back(exp(x[i]) / z);
                                     return out;
                                   },
                                   [](std::span<const double>) { return true; }};
  f.expectation = [](const Vector& p) { return p; };
  f.breakpoints = [](const Vector&) { return std::vector<double>{}; };
  f.potential = catalogue::simplex(n);
  f.sampler = [n](Rng& rng) {
    Vector w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = uniform(rng, 0.2, 1.0);
    w /= w.sum();
    return Vector(w.tail(n));
  };
  return f;
}

std::vector<StatFamily> all() { return {normal(), negtri(), invgau(), categorical(2)}; }

StatFamily lookup(std::string_view name) {
  if (name == "normal") return normal();
  if (name == "negtri") return negtri();
  if (name == "invgau") return invgau();
  if (name.starts_with("categorical-")) {
    const std::string digits(name.substr(12));
    if (!digits.empty() && digits.size() == 1 && digits[0] >= '1' && digits[0] <= '6') return categorical(digits[0] - '0');
  }
  throw Error(ErrorCode::UnknownName, "unknown family '" + std::string(name) + "'");
}

}  // namespace families

}  // namespace smlab
