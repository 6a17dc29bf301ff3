#include "smlab/catalogue.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "smlab/error.hpp"

namespace smlab::catalogue {

namespace {

using Inside = std::function<bool(std::span<const double>)>;
using Eval = std::function<Jet(std::span<const Jet>)>;

PotentialSpec make(std::string name, int dim, Inside inside, Eval eval, Vector ref,
                   Sampler sampler) {
  PotentialSpec spec;
  spec.name = name;
  spec.dim = dim;
  spec.program = JetProgram{std::move(name), dim, std::move(inside), std::move(eval)};
  spec.reference_point = std::move(ref);
  spec.sampler = std::move(sampler);
  return spec;
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Sampler box_sampler(std::vector<std::pair<double, double>> box) {
  return [box](Rng& rng) {
    Vector x(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) x[i] = uniform(rng, box[i].first, box[i].second);
    return x;
  };
}

Sampler rejection_sampler(std::vector<std::pair<double, double>> box, Inside accept) {
  auto draw = box_sampler(std::move(box));
  return [draw, accept](Rng& rng) {
    while (true) {
      Vector x = draw(rng);
      if (accept(as_span(x))) return x;
    }
  };
}

Vector gradient(const PotentialSpec& spec, const Vector& x) {
  const Jet j = jet_eval(spec.program, x, 1);
  Vector g(spec.dim);
  for (int i = 0; i < spec.dim; ++i) g[i] = j.partial({i});
  return g;
}

// Attaches a closed-form dual whose samples are images of primal samples
// under the gradient map, so they always lie in the image of the primal.
PotentialSpec paired_dual(const PotentialSpec& primal, PotentialSpec dual) {
  auto base = std::make_shared<const PotentialSpec>(primal);
  dual.sampler = [base](Rng& rng) { return gradient(*base, base->sample(rng)); };
  dual.reference_point = gradient(primal, primal.reference_point);
  dual.dual = base;
  return dual;
}

PotentialSpec paired_primal(PotentialSpec primal, const PotentialSpec& dual_base) {
  PotentialSpec dual = paired_dual(primal, dual_base);
  primal.dual = std::make_shared<const PotentialSpec>(std::move(dual));
  return primal;
}

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

// --- bare potentials (no dual attached) -----------------------------------

PotentialSpec normal_base() {
  return make(
      "normal", 2, [](std::span<const double> x) { return x[1] < 0.0; },
      [](std::span<const Jet> x) {
        return -square(x[0]) / (4.0 * x[1]) - 0.5 * log(-x[1] / std::numbers::pi);
      },
      vec({0.0, -0.5}), box_sampler({{-2.0, 2.0}, {-2.0, -0.2}}));
}

PotentialSpec normal_dual_base() {
  return make(
      "normal-dual", 2, [](std::span<const double> u) { return u[1] > u[0] * u[0]; },
      [](std::span<const Jet> u) {
        return -0.5 - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * log(u[1] - square(u[0]));
      },
      vec({0.0, 1.0}), nullptr);
}

PotentialSpec isomulnor_base(int n) {
  Vector ref = Vector::Zero(n);
  ref[0] = -1.0;
  std::vector<std::pair<double, double>> box(n, {-1.0, 1.0});
  box[0] = {-2.0, -0.3};
  return make(
      "isomulnor-" + std::to_string(n), n, [](std::span<const double> x) { return x[0] < 0.0; },
      [n](std::span<const Jet> x) {
        Jet s = Jet::constant(x[0].table(), 0.0);
        for (int i = 1; i < n; ++i) s += square(x[i]);
        return 0.5 * (-(s / x[0]) - log(-x[0]));
      },
      ref, box_sampler(box));
}

PotentialSpec isomulnor_dual_base(int n) {
  return make(
      "isomulnor-" + std::to_string(n) + "-dual", n,
      [n](std::span<const double> u) {
        double s = 0.0;
        for (int i = 1; i < n; ++i) s += u[i] * u[i];
        return 2.0 * u[0] > s;
      },
      [n](std::span<const Jet> u) {
        Jet q = 2.0 * u[0];
        for (int i = 1; i < n; ++i) q -= square(u[i]);
        return -0.5 - 0.5 * log(q);
      },
      Vector(), nullptr);
}

PotentialSpec negtri_base() {
  return make(
      "negtri", 2,
      [](std::span<const double> t) { return std::exp(t[0]) + std::exp(t[1]) < 1.0; },
      [](std::span<const Jet> t) { return -log(1.0 - exp(t[0]) - exp(t[1])); },
      vec({std::log(0.25), std::log(0.25)}), [](Rng& rng) {
        const double a = uniform(rng, 0.2, 1.0);
        const double b = uniform(rng, 0.2, 1.0);
        const double c = uniform(rng, 0.2, 1.0);
        const double s = a + b + c;
        return vec({std::log(a / s), std::log(b / s)});
      });
}

PotentialSpec negtri_dual_base() {
  return make(
      "negtri-dual", 2, [](std::span<const double> e) { return e[0] > 0.0 && e[1] > 0.0; },
      [](std::span<const Jet> e) {
        const Jet total = 1.0 + e[0] + e[1];
        return e[0] * log(e[0]) + e[1] * log(e[1]) - total * log(total);
      },
      Vector(), nullptr);
}

PotentialSpec invgau_base() {
  return make(
      "invgau", 2, [](std::span<const double> t) { return t[0] < 0.0 && t[1] < 0.0; },
      [](std::span<const Jet> t) { return -sqrt(t[0] * t[1]) - 0.5 * log(-t[1]); },
      vec({-2.0, -0.5}), box_sampler({{-3.0, -0.2}, {-3.0, -0.2}}));
}

PotentialSpec invgau_dual_base() {
  return make(
      "invgau-dual", 2,
      [](std::span<const double> e) { return e[0] > 0.0 && 4.0 * e[0] * e[1] > 1.0; },
      [](std::span<const Jet> e) {
        return -0.5 + 0.5 * log(2.0 * e[0] / (4.0 * e[0] * e[1] - 1.0));
      },
      Vector(), nullptr);
}

PotentialSpec simplex_base(int n) {
  return make(
      "simplex-" + std::to_string(n), n, [](std::span<const double>) { return true; },
      [n](std::span<const Jet> x) {
        Jet s = Jet::constant(x[0].table(), 1.0);
        for (int i = 0; i < n; ++i) s += exp(x[i]);
        return log(s);
      },
      Vector::Zero(n), box_sampler(std::vector<std::pair<double, double>>(n, {-2.0, 2.0})));
}

PotentialSpec simplex_dual_base(int n) {
  return make(
      "simplex-" + std::to_string(n) + "-dual", n,
      [n](std::span<const double> u) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
          if (!(u[i] > 0.0)) return false;
          s += u[i];
        }
        return s < 1.0;
      },
      [n](std::span<const Jet> u) {
        Jet rest = Jet::constant(u[0].table(), 1.0);
        Jet acc = Jet::constant(u[0].table(), 0.0);
        for (int i = 0; i < n; ++i) {
          acc += u[i] * log(u[i]);
          rest -= u[i];
        }
        return acc + rest * log(rest);
      },
      Vector(), nullptr);
}

PotentialSpec cone_base() {
  return make(
      "cone", 2, [](std::span<const double> x) { return x[0] > std::abs(x[1]); },
      [](std::span<const Jet> x) { return -log(square(x[0]) - square(x[1])); }, vec({2.0, 0.5}),
      [](Rng& rng) {
        const double a = uniform(rng, 0.5, 3.0);
        return vec({a, a * uniform(rng, -0.8, 0.8)});
      });
}

PotentialSpec cone_dual_base() {
  return make(
      "cone-dual", 2, [](std::span<const double> u) { return u[0] < -std::abs(u[1]); },
      [](std::span<const Jet> u) {
        return -2.0 + std::log(4.0) - log(square(u[0]) - square(u[1]));
      },
      Vector(), nullptr);
}

PotentialSpec log_orthant_base(int n) {
  return make(
      "logorthant-" + std::to_string(n), n,
      [n](std::span<const double> t) {
        for (int i = 0; i < n; ++i) {
          if (!(t[i] > 0.0)) return false;
        }
        return true;
      },
      [n](std::span<const Jet> t) {
        Jet acc = Jet::constant(t[0].table(), 0.0);
        for (int i = 0; i < n; ++i) acc -= log(t[i]);
        return acc;
      },
      Vector::LinSpaced(n, 1.0, static_cast<double>(n)),
      box_sampler(std::vector<std::pair<double, double>>(n, {0.2, 3.0})));
}

PotentialSpec log_orthant_dual_base(int n) {
  return make(
      "logorthant-" + std::to_string(n) + "-dual", n,
      [n](std::span<const double> u) {
        for (int i = 0; i < n; ++i) {
          if (!(u[i] < 0.0)) return false;
        }
        return true;
      },
      [n](std::span<const Jet> u) {
        Jet acc = Jet::constant(u[0].table(), -static_cast<double>(n));
        for (int i = 0; i < n; ++i) acc -= log(-u[i]);
        return acc;
      },
      Vector(), nullptr);
}

int parse_suffix_int(std::string_view name, std::string_view prefix) {
  const auto digits = name.substr(prefix.size());
  int n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || n < 1 || n > 6) {
    throw Error(ErrorCode::UnknownName, "bad dimension suffix in '" + std::string(name) + "'");
  }
  return n;
}

double parse_suffix_double(std::string_view name, std::string_view prefix) {
  const std::string digits(name.substr(prefix.size()));
  try {
    std::size_t used = 0;
    const double v = std::stod(digits, &used);
    if (used != digits.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::UnknownName, "bad numeric suffix in '" + std::string(name) + "'");
  }
}

}  // namespace

PotentialSpec normal() { return paired_primal(normal_base(), normal_dual_base()); }
PotentialSpec normal_dual() { return paired_dual(normal_base(), normal_dual_base()); }

PotentialSpec isomulnor(int n) { return paired_primal(isomulnor_base(n), isomulnor_dual_base(n)); }
PotentialSpec isomulnor_dual(int n) {
  return paired_dual(isomulnor_base(n), isomulnor_dual_base(n));
}

PotentialSpec negtri() {
  PotentialSpec spec = paired_primal(negtri_base(), negtri_dual_base());
  spec.charts = {negtri_log_chart(), negtri_klein_chart()};
  return spec;
}
PotentialSpec negtri_dual() { return paired_dual(negtri_base(), negtri_dual_base()); }

PotentialSpec invgau() {
  PotentialSpec spec = paired_primal(invgau_base(), invgau_dual_base());
  spec.charts = {invgau_half_plane_chart()};
  return spec;
}
PotentialSpec invgau_dual() { return paired_dual(invgau_base(), invgau_dual_base()); }

PotentialSpec simplex(int n) { return paired_primal(simplex_base(n), simplex_dual_base(n)); }
PotentialSpec simplex_dual(int n) { return paired_dual(simplex_base(n), simplex_dual_base(n)); }

PotentialSpec quadratic(int n) {
  PotentialSpec spec = make(
      "quad-" + std::to_string(n), n, [](std::span<const double>) { return true; },
      [n](std::span<const Jet> x) {
        Jet acc = Jet::constant(x[0].table(), 0.0);
        for (int i = 0; i < n; ++i) acc += 0.5 * square(x[i]);
        return acc;
      },
      Vector::Zero(n), box_sampler(std::vector<std::pair<double, double>>(n, {-3.0, 3.0})));
  spec.flat = true;
  // Self-dual: the gradient map is the identity.
  spec.dual = std::make_shared<const PotentialSpec>(spec);
  return spec;
}

PotentialSpec coshlog() {
  PotentialSpec spec = make(
      "coshlog", 2, [](std::span<const double>) { return true; },
      [](std::span<const Jet> x) { return log(cosh(x[0]) + cosh(x[1])); }, vec({0.3, -0.7}),
      box_sampler({{-2.0, 2.0}, {-2.0, 2.0}}));
  spec.flat = true;
  return spec;
}

PotentialSpec coslog() {
  auto diamond = [](std::span<const double> x) {
    return std::abs(x[0]) + std::abs(x[1]) < std::numbers::pi;
  };
  PotentialSpec spec = make(
      "coslog", 2, diamond, [](std::span<const Jet> x) { return -log(cos(x[0]) + cos(x[1])); },
      vec({0.3, -0.7}), rejection_sampler({{-2.4, 2.4}, {-2.4, 2.4}}, [](std::span<const double> x) {
        return std::abs(x[0]) + std::abs(x[1]) < 2.4;
      }));
  spec.flat = true;
  return spec;
}

PotentialSpec cone() {
  PotentialSpec spec = paired_primal(cone_base(), cone_dual_base());
  spec.flat = true;
  return spec;
}

PotentialSpec cone_dual() {
  PotentialSpec spec = paired_dual(cone_base(), cone_dual_base());
  spec.flat = true;
  return spec;
}

PotentialSpec log_orthant(int n) {
  PotentialSpec spec = paired_primal(log_orthant_base(n), log_orthant_dual_base(n));
  spec.flat = true;
  return spec;
}

PotentialSpec log_orthant_dual(int n) {
  PotentialSpec spec = paired_dual(log_orthant_base(n), log_orthant_dual_base(n));
  spec.flat = true;
  return spec;
}

PotentialSpec soliton(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::RangeViolation, "soliton time must be positive");
  char label[64];
  std::snprintf(label, sizeof label, "soliton:%.17g", t);
  return make(
      label, 2, [](std::span<const double> x) { return x[1] < 0.0; },
      [t](std::span<const Jet> x) { return -square(x[0]) / (4.0 * x[1]) - t * log(-x[1]); },
      vec({0.0, -1.0}), box_sampler({{-2.0, 2.0}, {-2.0, -0.2}}));
}

PotentialSpec cone_eps(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::RangeViolation, "cone-eps parameter must be positive");
  auto inside = [eps](std::span<const double> x) {
    return eps * x[0] + 1.0 / eps > std::sqrt(1.0 / (eps * eps) + x[1] * x[1]);
  };
  char label[64];
  std::snprintf(label, sizeof label, "cone-eps:%.17g", eps);
  return make(
      label, 2, inside,
      [eps](std::span<const Jet> x) {
        return -log(eps * eps * square(x[0]) + 2.0 * x[0] - square(x[1]));
      },
      vec({1.0, 0.0}), rejection_sampler({{0.5, 3.0}, {-1.0, 1.0}}, inside));
}

PotentialSpec random_convex(int n, unsigned long long seed) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b(i, j) = gauss(rng);
  }
  const Matrix a = Matrix::Identity(n, n) + 0.5 * b * b.transpose() / n;
  const int terms = n + 1;
  Matrix dirs(terms, n);
  Vector offsets(terms);
  Vector weights(terms);
  for (int k = 0; k < terms; ++k) {
    for (int i = 0; i < n; ++i) dirs(k, i) = gauss(rng);
    offsets[k] = 0.5 * gauss(rng);
    weights[k] = 0.02 + 0.03 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
  return make(
      "random-convex-" + std::to_string(n) + ":" + std::to_string(seed), n,
      [](std::span<const double>) { return true; },
      [n, a, dirs, offsets, weights, terms](std::span<const Jet> x) {
        Jet acc = Jet::constant(x[0].table(), 0.0);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) acc += (0.5 * a(i, j)) * (x[i] * x[j]);
        }
        for (int k = 0; k < terms; ++k) {
          Jet lin = Jet::constant(x[0].table(), offsets[k]);
          for (int i = 0; i < n; ++i) lin += dirs(k, i) * x[i];
          const Jet sq = square(lin);
          acc += weights[k] * square(sq);
        }
        return acc;
      },
      Vector::Zero(n), box_sampler(std::vector<std::pair<double, double>>(n, {-1.5, 1.5})));
}

ChartMap negtri_log_chart() {
  return ChartMap{"negtri-log", 2, 2,
                  [](std::span<const Jet> p) { return std::vector<Jet>{log(p[0]), log(p[1])}; },
                  [](std::span<const double> p) { return p[0] > 0.0 && p[1] > 0.0 && p[0] + p[1] < 1.0; }};
}

ChartMap negtri_klein_chart() {
  return ChartMap{"negtri-klein", 2, 2,
                  [](std::span<const Jet> p) { return std::vector<Jet>{sqrt(p[0]), sqrt(p[1])}; },
                  [](std::span<const double> p) { return p[0] > 0.0 && p[1] > 0.0 && p[0] + p[1] < 1.0; }};
}

Matrix klein_metric(const Vector& s) {
  const double q = 1.0 - s.squaredNorm();
  if (!(q > 0.0)) throw Error(ErrorCode::DomainViolation, "Klein metric outside the unit disk");
  return 4.0 * (Matrix::Identity(s.size(), s.size()) / q + s * s.transpose() / (q * q));
}

ChartMap invgau_half_plane_chart() {
  return ChartMap{"invgau-half-plane", 2, 2,
                  [](std::span<const Jet> x) {
                    const Jet x1sq = square(x[0]);
                    const Jet x2sq = square(x[1]);
                    return std::vector<Jet>{-square(x1sq) / (2.0 * x2sq), -0.5 / x2sq};
                  },
                  [](std::span<const double> x) { return x[0] > 0.0 && x[1] > 0.0; }};
}

ChartMap quadrant_scaling(double c) {
  return ChartMap{"scaling", 2, 2,
                  [c](std::span<const Jet> x) { return std::vector<Jet>{c * x[0], c * x[1]}; },
                  [](std::span<const double> x) { return x[0] > 0.0 && x[1] > 0.0; }};
}

ChartMap quadrant_inversion() {
  return ChartMap{"inversion", 2, 2,
                  [](std::span<const Jet> x) {
                    const Jet r2 = square(x[0]) + square(x[1]);
                    return std::vector<Jet>{x[0] / r2, x[1] / r2};
                  },
                  [](std::span<const double> x) { return x[0] > 0.0 && x[1] > 0.0; }};
}

ChartMap soliton_dilation(double t) {
  const double r = std::sqrt(t);
  return ChartMap{"soliton-dilation", 2, 2,
                  [r](std::span<const Jet> x) { return std::vector<Jet>{r * x[0], x[1]}; },
                  [](std::span<const double> x) { return x[1] < 0.0; }};
}

PotentialSpec lookup(std::string_view name) {
  if (name == "normal") return normal();
  if (name == "negtri") return negtri();
  if (name == "invgau") return invgau();
  if (name == "coshlog") return coshlog();
  if (name == "coslog") return coslog();
  if (name == "cone") return cone();
  if (name == "soliton") return soliton(1.0);
  if (name.starts_with("soliton:")) return soliton(parse_suffix_double(name, "soliton:"));
  if (name.starts_with("cone-eps:")) return cone_eps(parse_suffix_double(name, "cone-eps:"));
  if (name.starts_with("isomulnor-")) return isomulnor(parse_suffix_int(name, "isomulnor-"));
  if (name.starts_with("simplex-")) return simplex(parse_suffix_int(name, "simplex-"));
  if (name.starts_with("quad-")) return quadratic(parse_suffix_int(name, "quad-"));
  if (name.starts_with("logorthant-")) return log_orthant(parse_suffix_int(name, "logorthant-"));
  throw Error(ErrorCode::UnknownName, "unknown potential '" + std::string(name) + "'");
}

std::vector<std::string> names() {
  return {"normal", "isomulnor-n", "negtri", "invgau", "simplex-n", "quad-n", "coshlog",
          "coslog", "cone", "logorthant-n", "soliton", "soliton:t", "cone-eps:e"};
}

std::vector<PotentialSpec> frobenius_set() {
  return {quadratic(2), coshlog(), coslog(), cone(), log_orthant(3)};
}

}  // namespace smlab::catalogue
