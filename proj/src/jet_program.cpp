#include "smlab/jet_program.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "smlab/error.hpp"

namespace smlab {

namespace {

void require_inside(const JetProgram& program, std::span<const double> point) {
  if (static_cast<int>(point.size()) != program.dim) {
    throw Error(ErrorCode::DomainViolation, program.name + ": point has wrong dimension");
  }
  if (!program.inside(point)) {
    throw Error(ErrorCode::DomainViolation, program.name + ": point outside the domain");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Jet jet_eval(const JetProgram& program, std::span<const double> point, int order) {
  require_inside(program, point);
  const auto& table = MonomialTable::get(program.dim, order);
  std::vector<Jet> vars;
  vars.reserve(point.size());
  for (int i = 0; i < program.dim; ++i) vars.push_back(Jet::variable(table, i, point[i]));
  return program.eval(vars);
}

Jet jet_eval(const JetProgram& program, const Vector& point, int order) {
  return jet_eval(program, as_span(point), order);
}

double eval_value(const JetProgram& program, const Vector& point) {
  return jet_eval(program, point, 0).value();
}

double default_fd_step(int degree, std::span<const double> point) {
  double scale = 1.0;
  for (double v : point) scale = std::max(scale, std::abs(v));
  return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (degree + 2)) * scale;
}

double jet_fd_check(const JetProgram& program, std::span<const double> point, int order,
                    double step) {
  require_inside(program, point);
  const int n = program.dim;
  const Jet exact = jet_eval(program, point, order);
  const auto& table = exact.table();
  const std::vector<double> base(point.begin(), point.end());
  std::vector<double> probe(n);

  // Tensor product of 1-D central difference stencils: the k-th difference
  // samples offsets (k/2 - j) h with weights (-1)^j C(k, j). Returns NaN when
  // the stencil leaves the domain.
  auto central = [&](const Exponent& e, int deg, double h) {
    std::vector<int> vars;
    for (int i = 0; i < n; ++i) {
      if (e[i] > 0) vars.push_back(i);
    }
    std::vector<int> counter(vars.size(), 0);
    double acc = 0.0;
    while (true) {
      double w = 1.0;
      probe = base;
      for (std::size_t v = 0; v < vars.size(); ++v) {
        const int k = e[vars[v]];
        const int j = counter[v];
        w *= ((j % 2) ? -1.0 : 1.0) * binomial(k, j);
        probe[vars[v]] += (0.5 * k - j) * h;
      }
      std::span<const double> s(probe.data(), probe.size());
      if (!program.inside(s)) return std::numeric_limits<double>::quiet_NaN();
      acc += w * jet_eval(program, s, 0).value();
      std::size_t v = 0;
      while (v < vars.size() && ++counter[v] > e[vars[v]]) {
        counter[v] = 0;
        ++v;
      }
      if (v == vars.size()) break;
    }
    return acc / std::pow(h, deg);
  };

  // Ridders' extrapolation: shrink h geometrically, build the Neville
  // tableau in h^2 and keep the entry with the smallest error estimate.
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  constexpr int kRows = 14;

  double worst = 0.0;
  for (int idx = 1; idx < table.size(); ++idx) {
    const auto& e = table.exponent(idx);
    const int deg = table.degree(idx);
    double h = step > 0.0 ? step : 16.0 * default_fd_step(deg, point);

    // Without an explicit step, back off until a stencil four times wider
    // still fits, keeping the tableau away from the boundary singularity.
    if (step <= 0.0) {
      for (int tries = 0; std::isnan(central(e, deg, 4.0 * h)) && tries < 60; ++tries) h /= kShrink;
    }
    const double first = central(e, deg, h);
    if (std::isnan(first)) {
      throw Error(ErrorCode::DomainViolation,
                  program.name + ": finite-difference stencil leaves the domain");
    }

    std::array<std::array<double, kRows>, kRows> a{};
    a[0][0] = first;
    double best = first;
    double err = std::numeric_limits<double>::infinity();
    for (int i = 1; i < kRows; ++i) {
      h /= kShrink;
      a[0][i] = central(e, deg, h);
      double fac = kShrink2;
      for (int j = 1; j <= i; ++j) {
        a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
        fac *= kShrink2;
        const double errt =
            std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
        if (errt <= err) {
          err = errt;
          best = a[j][i];
        }
      }
      if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
    }
    const double jet = exact.partial_of_exponent(e);
    worst = std::max(worst, std::abs(jet - best) / std::max(1.0, std::abs(jet)));
  }
  return worst;
}

double jet_fd_check(const JetProgram& program, const Vector& point, int order, double step) {
  return jet_fd_check(program, as_span(point), order, step);
}

}  // namespace smlab
