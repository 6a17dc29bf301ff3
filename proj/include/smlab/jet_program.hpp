#pragma once

#include <functional>
#include <span>
#include <string>

#include <Eigen/Core>

#include "smlab/jet.hpp"

namespace smlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A potential (or any scalar function) written against jet arithmetic, so the
// same code yields values and exact derivatives up to order 4.
struct JetProgram {
  std::string name;
  int dim = 0;
  std::function<bool(std::span<const double>)> inside;
  std::function<Jet(std::span<const Jet>)> eval;

  [[nodiscard]] bool contains(const Vector& x) const {
    return inside(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }
};

// Jet of `program` at `point` with all partials up to `order`.
// Throws DomainViolation when the point is outside the program's domain.
Jet jet_eval(const JetProgram& program, std::span<const double> point, int order);
Jet jet_eval(const JetProgram& program, const Vector& point, int order);

// Default central-difference step for derivatives of the given degree:
// eps^(1/(degree+2)) scaled by the coordinate magnitude.
double default_fd_step(int degree, std::span<const double> point);

// Max over all multi-indices of degree 1..order of the relative deviation
// |jet - fd| / max(1, |jet|). Central differences are refined by Ridders'
// extrapolation starting at `step`; a non-positive `step` starts from
// 16 * default_fd_step and shrinks until the stencil fits in the domain.
double jet_fd_check(const JetProgram& program, std::span<const double> point, int order,
                    double step);
double jet_fd_check(const JetProgram& program, const Vector& point, int order, double step);

// Value of the program at a point (order-0 jet).
double eval_value(const JetProgram& program, const Vector& point);

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace smlab
