#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "smlab/jet_program.hpp"

namespace smlab {

using Rng = std::mt19937_64;
using Sampler = std::function<Vector(Rng&)>;

// Coordinate change with a jet-differentiable forward map.
struct ChartMap {
  std::string name;
  int source_dim = 0;
  int target_dim = 0;
  std::function<std::vector<Jet>(std::span<const Jet>)> forward;
  std::function<bool(std::span<const double>)> source_inside;

  [[nodiscard]] Vector apply(const Vector& x) const;
  [[nodiscard]] Matrix jacobian(const Vector& x) const;
  // Forward map evaluated on jets of the given order at x.
  [[nodiscard]] std::vector<Jet> apply_jets(const Vector& x, int order) const;
};

// A named convex potential on a domain: the Hessian potential of a
// dually flat structure.
struct PotentialSpec {
  std::string name;
  int dim = 0;
  JetProgram program;
  Vector reference_point;
  Sampler sampler;
  // Closed-form Legendre dual, when one is known.
  std::shared_ptr<const PotentialSpec> dual;
  std::vector<ChartMap> charts;
  // Member of the Frobenius (Riemannian-flat) catalogue.
  bool flat = false;

  [[nodiscard]] bool contains(const Vector& x) const { return program.contains(x); }
  [[nodiscard]] Vector sample(Rng& rng) const { return sampler(rng); }
};

}  // namespace smlab
