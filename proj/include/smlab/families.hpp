#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smlab/potential.hpp"

namespace smlab {

enum class SampleSpace { Line, PositiveLine, Lattice, Categorical };

// A parametrized probability family together with its exponential-family
// data. Outcomes are passed as vectors: one entry for continuous families,
// the lattice point for NegTri, the category index for the simplex family.
struct StatFamily {
  std::string name;
  int dim = 0;
  std::vector<std::string> parameter_names;
  std::function<bool(const Vector&)> in_range;
  SampleSpace space = SampleSpace::Line;
  int categories = 0;  // Categorical only: outcomes 0..categories-1

  // log of the density or pmf, differentiable in the familiar parameters.
  std::function<Jet(std::span<const Jet> params, const Vector& outcome)> log_density;
  std::function<Vector(const Vector& outcome)> sufficient;
  std::function<double(const Vector& outcome)> base_measure;
  ChartMap familiar_to_natural;
  ChartMap natural_to_familiar;
  // Closed-form E[F] at familiar parameters.
  std::function<Vector(const Vector& familiar)> expectation;
  // Breakpoints that split the continuous support for quadrature.
  std::function<std::vector<double>(const Vector& familiar)> breakpoints;
  PotentialSpec potential;
  Sampler sampler;  // familiar parameters
};

enum class FisherChart { Familiar, Natural };

Vector to_natural(const StatFamily& family, const Vector& familiar);
Vector to_expectation(const StatFamily& family, const Vector& familiar);

// Score outer product integrated against the density (quadrature for
// continuous families, shell-wise series with a geometric tail bound for the
// lattice). Throws ToleranceNotMet when the error estimate exceeds 1e-7.
Matrix fisher_numeric(const StatFamily& family, const Vector& familiar,
                      FisherChart chart = FisherChart::Familiar);
double density_normalization(const StatFamily& family, const Vector& familiar);
// E[F] by the same integration machinery, independent of the potential.
Vector expectation_numeric(const StatFamily& family, const Vector& familiar);

namespace families {

StatFamily normal();          // (mu, sigma)
StatFamily negtri();          // (p1, p2), negative trinomial with r = 1
StatFamily invgau();          // (mu, lambda)
StatFamily categorical(int n);  // (p1..pn), natural potential simplex(n)

std::vector<StatFamily> all();
StatFamily lookup(std::string_view name);

}  // namespace families

}  // namespace smlab
