#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smlab/potential.hpp"


namespace smlab::catalogue {

// Univariate normal in natural coordinates, -x1^2/(4 x2) - 1/2 log(-x2/pi).
PotentialSpec normal();
// -1/2 - 1/2 log(2 pi) - 1/2 log(u2 - u1^2) on u2 > u1^2.
PotentialSpec normal_dual();

// 1/2 (-(x2^2 + ... + xn^2)/x1 - log(-x1)) on x1 < 0.
PotentialSpec isomulnor(int n);
PotentialSpec isomulnor_dual(int n);

// Negative trinomial: -log(1 - e^t1 - e^t2).
PotentialSpec negtri();
PotentialSpec negtri_dual();

// Inverse Gaussian: -sqrt(t1 t2) - 1/2 log(-t2) on the third quadrant.
PotentialSpec invgau();
// -1/2 + 1/2 log(2 e1 / (4 e1 e2 - 1)) on e1 > 0, 4 e1 e2 > 1.
PotentialSpec invgau_dual();

// Probability simplex: log(1 + sum_j e^xj) on R^n.
PotentialSpec simplex(int n);
PotentialSpec simplex_dual(int n);

// Frobenius set.
PotentialSpec quadratic(int n);
PotentialSpec coshlog();
PotentialSpec coslog();
PotentialSpec cone();
PotentialSpec cone_dual();
PotentialSpec log_orthant(int n);
PotentialSpec log_orthant_dual(int n);

// Normal-family flow potential at time t: -x1^2/(4 x2) - t log(-x2).
PotentialSpec soliton(double t);
// -log(eps^2 x1^2 + 2 x1 - x2^2), the cone family of the Siegel-limit remark.
PotentialSpec cone_eps(double eps);

// 1/2 x^T A x + sum_j c_j (a_j . x + b_j)^4 with random SPD A and small c_j > 0;
// globally convex, generic third and fourth derivatives.
PotentialSpec random_convex(int n, unsigned long long seed);

// Coordinate changes used by the isometry checks.
// (p1, p2) -> (log p1, log p2), familiar to natural chart of NegTri.
ChartMap negtri_log_chart();
// (p1, p2) -> (sqrt p1, sqrt p2).
ChartMap negtri_klein_chart();
// 4 (delta / (1 - |s|^2) + s s^T / (1 - |s|^2)^2) on the unit disk.
Matrix klein_metric(const Vector& s);
// (x1, x2) -> natural InvGau parameters for mu = 2/x1^2, lambda = 1/x2^2.
ChartMap invgau_half_plane_chart();
// x -> c x on the open first quadrant.
ChartMap quadrant_scaling(double c);
// x -> x / |x|^2 on the open first quadrant.
ChartMap quadrant_inversion();
// (x1, x2) -> (sqrt(t) x1, x2) on the lower half-plane.
ChartMap soliton_dilation(double t);

// Resolves the stable CLI names: normal, isomulnor-n, negtri, invgau,
// simplex-n, quad-n, coshlog, coslog, cone, logorthant-n, soliton[:t],
// cone-eps:e. Throws UnknownName.
PotentialSpec lookup(std::string_view name);
std::vector<std::string> names();

// The five Frobenius potentials in their reference dimensions.
std::vector<PotentialSpec> frobenius_set();

}  // namespace smlab::catalogue
