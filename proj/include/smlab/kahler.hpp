#pragma once

#include "smlab/hessian.hpp"

namespace smlab {

// Curvature of the semi-flat metric g_ij = Phi_ij / 4 on the tube over the
// base. Every quantity reduces to real derivatives of the base potential.
struct KahlerCurvature {
  Vector point;
  Tensor4 r;  // R_{i jbar k lbar}
};

struct RicciData {
  Matrix form;    // Ric_{i jbar} = -1/4 d^2 log det D^2 Phi
  Matrix lifted;  // Ric_i^j = -(D^2 Phi)^-1 D^2 log det D^2 Phi
  double potential = 0.0;  // rho = -log det D^2 Phi
  double scalar = 0.0;     // trace of the lifted form
};

// R = (1/16)(-Phi_ijkl + Phi^pq Phi_ikp Phi_jlq).
KahlerCurvature kahler_curvature(const PotentialSpec& spec, const Vector& x);
RicciData ricci(const PotentialSpec& spec, const Vector& x);

double holo_sectional(const PotentialSpec& spec, const Vector& x, const Vector& v);
// Throws NotOrthogonal unless |<v,w>_g| < 1e-10 |v| |w|.
double orth_bisectional(const PotentialSpec& spec, const Vector& x, const Vector& v, const Vector& w);

// sum (Phi_ijp Phi^pq Phi_qkl - Phi_ijkl) xi^i xi^j eta^k eta^l.
double mtw(const PotentialSpec& spec, const Vector& x, const Vector& xi, const Vector& eta);
double mtw(const Derivatives& d, const Matrix& inverse, const Vector& xi, const Vector& eta);

enum class MirrorSigns { Corrected, AsDisplayed };

// W^ijkl u_i u_j v_k v_l for covectors u, v at x. Corrected signs give the
// anti-bisectional tensor of the Legendre dual at grad Phi(x); AsDisplayed
// negates the first and the correction term.
double mirror_w(const PotentialSpec& spec, const Vector& x, const Vector& u, const Vector& v,
                MirrorSigns signs = MirrorSigns::Corrected);

// Direction sampling: uniform on the Euclidean sphere.
Vector random_direction(Rng& rng, int n);
// Draws v and w, makes w g-orthogonal to v; rejects pairs whose orthogonal
// part is below 1e-6 of |w|.
std::pair<Vector, Vector> random_orthogonal_pair(Rng& rng, const Matrix& g);

}  // namespace smlab
