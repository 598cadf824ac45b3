#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rnd/model.hpp"
#include "rnd/reduced.hpp"

namespace rnd {

using State4 = std::array<double, 4>;  // (u, uhat, v, w)

struct WaveProfile {
  std::vector<double> z;   // increasing, with a node at z = 0
  std::vector<State4> y;
  double wavespeed = 0.0;
  double residual_norm = 0.0;  // max relative collocation defect at quarter points
  double eps = 0.0;
  ModelParams params;          // with c = wavespeed
  bool experimental = false;   // seeded by a nonmonotone or canard orbit
  int newton_iterations = 0;
};

// Fast-scale vector field (derivatives in y = z/eps).
State4 fast_rhs(const State4& x, const ModelParams& p);
// Slow-scale vector field (derivatives in z).
State4 slow_rhs(const State4& x, const ModelParams& p);
Eigen::Matrix4d slow_jacobian(const State4& x, const ModelParams& p);

State4 equilibrium_state(Equilibrium which, const ModelParams& p);

struct SaddleSplit {
  Eigen::Matrix<double, 4, 2> stable;    // orthonormal basis
  Eigen::Matrix<double, 4, 2> unstable;  // orthonormal basis
  Eigen::Vector4cd eigenvalues;          // sorted by real part
  Eigen::Matrix4d jacobian;              // slow-scale linearisation
};

// Throws DegenerateSplitting unless exactly two eigenvalues lie on each side
// of the imaginary axis with |Re| > 1e-10.
SaddleSplit saddle_subspaces(Equilibrium which, const ModelParams& p);

struct BvpOptions {
  double half_length = 0.0;      // 0: 40 / |slowest saddle eigenvalue|
  double h_layer = 0.2;          // fine spacing, in units of eps
  double layer_halfwidth = 60.0; // uniform fine zone |z| <= this * eps
  double growth = 1.04;          // geometric spacing ratio outside the layer
  double h_max = 0.05;
  double phase_u = 0.7;
  double tol = 1e-5;             // residual_norm target
  double endpoint_tol = 1e-5;
  int max_newton = 60;
  int max_refine = 4;
  bool fix_c = false;            // drop the phase condition and keep c
  bool eps_continuation = true;  // fall back to continuation from larger eps
};

// Solves for the eps > 0 heteroclinic from p- to p+ by Hermite-Simpson
// collocation with c free, seeded by a singular heteroclinic.
WaveProfile het_bvp_solve(const SingularHeteroclinic& seed, double eps, const ModelParams& p,
                          const BvpOptions& opt = {});

// Re-solves starting from an existing profile (mesh and state are reused).
WaveProfile het_bvp_resolve(const WaveProfile& guess, const ModelParams& p,
                            const BvpOptions& opt = {});

// Cubic Hermite evaluation of the profile and its z-derivative.
State4 profile_state(const WaveProfile& w, double z);
State4 profile_derivative(const WaveProfile& w, double z);

// Position where u crosses `level` (first crossing from the left).
double profile_position(const WaveProfile& w, double level);

// Max relative defect |y' - F(y)| / max(1, |F|) of the collocation
// polynomial at the given fractions of every interval.
double profile_defect(const WaveProfile& w, const std::vector<double>& fractions);

}  // namespace rnd
