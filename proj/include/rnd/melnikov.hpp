#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rnd/layer.hpp"
#include "rnd/model.hpp"

namespace rnd {

using P2 = std::array<double, 2>;
using PlanarField = std::function<P2(const P2&)>;
// Row-major 2x2 Jacobian.
using PlanarJacobian = std::function<std::array<double, 4>(const P2&)>;

// A base orbit sampled at increasing t, with t = 0 at a sample point.
struct PlanarOrbit {
  std::vector<double> t;
  std::vector<P2> x;
};

enum class AdjointSide { Backward, Forward, Full };

struct AdjointSample {
  double t, psi1, psi2;
};

struct AdjointSolution {
  std::vector<AdjointSample> samples;  // increasing t
  AdjointSide side = AdjointSide::Full;
  double angle_drift = 0.0;  // max per-step |psi.h| / (|psi||h|) before projection
};

struct AdjointOptions {
  double decay_tol = 1e-10;  // |psi| at the ends relative to |psi(0)|
};

struct MelnikovResult {
  std::map<std::string, double> partials;
  double slope_b = 0.0;
  std::string base_orbit_id;
  double v1_minus = 0.0;  // piecewise only: normalised field u-components at the crossing
  double v1_plus = 0.0;
  std::vector<AdjointSolution> adjoints;
};

// Appends the linearised approach to a saddle on one end of the orbit until
// the distance falls to `clip`. rate > 0 extends toward t -> -inf (unstable
// departure), rate < 0 toward t -> +inf.
void extend_tail(PlanarOrbit& orbit, const P2& saddle, double rate, double clip, double dt = 0.01);

// psi' = -J^T psi along the orbit from t = 0 outward with projection onto the
// normal of h after each step. psi0 defaults to (-h2, h1)/|h| at t = 0.
// Throws NonDecaying if |psi| at a truncation end exceeds decay_tol |psi(0)|.
AdjointSolution adjoint_solve(const PlanarOrbit& orbit, const PlanarField& h,
                              const PlanarJacobian& J, AdjointSide side = AdjointSide::Full,
                              const P2* psi0 = nullptr, const AdjointOptions& opt = {});

// int psi . dh/dmu over the adjoint samples (trapezoid).
double melnikov_integral(const AdjointSolution& psi, const PlanarOrbit& orbit,
                         const PlanarField& dfield);

struct MelnikovOptions {
  double clip = 1e-12;  // tail truncation distance to the saddle
  double sample_step = 0.005;  // base-orbit sampling; RK4 adjoint error scales as its 4th power
  AdjointOptions adjoint;
  LayerOptions layer;
};

// Layer problem at delta = 0, w = w_h(0): partials {w, delta} and
// slope_b = -D_delta / D_w, the predicted dw_h/ddelta at 0.
MelnikovResult layer_melnikov(const ModelParams& p, Direction dir = Direction::GammaMinus,
                              const MelnikovOptions& opt = {});

// One side of a piecewise-smooth heteroclinic. Source sides cover t <= 0,
// sink sides t >= 0; both orbits end/start at the crossing point at t = 0.
struct PiecewiseSide {
  PlanarOrbit orbit;
  PlanarField h;
  PlanarJacobian J;
  std::map<std::string, PlanarField> dparams;
};

// D_mu G = (1/v1-) int_{-inf}^0 psi- . d_mu h- + (1/v1+) int_0^inf psi+ . d_mu h+,
// with psi(0) = (-v2, v1) from each side's normalised field at the crossing.
MelnikovResult piecewise_melnikov_general(const PiecewiseSide& source, const PiecewiseSide& sink,
                                          const AdjointOptions& opt = {});

// Standing wave on the symmetric line (gamma2 = 1 - gamma1, alpha = 1/2, c = 0, a = 0):
// partials {alpha, c}; slope_b = -D_alpha G / D_c G = c'(1/2).
// Throws PrefactorMismatch if |v1- - v1+| > 1e-9.
MelnikovResult piecewise_melnikov(const ModelParams& p, const MelnikovOptions& opt = {});

// Piecewise formula applied to the delta = 0 layer heteroclinic split at t = 0
// with no shift. Each piecewise partial should equal the smooth one divided
// by the common prefactor v1.
struct SmoothLimit {
  std::array<double, 2> smooth;     // {w, delta}
  std::array<double, 2> piecewise;  // {w, delta}
  double v1 = 0.0;
};

SmoothLimit piecewise_smooth_limit(const ModelParams& p, const MelnikovOptions& opt = {});

}  // namespace rnd
