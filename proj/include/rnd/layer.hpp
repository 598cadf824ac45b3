#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "rnd/exec.hpp"
#include "rnd/model.hpp"

namespace rnd {

// GammaMinus runs u_r -> u_l with uhat < 0, GammaPlus u_l -> u_r with uhat > 0.
enum class Direction { GammaPlus, GammaMinus };
enum class Terminal { SaddleToSaddle, SaddleToFold };
enum class RuleKind { EqualArea, Interpolated, Viscous };

struct LayerSample {
  double y, u, uhat;
};

struct LayerOrbit {
  std::vector<LayerSample> samples;  // increasing y
  double w = 0.0;
  double delta = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
  Direction direction = Direction::GammaMinus;
  Terminal terminal = Terminal::SaddleToSaddle;
};

struct ShockRule {
  RuleKind kind = RuleKind::EqualArea;
  double w = 0.0;
  double u_l = 0.0;
  double u_r = 0.0;
  double delta = 0.0;
};

struct LayerOptions {
  double seed = 1e-7;          // offset along the saddle eigenvector
  double y_span = 1e4;         // shooting span before NoCrossing
  double rtol = 1e-10;
  double atol = 1e-13;
  double w_tol = 1e-12;        // root tolerance in w
  double delta_tol = 1e-6;     // bisection tolerance for delta_m
  double fold_tol = 1e-6;      // accepted distance to the fold for viscous orbits
  double viscous_span = 1e7;
  double orbit_max_step = 0.01;
};

std::array<double, 2> layer_rhs(double u, double uhat, double w, double delta,
                                 const ModelParams& p);

// H = uhat^2/2 - w u - int_0^u Phi, conserved by the layer flow when delta = 0.
double layer_hamiltonian(double u, double uhat, double w, const ModelParams& p);

// Admissible heights [-Phi(gamma1), -Phi(gamma2)].
std::pair<double, double> jump_zone(const ModelParams& p);

// Outer-branch roots of Phi(u) + w = 0. Throws OutOfJumpZone.
std::pair<double, double> jump_endpoints(double w, const ModelParams& p);

// int_{u_l}^{u_r} (w + Phi(u)) du by adaptive Gauss-Kronrod.
double equal_area_integral(double w, const ModelParams& p);

// w_h(0) = -Phi((gamma1+gamma2)/2); throws NoConvergence if the quadrature
// residual exceeds 1e-9.
ShockRule equal_area_height(const ModelParams& p);

// Same height found instead as the root in w of equal_area_integral.
double equal_area_height_by_quadrature(const ModelParams& p);

// Signed uhat mismatch at u = (u_l+u_r)/2: branch leaving/entering p_r minus
// branch leaving/entering p_l. A branch that turns (uhat = 0) before the
// section contributes 0, which keeps the gap continuous in w.
double shoot_layer_gap(double w, double delta, const ModelParams& p, Direction dir,
                       const LayerOptions& opt = {});

// True when delta is at or beyond the saddle-node of the w_h branch.
bool is_viscous(double delta, const ModelParams& p, Direction dir, const LayerOptions& opt = {});

ShockRule generalised_height(double delta, const ModelParams& p, Direction dir,
                             const LayerOptions& opt = {});

// Smallest |delta| with a viscous (saddle-to-fold) connection, on the side of
// delta > 0 for the given direction.
double delta_m(const ModelParams& p, Direction dir, const LayerOptions& opt = {});

// Integrates the heteroclinic selected by rule. Throws NoCrossing.
LayerOrbit layer_orbit(const ShockRule& rule, const ModelParams& p, Direction dir,
                       const LayerOptions& opt = {});

// |int (w+Phi) du - delta int uhat du| by trapezoid over the orbit.
double generalised_area_residual(const LayerOrbit& orbit, const ModelParams& p);

struct BranchPoint {
  double delta = 0.0;
  double w = 0.0;
  RuleKind kind = RuleKind::EqualArea;
  double u_l = 0.0;
  double u_r = 0.0;
  std::string error;  // empty on success
};

std::vector<BranchPoint> layer_bifurcation_branch(const std::vector<double>& deltas,
                                                  const ModelParams& p, Direction dir,
                                                  Exec exec = Exec::Parallel,
                                                  const LayerOptions& opt = {});

std::string to_string(RuleKind k);
std::string to_string(Direction d);

}  // namespace rnd
