#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "rnd/exec.hpp"
#include "rnd/layer.hpp"
#include "rnd/model.hpp"

namespace rnd {

// WsPMinus and WuPPlus are the mirrored (evasion) anchors.
enum class Anchor { WuPMinus, WsPPlus, WuFoldedSaddle, WsPMinus, WuPPlus };
enum class HetKind { MonotoneInvasion, MonotoneEvasion, Nonmonotone, CanardWave, StandingWave };

struct SlowSample {
  double zeta, u, v;
};

struct SlowArc {
  std::vector<SlowSample> samples;  // in integration order, starting at the anchor
  Anchor anchor = Anchor::WuPMinus;
  int orientation_flag = 1;  // sign of D(u) along the arc
};

struct SingularHeteroclinic {
  SlowArc left_arc;   // on the branch containing p+ (u < gamma1)
  SlowArc right_arc;  // on the branch containing p- (u > gamma2)
  SlowArc middle_arc; // canard waves only: slow run on S_m into the folded saddle
  ShockRule shock;
  double wavespeed = 0.0;
  double a = 0.0;
  HetKind kind = HetKind::MonotoneInvasion;
  double residual = 0.0;  // v-mismatch across the shock
};

struct ReducedOptions {
  double seed = 1e-7;
  double zeta_span = 1e5;
  double rtol = 1e-11;
  double atol = 1e-13;
  double pb_guard = 1e-4;  // Miss when entering this ball around p_b
  double max_step = 0.0;   // only used when recording arcs
  double c_lo = 0.1;       // default wavespeed bracket for singular_het_solve
  double c_hi = 0.3;
  int c_grid = 20;
  double c_tol = 1e-12;
  LayerOptions layer;
};

std::array<double, 2> desing_rhs(double u, double v, double c, const ModelParams& p);

// -v^2/2 - int_0^u D f, conserved for c = 0.
double reduced_hamiltonian(double u, double v, const ModelParams& p);

// v at the n-th crossing of {u = section_u} by the anchored manifold. Throws Miss.
double manifold_section_hit(Anchor anchor, double c, const ModelParams& p, double section_u,
                            int crossing = 1, const ReducedOptions& opt = {});

// The same integration with samples recorded up to the crossing.
SlowArc manifold_arc(Anchor anchor, double c, const ModelParams& p, double section_u,
                     int crossing = 1, const ReducedOptions& opt = {});

// v_+(c) - v_-(c) across the shock selected by generalised_height(a c);
// crossing picks the intersection of W^s(p+) with {u = u_l}. NaN on Miss.
double het_mismatch(double c, const ModelParams& p, int crossing = 1,
                    const ReducedOptions& opt = {});

// Mirrored problem (p+ -> p-, GammaPlus shock); its roots are -c of the invasion ones.
double het_mismatch_evasion(double c, const ModelParams& p, const ReducedOptions& opt = {});

// Root of het_mismatch in c on [opt.c_lo, opt.c_hi] at the a stored in p.
SingularHeteroclinic singular_het_solve(const ModelParams& p, const ReducedOptions& opt = {});
struct ViscousOnset {
  double delta_m, c_m, a_m;  // a_m = delta_m / c_m
};

// Wavespeed c_m of the fold-height (viscous) wave and the a at which the
// monotone branch reaches it.
ViscousOnset viscous_onset(const ModelParams& p, const ReducedOptions& opt = {});

// Mirrored solve; wavespeed is negative.
SingularHeteroclinic singular_het_solve_evasion(const ModelParams& p,
                                                const ReducedOptions& opt = {});

// Matches the second intersection of W^s(p+) with {u = u_l}.
SingularHeteroclinic nonmonotone_het_solve(const ModelParams& p, const ReducedOptions& opt = {});

struct ContinuationPoint {
  double value;  // varied parameter
  double free;   // solved parameter
  double residual;
};

struct ContinuationOptions {
  double h0 = 1e-2;
  double h_min = 1e-6;
  double h_max = 5e-2;
  double residual_tol = 1e-8;
};

struct ContinuationResult {
  std::vector<ContinuationPoint> points;
  bool completed = false;  // false when stopped by StepFailure
  std::string message;
};

// Natural-parameter continuation of the monotone singular heteroclinic from
// p0 (which must already solve it) while `vary` moves to `target`; `free` is
// re-solved at each step. Does not throw on step failure; see completed.
ContinuationResult continue_branch(const std::string& vary, double target, const ModelParams& p0,
                                   const std::string& free = "c",
                                   const ContinuationOptions& copt = {},
                                   const ReducedOptions& opt = {});

// Codimension-two tangency in (c, alpha) from an initial guess in p (p.c, p.alpha).
// The backward W^s(p+) has its first turning point (u' = 0) on {u = u_l}.
std::pair<double, double> detect_tangency(const ModelParams& p, const ReducedOptions& opt = {});

// v-mismatch at u = gamma1/2 between W^u of the left folded saddle and W^s(p+).
double fs_to_s_mismatch(double c, const ModelParams& p, const ReducedOptions& opt = {});

struct FsToSPoint {
  double alpha;
  double c;
  std::string error;
};

// For each alpha, the wavespeed(s) c in [c_lo, c_hi] on the FS-to-S curve.
std::vector<FsToSPoint> fs_to_s_branch(const ModelParams& p, const std::vector<double>& alphas,
                                       double c_lo, double c_hi, Exec exec = Exec::Parallel,
                                       const ReducedOptions& opt = {});

struct Codim3Point {
  double a, c, alpha;
};

// FS-to-S connection whose shock lands exactly at the fold height (delta = delta_m).
Codim3Point codim3_point(const ModelParams& p, double c0, double alpha0,
                         const ReducedOptions& opt = {});

struct CanardCrossing {
  bool found = false;
  double u = 0.0, v = 0.0;         // crossing point on S_m
  double u_source = 0.0;           // jump-off point on W^u(p-)
  double signed_gap_before = 0.0;  // sign change witnesses transversality
  double signed_gap_after = 0.0;
};

// Projects the jump-eligible part of W^u(p-) onto S_m and intersects it with
// the folded-saddle unstable manifold. Requires delta = a c > 0.
CanardCrossing canard_crossing(const ModelParams& p, const ReducedOptions& opt = {});

SingularHeteroclinic canard_wave_solve(const ModelParams& p, const ReducedOptions& opt = {});

// Smallest a on [a_lo, a_hi] with a transverse canard crossing, by bisection.
double canard_threshold(const ModelParams& p, double a_lo, double a_hi, double tol = 1e-3,
                        const ReducedOptions& opt = {});

// c = 0 wave; `free` is re-solved so the arcs match across the equal-area shock.
SingularHeteroclinic standing_wave_solve(const ModelParams& p, const std::string& free,
                                         const ReducedOptions& opt = {});

std::string to_string(HetKind k);
std::string to_string(Anchor a);

}  // namespace rnd
