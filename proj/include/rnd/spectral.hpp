#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rnd/exec.hpp"
#include "rnd/fullwave.hpp"
#include "rnd/model.hpp"

namespace rnd {

using cd = std::complex<double>;

// Blocks of the linearised system in variables (p, q, r, s):
// (p,q)' = A (p,q) + B (r,s),  (r,s)' = C (p,q) + D (r,s).
struct EigBlocks {
  Eigen::Matrix2cd A, B, C, D;
};

EigBlocks eig_blocks(double u, cd lambda, const ModelParams& p);
Eigen::Matrix4cd eig_matrix(double z, cd lambda, const WaveProfile& wave, const ModelParams& p);
// Constant far-field matrix at u = 1 (PMinus) or u = 0 (PPlus).
Eigen::Matrix4cd eig_matrix_far(Equilibrium end, cd lambda, const ModelParams& p);

// lambda(k) = (f'(u) - D(u) k^2 - eps^2 k^4) / (1 + a eps k^2) + i c k
cd dispersion(double k, Equilibrium end, const ModelParams& p);
// Largest Re lambda over a log grid k in [k_lo, k_hi] on both ends, k = 0 included.
double dispersion_max_real(const ModelParams& p, double k_lo = 1e-3, double k_hi = 1e6, int n = 2000);

// Large-|lambda| predictions for the spatial eigenvalues of the far-field
// matrices. a = 0: the four roots of eps^2 mu^4 + lambda = 0. a > 0: the
// pair +-sqrt(a lambda / eps) and the pair +-1/sqrt(a eps).
std::array<cd, 4> asymptotic_spatial_eigs(cd lambda, const ModelParams& p);

enum class Chart { Primary, Swapped };
enum class FlowDirection { Forward, Backward };

// Primary: the plane is {(x, W x)} with x in (p,q). Swapped: {(V y, y)} with y in (r,s).
struct RiccatiState {
  Eigen::Matrix2cd W = Eigen::Matrix2cd::Zero();
  Chart chart = Chart::Primary;
  double z = 0.0;
  int swaps = 0;
};

struct RiccatiOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double swap_threshold = 1e-6;  // on |det| of the orthonormalised frame block
  double layer_cap = 0.5;        // step cap inside the layer, in units of eps
  double layer_halfwidth = 60.0; // in units of eps
  std::size_t max_steps = 500000;
};

// Unstable plane of M-(lambda) (Forward) or stable plane of M+(lambda)
// (Backward) at the matching end of the wave's domain.
RiccatiState riccati_start(FlowDirection dir, cd lambda, const WaveProfile& wave, const ModelParams& p,
                           const RiccatiOptions& opt = {});
RiccatiState riccati_flow(const RiccatiState& start, FlowDirection dir, cd lambda, const WaveProfile& wave,
                          const ModelParams& p, double z_end, const RiccatiOptions& opt = {});
// Flows with the coefficients frozen at one end (for invariance checks).
RiccatiState riccati_flow_frozen(const RiccatiState& start, Equilibrium end, cd lambda, const ModelParams& p,
                                 double z_end, const RiccatiOptions& opt = {});

// Primary-chart value of |det| of the orthonormalised (p,q) frame block.
double frame_det(const RiccatiState& s);

struct EvansSample {
  cd lambda;
  cd value;
  double z0 = 0.0;
  int chart_swaps = 0;
};

struct EvansOptions {
  RiccatiOptions riccati;
  double level = 0.7;  // z0 is where u crosses this level
};

// det(W+ - W-) at z0, evaluated in whichever chart keeps both planes finite;
// the chart conversion is exact so the value is chart independent.
EvansSample evans_value(cd lambda, const WaveProfile& wave, const ModelParams& p,
                        const EvansOptions& opt = {});
// Same, with z0 given directly.
EvansSample evans_value_at(cd lambda, double z0, const WaveProfile& wave, const ModelParams& p,
                           const EvansOptions& opt = {});

// Closed contours (counterclockwise, first point not repeated).
// Semicircle of radius R in the right half-plane, closed along the imaginary
// axis with a right-going detour of radius r around the origin.
std::vector<cd> semicircle_contour(double R, double r, int n = 720);
std::vector<cd> circle_contour(cd centre, double r, int n = 64);

struct WindingResult {
  int winding = 0;
  double raw = 0.0;  // total argument change / 2 pi
  std::vector<EvansSample> samples;  // refined contour, in order
};

struct WindingOptions {
  EvansOptions evans;
  double max_gap = 1.5707963267948966;  // pi/2
  int max_bisections = 20;
};

// Adaptive: subdivides contour edges until consecutive arguments differ by
// less than max_gap. Throws RefinementExhausted otherwise.
WindingResult winding_number(const std::vector<cd>& contour, const WaveProfile& wave, const ModelParams& p,
                             const WindingOptions& opt = {}, Exec exec = Exec::Parallel);

struct SpectrumEigenvalue {
  double value = 0.0;
  int multiplicity = 0;
};

struct SpectrumReport {
  std::vector<SpectrumEigenvalue> real_eigenvalues;
  std::vector<std::pair<double, int>> windings;  // (R, winding)
  std::string text;
};

struct ScanOptions {
  WindingOptions winding;
  double step = 1e-2;
  double root_tol = 1e-8;
  double origin_detour = 1e-3;
  double multiplicity_radius = 1e-3;
};

// Real-axis sign scan on [re_lo, re_hi] with bisection at sign changes, a
// small winding around each root for its multiplicity, and semicircle
// windings at the given radii.
SpectrumReport point_spectrum_scan(const WaveProfile& wave, const ModelParams& p, double re_lo, double re_hi,
                                   const std::vector<double>& radii, const ScanOptions& opt = {},
                                   Exec exec = Exec::Parallel);

// Evaluates E at every contour point (no refinement).
std::vector<EvansSample> evans_sweep(const std::vector<cd>& lambdas, const WaveProfile& wave,
                                     const ModelParams& p, const EvansOptions& opt = {},
                                     Exec exec = Exec::Parallel);

// re_lambda,im_lambda,re_E,im_E,chart_swaps
void write_evans_csv(std::ostream& os, const std::vector<EvansSample>& samples);

}  // namespace rnd
