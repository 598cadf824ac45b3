#include <doctest.h>

#include <cmath>

#include "rnd/errors.hpp"
#include "rnd/fullwave.hpp"
#include "rnd/layer.hpp"

using namespace rnd;

namespace {
ModelParams wave_params(double eps) {
  ModelParams p = presets::set_a();
  p.a = 0.5182;
  p.eps = eps;
  return p;
}

const WaveProfile& reference_wave() {
  static const WaveProfile w = [] {
    const ModelParams p = wave_params(1e-4);
    return het_bvp_solve(singular_het_solve(p), p.eps, p);
  }();
  return w;
}
}  // namespace

TEST_CASE("fast and slow fields") {
  ModelParams p = wave_params(1e-4);
  p.c = 0.2;
  for (Equilibrium e : {Equilibrium::PMinus, Equilibrium::PPlus, Equilibrium::PB}) {
    const State4 f = fast_rhs(equilibrium_state(e, p), p);
    for (double v : f) CHECK(std::abs(v) < 1e-14);
  }
  const State4 x{0.4, 0.1, -0.05, 0.3};
  const State4 f = fast_rhs(x, p), s = slow_rhs(x, p);
  for (int i = 0; i < 4; ++i) CHECK(s[i] == doctest::Approx(f[i] / p.eps).epsilon(1e-14));

  // Finite-difference check of the slow Jacobian.
  const Eigen::Matrix4d J = slow_jacobian(x, p);
  for (int j = 0; j < 4; ++j) {
    State4 xp = x, xm = x;
    const double h = 1e-6;
    xp[j] += h;
    xm[j] -= h;
    const State4 fp = slow_rhs(xp, p), fm = slow_rhs(xm, p);
    for (int i = 0; i < 4; ++i)
      CHECK(J(i, j) == doctest::Approx((fp[i] - fm[i]) / (2 * h)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("saddle splitting at both ends") {
  ModelParams p = wave_params(1e-4);
  p.c = 0.198;
  for (Equilibrium e : {Equilibrium::PMinus, Equilibrium::PPlus}) {
    const SaddleSplit s = saddle_subspaces(e, p);
    CHECK(s.eigenvalues[0].real() < 0);
    CHECK(s.eigenvalues[1].real() < 0);
    CHECK(s.eigenvalues[2].real() > 0);
    CHECK(s.eigenvalues[3].real() > 0);
    // Fast/slow separation.
    CHECK(std::abs(s.eigenvalues[0].real()) / std::abs(s.eigenvalues[1].real()) > 100);
    CHECK(std::abs(s.eigenvalues[3].real()) / std::abs(s.eigenvalues[2].real()) > 100);
    std::complex<double> prod = 1.0;
    for (int k = 0; k < 4; ++k) prod *= s.eigenvalues[k];
    CHECK(std::abs(prod - s.jacobian.determinant()) < 1e-8 * std::abs(prod));
    // Orthonormal bases spanning invariant planes.
    CHECK((s.stable.transpose() * s.stable - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    const Eigen::Matrix<double, 4, 2> JS = s.jacobian * s.stable;
    const Eigen::Matrix<double, 4, 2> off = JS - s.stable * (s.stable.transpose() * JS);
    CHECK(off.norm() < 1e-8 * JS.norm());
  }
  ModelParams bad = p;
  bad.eps = 0.0;
  CHECK_THROWS_AS(saddle_subspaces(Equilibrium::PMinus, bad), ConfigError);
}

TEST_CASE("full wave at eps = 1e-4") {
  const WaveProfile& w = reference_wave();
  const ModelParams& p = w.params;
  CHECK(w.wavespeed == doctest::Approx(0.19826).epsilon(1e-4 / 0.19826));
  CHECK(w.residual_norm < 1e-5);
  CHECK_FALSE(w.experimental);

  const State4 a = equilibrium_state(Equilibrium::PMinus, p), b = equilibrium_state(Equilibrium::PPlus, p);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(w.y.front()[i] - a[i]) < 1e-5);
    CHECK(std::abs(w.y.back()[i] - b[i]) < 1e-5);
  }
  for (std::size_t i = 1; i < w.y.size(); ++i) CHECK(w.y[i][0] <= w.y[i - 1][0] + 1e-12);

  // Collocation defect off the nodes stays at the level of the nodes' residual.
  CHECK(profile_defect(w, {0.25, 0.5, 0.75}) < 2 * std::max(w.residual_norm, 1e-8));

  // Inside the layer, w sits on the generalised rule.
  const ShockRule r = generalised_height(p.a * w.wavespeed, p, Direction::GammaMinus);
  const double mu = 0.05 * (r.u_r - r.u_l);
  double dev = 0;
  for (const auto& y : w.y)
    if (y[0] > r.u_l + mu && y[0] < r.u_r - mu) dev = std::max(dev, std::abs(y[3] - r.w));
  CHECK(dev <= 10 * p.eps);

  // Re-solving at fixed c keeps the profile.
  BvpOptions o;
  o.fix_c = true;
  ModelParams q = p;
  q.c = w.wavespeed;
  const WaveProfile r2 = het_bvp_resolve(w, q, o);
  CHECK(r2.wavespeed == w.wavespeed);
  double diff = 0;
  for (std::size_t i = 0; i < std::min(r2.y.size(), w.y.size()); ++i)
    diff = std::max(diff, std::abs(r2.y[i][0] - w.y[i][0]));
  CHECK(diff < 1e-6);

  CHECK(profile_position(w, 0.7) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("wavespeed converges as eps decreases") {
  const ModelParams p0 = wave_params(1e-3);
  const SingularHeteroclinic seed = singular_het_solve(p0);
  const double c3 = het_bvp_solve(seed, 1e-3, wave_params(1e-3)).wavespeed;
  const double c4 = reference_wave().wavespeed;
  const double c5 = het_bvp_solve(seed, 1e-5, wave_params(1e-5)).wavespeed;
  CHECK(std::abs(c4 - seed.wavespeed) < std::abs(c3 - seed.wavespeed));
  CHECK(std::abs(c5 - seed.wavespeed) < std::abs(c4 - seed.wavespeed));
}
