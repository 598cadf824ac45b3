#include <doctest.h>

#include <cmath>

#include "rnd/layer.hpp"
#include "rnd/melnikov.hpp"
#include "rnd/reduced.hpp"

using namespace rnd;

namespace {
double fd_layer_slope(const ModelParams& p, double h = 1e-3) {
  const double wp = generalised_height(h, p, Direction::GammaMinus).w;
  const double wm = generalised_height(-h, p, Direction::GammaMinus).w;
  return (wp - wm) / (2 * h);
}
}  // namespace

TEST_CASE("layer Melnikov slope against finite differences") {
  const ModelParams p = presets::set_a();
  const MelnikovResult m = layer_melnikov(p);
  CHECK(std::abs(m.partials.at("w")) > 1e-6);
  CHECK(std::abs(m.partials.at("delta")) > 1e-6);
  const double fd = fd_layer_slope(p);
  CHECK(m.slope_b == doctest::Approx(fd).epsilon(0.05));
  for (const auto& a : m.adjoints) CHECK(a.angle_drift < 1e-8);

  // The adjoint keeps one sign in its uhat component.
  REQUIRE(m.adjoints.size() == 1);
  int pos = 0, neg = 0;
  for (const auto& s : m.adjoints[0].samples) {
    if (s.psi2 > 0) ++pos;
    if (s.psi2 < 0) ++neg;
  }
  CHECK((pos == 0 || neg == 0));

  // The end of the adjoint has decayed.
  const auto& smp = m.adjoints[0].samples;
  double at0 = 0;
  for (const auto& s : smp)
    if (s.t == 0.0) at0 = std::hypot(s.psi1, s.psi2);
  REQUIRE(at0 > 0);
  CHECK(std::hypot(smp.front().psi1, smp.front().psi2) < 1e-10 * at0);
  CHECK(std::hypot(smp.back().psi1, smp.back().psi2) < 1e-10 * at0);
}

TEST_CASE("layer Melnikov is insensitive to the tail truncation") {
  const ModelParams p = presets::set_a();
  MelnikovOptions o;
  const double b1 = layer_melnikov(p, Direction::GammaMinus, o).slope_b;
  o.clip = 1e-13;
  const double b2 = layer_melnikov(p, Direction::GammaMinus, o).slope_b;
  CHECK(std::abs(b1 - b2) < 1e-6 * std::abs(b1));
}

TEST_CASE("piecewise Melnikov on the symmetric standing wave") {
  const ModelParams s = presets::symmetric();
  const MelnikovResult m = piecewise_melnikov(s);
  CHECK(m.slope_b < 0.0);
  CHECK(std::abs(m.v1_minus - m.v1_plus) < 1e-9);

  // Finite difference of c(alpha) through the reduced solver.
  ReducedOptions o;
  o.c_lo = -0.1;
  o.c_hi = 0.1;
  o.c_grid = 9;
  const double h = 1e-3;
  ModelParams lo = s, hi = s;
  lo.alpha -= h;
  hi.alpha += h;
  const double fd =
      (singular_het_solve(hi, o).wavespeed - singular_het_solve(lo, o).wavespeed) / (2 * h);
  CHECK(m.slope_b == doctest::Approx(fd).epsilon(1e-3));

  // Reflection symmetry of the two adjoint halves.
  REQUIRE(m.adjoints.size() == 2);
  const auto& src = m.adjoints[0].samples;  // t <= 0
  const auto& snk = m.adjoints[1].samples;  // t >= 0
  auto interp = [](const std::vector<AdjointSample>& v, double t) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if ((v[i - 1].t - t) * (v[i].t - t) <= 0) {
        const double th = (t - v[i - 1].t) / (v[i].t - v[i - 1].t);
        return (1 - th) * v[i - 1].psi1 + th * v[i].psi1;
      }
    return std::nan("");
  };
  double worst = 0;
  for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double a = interp(snk, t), b = interp(src, -t);
    REQUIRE(std::isfinite(a));
    REQUIRE(std::isfinite(b));
    worst = std::max(worst, std::abs(a + b));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("piecewise formula reduces to the smooth integral") {
  const SmoothLimit sl = piecewise_smooth_limit(presets::set_a());
  CHECK(sl.v1 != 0.0);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(sl.piecewise[i] * sl.v1 - sl.smooth[i]) <= 1e-6 * std::abs(sl.smooth[i]));
}
