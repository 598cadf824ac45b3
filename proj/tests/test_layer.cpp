#include <doctest.h>

#include <cmath>

#include "rnd/errors.hpp"
#include "rnd/layer.hpp"

using namespace rnd;

namespace {
// Closed-form onset of the viscous regime: at the fold height the connection
// into the fold is uhat = sqrt(beta/6) (u - gamma1)(u - u3).
double delta_m_closed(const ModelParams& p) { return std::sqrt(p.beta / 6.0) * 1.5 * (p.gamma2 - p.gamma1); }
}  // namespace

TEST_CASE("layer vector field") {
  const ModelParams p = presets::set_a();
  const double w = -potential(0.3, p);
  auto f = layer_rhs(0.3, 0.0, w, 0.2, p);
  CHECK(f[0] == 0.0);
  CHECK(std::abs(f[1]) < 1e-15);
  CHECK(layer_rhs(0.4, 0.1, w, 0.0, p)[1] == layer_rhs(0.4, -0.3, w, 0.0, p)[1]);
  auto a = layer_rhs(0.4, 0.1, w, 0.2, p), b = layer_rhs(0.4, -0.1, w, -0.2, p);
  CHECK(a[0] == -b[0]);
  CHECK(a[1] == b[1]);
}

TEST_CASE("jump endpoints") {
  const ModelParams s = presets::symmetric();
  auto [ul, ur] = jump_endpoints(-0.0625, s);
  CHECK(ul == doctest::Approx(0.06699).epsilon(1e-4));
  CHECK(ur == doctest::Approx(0.93301).epsilon(1e-4));
  CHECK(std::abs(ul + ur - 1.0) < 1e-12);
  for (double w : {-0.07, -0.05, -0.03}) {
    auto [l, r] = jump_endpoints(w, s);
    CHECK(std::abs(potential(l, s) + w) < 1e-12);
    CHECK(std::abs(potential(r, s) + w) < 1e-12);
  }
  const ModelParams p = presets::set_a();
  auto [lo, hi] = jump_zone(p);
  CHECK(jump_endpoints(-potential(p.gamma1, p), p).first == doctest::Approx(p.gamma1).epsilon(1e-12));
  CHECK_THROWS_AS(jump_endpoints(std::min(lo, hi) - 1e-3, p), OutOfJumpZone);
}

TEST_CASE("equal-area height") {
  const ModelParams p = presets::set_a();
  const ShockRule r = equal_area_height(p);
  CHECK(r.kind == RuleKind::EqualArea);
  CHECK(r.w == doctest::Approx(-0.5648).epsilon(5e-4 / 0.5648));
  CHECK(std::abs(equal_area_integral(r.w, p)) < 1e-9);
  CHECK(std::abs(equal_area_height_by_quadrature(p) - r.w) < 1e-9);
  CHECK(equal_area_height(presets::symmetric()).w == doctest::Approx(-0.0625).epsilon(1e-14));
}

TEST_CASE("shooting gap") {
  const ModelParams p = presets::set_a();
  const double wh = equal_area_height(p).w;
  CHECK(std::abs(shoot_layer_gap(wh, 0.0, p, Direction::GammaMinus)) < 1e-8);
  const double gp = shoot_layer_gap(wh + 1e-3, 0.0, p, Direction::GammaMinus);
  const double gm = shoot_layer_gap(wh - 1e-3, 0.0, p, Direction::GammaMinus);
  CHECK(gp * gm < 0.0);
  // Mirror pairing.
  for (double d : {0.05, 0.15}) {
    const double w = wh - 1e-3;
    CHECK(shoot_layer_gap(w, d, p, Direction::GammaPlus) ==
          doctest::Approx(-shoot_layer_gap(w, -d, p, Direction::GammaMinus)).epsilon(1e-6));
  }
}

TEST_CASE("generalised rule and saddle-node") {
  const ModelParams p = presets::set_a();
  const ShockRule r = generalised_height(0.1, p, Direction::GammaMinus);
  CHECK(r.kind == RuleKind::Interpolated);
  CHECK(r.w == doctest::Approx(-0.5661).epsilon(5e-4 / 0.5661));
  CHECK(generalised_height(0.0, p, Direction::GammaMinus).w == equal_area_height(p).w);

  const double dm = delta_m(p, Direction::GammaMinus);
  CHECK(dm == doctest::Approx(delta_m_closed(p)).epsilon(1e-5));
  CHECK(dm == doctest::Approx(0.248).epsilon(3e-3 / 0.248));
  const ShockRule v = generalised_height(dm + 0.01, p, Direction::GammaMinus);
  CHECK(v.kind == RuleKind::Viscous);
  CHECK(v.w == doctest::Approx(-potential(p.gamma1, p)).epsilon(1e-12));
  CHECK(v.w == doctest::Approx(-0.5671).epsilon(5e-4 / 0.5671));
  CHECK(std::abs(generalised_height(dm - 1e-4, p, Direction::GammaMinus).w - v.w) < 1e-5);

  const ModelParams n = presets::nonmonotone();
  CHECK(delta_m(n, Direction::GammaMinus) == doctest::Approx(delta_m_closed(n)).epsilon(1e-5));
  CHECK(delta_m(n, Direction::GammaMinus) == doctest::Approx(0.2121).epsilon(3e-3 / 0.2121));
}

TEST_CASE("layer orbits: conservation, area residual, monotone graph") {
  for (const ModelParams& p : {presets::set_a(), presets::symmetric()}) {
    const LayerOrbit o = layer_orbit(equal_area_height(p), p, Direction::GammaMinus);
    const double h0 = layer_hamiltonian(o.u_left, 0.0, o.w, p);
    for (const auto& s : o.samples) CHECK(std::abs(layer_hamiltonian(s.u, s.uhat, o.w, p) - h0) < 1e-7);
    CHECK(std::abs(potential(o.u_left, p) + o.w) < 1e-8);
    CHECK(std::abs(potential(o.u_right, p) + o.w) < 1e-8);
  }
  const ModelParams p = presets::set_a();
  auto [zlo, zhi] = jump_zone(p);
  for (double d : {0.0, 0.05, 0.1, 0.2, 0.3}) {
    for (Direction dir : {Direction::GammaMinus, Direction::GammaPlus}) {
      const double dd = dir == Direction::GammaMinus ? d : -d;
      const ShockRule r = generalised_height(dd, p, dir);
      CHECK(r.w >= std::min(zlo, zhi) - 1e-12);
      CHECK(r.w <= std::max(zlo, zhi) + 1e-12);
      const LayerOrbit o = layer_orbit(r, p, dir);
      CHECK(generalised_area_residual(o, p) < 1e-6);
      const double sign = dir == Direction::GammaMinus ? -1.0 : 1.0;
      for (std::size_t i = 1; i + 1 < o.samples.size(); ++i) {
        CHECK(sign * o.samples[i].uhat > 0.0);
        CHECK(sign * (o.samples[i + 1].u - o.samples[i].u) > 0.0);
      }
    }
  }
}

TEST_CASE("bifurcation branch: plateau, symmetry, serial reference") {
  const ModelParams p = presets::set_a();
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(0.01 * i);
  const auto par = layer_bifurcation_branch(grid, p, Direction::GammaMinus, Exec::Parallel);
  const auto ser = layer_bifurcation_branch(grid, p, Direction::GammaMinus, Exec::Serial);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].error.empty());
    CHECK(par[i].w == ser[i].w);
  }
  CHECK(par.front().w == doctest::Approx(-0.5648).epsilon(1e-3));
  CHECK(par.back().w == doctest::Approx(-0.5671).epsilon(1e-3));
  CHECK(par.back().kind == RuleKind::Viscous);
  for (std::size_t i = 1; i < par.size(); ++i) CHECK(par[i].w <= par[i - 1].w + 1e-12);

  std::vector<double> neg;
  for (double d : grid) neg.push_back(-d);
  const auto plus = layer_bifurcation_branch(neg, p, Direction::GammaPlus);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(plus[i].w - par[i].w) < 1e-9);
}
