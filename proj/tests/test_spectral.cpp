#include <doctest.h>

#include <cmath>
#include <map>

#include "rnd/spectral.hpp"

using namespace rnd;

namespace {
const WaveProfile& wave_at(double a) {
  static std::map<double, WaveProfile> cache;
  auto it = cache.find(a);
  if (it == cache.end()) {
    ModelParams p = presets::set_a();
    p.a = a;
    p.eps = 1e-4;
    it = cache.emplace(a, het_bvp_solve(singular_het_solve(p), p.eps, p)).first;
  }
  return it->second;
}

const WaveProfile& wave() { return wave_at(0.5182); }

cd evans(cd lambda) { return evans_value(lambda, wave(), wave().params).value; }
}  // namespace

TEST_CASE("eigenvalue blocks") {
  ModelParams p = presets::set_a();
  p.a = 0.5182;
  p.c = 0.198;
  p.eps = 1e-4;
  // Affine in lambda.
  const Eigen::Matrix4cd M0 = eig_matrix_far(Equilibrium::PPlus, 0.0, p);
  const Eigen::Matrix4cd M1 = eig_matrix_far(Equilibrium::PPlus, 1.0, p);
  const Eigen::Matrix4cd M2 = eig_matrix_far(Equilibrium::PPlus, cd(2.0, -3.0), p);
  CHECK((M2 - M0 - cd(2.0, -3.0) * (M1 - M0)).norm() < 1e-9 * M1.norm());

  // Characteristic polynomial eps^2 mu^4 + delta eps mu^3 - (D + eps a lambda) mu^2 - c mu + (lambda - f').
  const cd lam(0.3, 0.7);
  for (Equilibrium e : {Equilibrium::PMinus, Equilibrium::PPlus}) {
    const double u = e == Equilibrium::PMinus ? 1.0 : 0.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(eig_matrix_far(e, lam, p));
    for (int k = 0; k < 4; ++k) {
      const cd mu = es.eigenvalues()[k];
      const cd poly = p.eps * p.eps * std::pow(mu, 4) + p.delta() * p.eps * std::pow(mu, 3) -
                      (diffusivity(u, p) + p.eps * p.a * lam) * mu * mu - p.c * mu +
                      (lam - reaction_prime(u, p));
      CHECK(std::abs(poly) < 1e-8 * (1 + std::abs(p.eps * p.eps * std::pow(mu, 4))));
    }
  }

  // At lambda = 0 the system is the linearisation of the wave equations, so
  // the derivative of the wave solves it.
  const WaveProfile& w = wave();
  for (double z : {-0.5, -1e-3, 0.0, 2e-4, 0.3}) {
    const Eigen::Matrix4d J = slow_jacobian(profile_state(w, z), w.params);
    CHECK((eig_matrix(z, 0.0, w, w.params) - J.cast<cd>()).norm() < 1e-12 * J.norm());
  }
}

TEST_CASE("essential spectrum lies in the left half-plane") {
  ModelParams p = presets::set_a();
  p.eps = 1e-4;
  p.c = 0.198;
  for (double a : {0.0, 0.5182, 1.2}) {
    p.a = a;
    CHECK(dispersion(0.0, Equilibrium::PMinus, p).real() == doctest::Approx(-4.0));
    CHECK(dispersion(0.0, Equilibrium::PPlus, p).real() == doctest::Approx(-1.0));
    CHECK(dispersion_max_real(p) < 0.0);
  }
  p.a = 0.0;
  CHECK(dispersion(1e3, Equilibrium::PPlus, p).real() < dispersion(1e2, Equilibrium::PPlus, p).real());
}

TEST_CASE("large-lambda spatial eigenvalues") {
  ModelParams p = presets::set_a();
  p.eps = 1e-4;
  p.c = 0.198;
  for (double a : {0.0, 0.5182}) {
    p.a = a;
    auto rel_err = [&](double mag) {
      const cd lam = mag;
      Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(eig_matrix_far(Equilibrium::PPlus, lam, p));
      const auto pred = asymptotic_spatial_eigs(lam, p);
      double worst = 0;
      for (const cd& m : pred) {
        double best = INFINITY;
        for (int k = 0; k < 4; ++k) best = std::min(best, std::abs(es.eigenvalues()[k] - m) / std::abs(m));
        worst = std::max(worst, best);
      }
      return worst;
    };
    const double e10 = rel_err(1e10), e12 = rel_err(1e12), e14 = rel_err(1e14);
    CHECK(e12 < e10);
    CHECK(e14 < e12);
    CHECK(e14 < 1e-2);
    int left = 0;
    for (const cd& m : asymptotic_spatial_eigs(cd(1e6, 0.0), p)) left += m.real() < 0;
    CHECK(left == 2);
  }
}

TEST_CASE("Riccati flow") {
  const WaveProfile& w = wave();
  const ModelParams& p = w.params;
  // The unstable plane of the frozen far-field matrix is invariant.
  for (cd lam : {cd(0.5, 0.0), cd(3.0, 40.0)}) {
    const RiccatiState s0 = riccati_start(FlowDirection::Forward, lam, w, p);
    const RiccatiState s1 = riccati_flow_frozen(s0, Equilibrium::PMinus, lam, p, s0.z + 0.5);
    CHECK((s1.W - s0.W).norm() < 1e-9 * (1 + s0.W.norm()));
  }
  // lambda = 10 stays in the primary chart.
  const RiccatiState m = riccati_flow(riccati_start(FlowDirection::Forward, 10.0, w, p), FlowDirection::Forward,
                                      10.0, w, p, 0.0);
  CHECK(m.chart == Chart::Primary);
  CHECK(m.swaps == 0);
  CHECK(frame_det(m) > 1e-6);
}

TEST_CASE("Evans function on the real axis") {
  CHECK(std::abs(evans(0.0)) < 1e-6);
  CHECK(std::abs(evans(1e-2)) > 1e-6);
  CHECK(evans(-0.81).real() * evans(-0.79).real() < 0.0);
  // Real on the real axis, conjugate symmetric off it.
  const cd e = evans(cd(0.4, 0.0));
  CHECK(std::abs(e.imag()) < 1e-8 * std::abs(e));
  const cd a = evans(cd(0.3, 0.5)), b = evans(cd(0.3, -0.5));
  CHECK(std::abs(a - std::conj(b)) < 1e-6 * std::abs(a));
  // Sign stays fixed on (0, 1].
  const double s = evans(0.05).real();
  for (double x : {0.1, 0.3, 0.6, 1.0}) CHECK(evans(x).real() * s > 0.0);
}

TEST_CASE("small windings") {
  const WaveProfile& w = wave();
  CHECK(winding_number(circle_contour(0.0, 1e-3), w, w.params).winding == 1);
  CHECK(winding_number(circle_contour(-0.8, 5e-3), w, w.params).winding == 1);
  CHECK(winding_number(circle_contour(0.5, 0.2), w, w.params).winding == 0);
}

TEST_CASE("serial and parallel sweeps agree bit for bit") {
  const WaveProfile& w = wave();
  const std::vector<cd> pts = circle_contour(cd(0.2, 0.0), 0.5, 8);
  const auto a = evans_sweep(pts, w, w.params, {}, Exec::Serial);
  const auto b = evans_sweep(pts, w, w.params, {}, Exec::Parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}

TEST_CASE("Evans value does not depend on the chart threshold") {
  const WaveProfile& w = wave();
  EvansOptions lo, hi;
  hi.riccati.swap_threshold = 1e-5;
  for (cd lam : {cd(10.0, 0.0), cd(0.0, 1e3), cd(700.0, 700.0)}) {
    const cd x = evans_value(lam, w, w.params, lo).value, y = evans_value(lam, w, w.params, hi).value;
    CHECK(std::abs(x - y) < 1e-6 * std::abs(x));
  }
}

TEST_CASE("second eigenvalue persists along the monotone branch") {
  for (double a : {0.0, 1.0}) {
    const WaveProfile& w = wave_at(a);
    const double lo = evans_value(-0.81, w, w.params).value.real();
    const double hi = evans_value(-0.79, w, w.params).value.real();
    CHECK(lo * hi < 0.0);
  }
}
