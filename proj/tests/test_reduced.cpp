#include <doctest.h>

#include <cmath>

#include "rnd/errors.hpp"
#include "rnd/reduced.hpp"

using namespace rnd;

namespace {
ReducedOptions symmetric_bracket() {
  ReducedOptions o;
  o.c_lo = -0.1;
  o.c_hi = 0.1;
  o.c_grid = 9;
  return o;
}
}  // namespace

TEST_CASE("desingularised field and Hamiltonian") {
  const ModelParams p = presets::set_a();
  const double c = 0.2;
  for (auto [u, v] : {std::pair{0.0, 0.0}, std::pair{1.0, -c}, std::pair{p.alpha, -c * p.alpha}}) {
    auto f = desing_rhs(u, v, c, p);
    CHECK(std::abs(f[0]) < 1e-15);
    CHECK(std::abs(f[1]) < 1e-15);
  }
  const ModelParams s = presets::symmetric();
  CHECK(reduced_hamiltonian(0.0, 0.0, s) == 0.0);
  CHECK(std::abs(reduced_hamiltonian(1.0, 0.0, s)) < 1e-14);
}

TEST_CASE("section hits") {
  const ModelParams s = presets::symmetric();
  const ShockRule r = equal_area_height(s);
  const double vm = manifold_section_hit(Anchor::WuPMinus, 0.0, s, r.u_r);
  const double vp = manifold_section_hit(Anchor::WsPPlus, 0.0, s, r.u_l);
  CHECK(std::abs(vm - vp) < 1e-8);
  const double v1 = manifold_section_hit(Anchor::WuPMinus, 0.0, s, r.u_r);
  const double v2 = manifold_section_hit(Anchor::WuPMinus, 1e-6, s, r.u_r);
  CHECK(std::abs(v1 - v2) < 1e-4);
}

TEST_CASE("singular heteroclinics of set A") {
  ModelParams p = presets::set_a();
  const SingularHeteroclinic h0 = singular_het_solve(p);
  CHECK(h0.wavespeed == doctest::Approx(0.19686).epsilon(1e-4 / 0.19686));
  CHECK(h0.residual < 1e-8);
  CHECK(std::abs(potential(h0.shock.u_l, p) + h0.shock.w) < 1e-8);
  CHECK(std::abs(potential(h0.shock.u_r, p) + h0.shock.w) < 1e-8);
  CHECK(h0.kind == HetKind::MonotoneInvasion);

  p.a = 0.5182;
  const SingularHeteroclinic h1 = singular_het_solve(p);
  CHECK(h1.wavespeed == doctest::Approx(0.19817).epsilon(2e-4 / 0.19817));
  CHECK(h1.shock.kind == RuleKind::Interpolated);

  p.a = 2.0;
  const SingularHeteroclinic h2 = singular_het_solve(p);
  CHECK(h2.shock.kind == RuleKind::Viscous);
  CHECK(h2.wavespeed == doctest::Approx(0.1994).epsilon(5e-4 / 0.1994));

  const ViscousOnset vo = viscous_onset(presets::set_a());
  CHECK(vo.c_m == doctest::Approx(h2.wavespeed).epsilon(1e-9));
  CHECK(vo.a_m * vo.c_m == doctest::Approx(vo.delta_m).epsilon(1e-12));

  // Mirrored problem returns the opposite wavespeed.
  p.a = 0.5182;
  CHECK(singular_het_solve_evasion(p).wavespeed == doctest::Approx(-h1.wavespeed).epsilon(1e-8));
}

TEST_CASE("arc orientation follows the sign of D") {
  ModelParams p = presets::set_a();
  ReducedOptions o;
  o.max_step = 0.05;
  const SingularHeteroclinic h = singular_het_solve(p, o);
  CHECK(h.left_arc.orientation_flag == 1);
  CHECK(h.right_arc.orientation_flag == 1);
  // Physical flow u' = -(v + c u)/D: W^u(p-) leaves u = 1 downward in z.
  for (const auto& s : h.right_arc.samples) CHECK(s.u > p.gamma2);
  for (const auto& s : h.left_arc.samples) CHECK(s.u < p.gamma1);
}

TEST_CASE("symmetric standing wave") {
  const ModelParams s = presets::symmetric();
  const SingularHeteroclinic h = singular_het_solve(s, symmetric_bracket());
  CHECK(std::abs(h.wavespeed) < 1e-9);
  CHECK(h.shock.u_l == doctest::Approx(0.06699).epsilon(1e-4 / 0.06699));
  CHECK(h.shock.u_r == doctest::Approx(0.93301).epsilon(1e-4 / 0.93301));
  for (const SlowArc* arc : {&h.left_arc, &h.right_arc})
    for (const auto& x : arc->samples) CHECK(std::abs(reduced_hamiltonian(x.u, x.v, s)) < 1e-8);

  const SingularHeteroclinic sw = standing_wave_solve(s, "alpha");
  CHECK(sw.kind == HetKind::StandingWave);
  CHECK(sw.residual < 1e-8);

  // Off the symmetric line c = 0 no longer matches.
  ModelParams q = s;
  q.gamma2 = 0.78;
  CHECK(std::abs(het_mismatch(0.0, q)) > 1e-4);
}

TEST_CASE("two-leg continuation from the symmetric wave") {
  const ModelParams s = presets::symmetric();
  const ContinuationResult r1 = continue_branch("alpha", 0.2, s);
  REQUIRE(r1.completed);
  for (std::size_t i = 1; i < r1.points.size(); ++i) CHECK(r1.points[i].free > r1.points[i - 1].free);
  CHECK(r1.points.front().free == doctest::Approx(0.0));
  for (const auto& pt : r1.points) CHECK(pt.residual < 1e-8);
  ModelParams s2 = s;
  s2.alpha = 0.2;
  s2.c = r1.points.back().free;
  const ContinuationResult r2 = continue_branch("gamma1", 7.0 / 12.0, s2);
  REQUIRE(r2.completed);
  CHECK(r2.points.back().free == doctest::Approx(0.19686).epsilon(2e-4 / 0.19686));
}

TEST_CASE("tangency, nonmonotone wave, FS-to-S") {
  ModelParams p = presets::nonmonotone();
  p.c = 0.08;
  p.alpha = 0.12;
  const auto [tc, ta] = detect_tangency(p);
  CHECK(tc == doctest::Approx(0.0756).epsilon(2e-3 / 0.0756));
  CHECK(ta == doctest::Approx(0.1212).epsilon(2e-3 / 0.1212));

  // Monotone matching exists just above the tangency alpha and not below it.
  ModelParams above = presets::nonmonotone(), below = presets::nonmonotone();
  above.alpha = ta + 2e-3;
  below.alpha = ta - 2e-3;
  ReducedOptions o;
  o.c_lo = 0.05;
  o.c_hi = 0.12;
  o.c_grid = 40;
  CHECK_NOTHROW(singular_het_solve(above, o));
  CHECK_THROWS_AS(singular_het_solve(below, o), NoRoot);

  ModelParams n = presets::nonmonotone();
  n.alpha = 0.115;
  o.c_lo = 0.09;
  o.c_hi = 0.11;
  const SingularHeteroclinic h = nonmonotone_het_solve(n, o);
  CHECK(h.wavespeed == doctest::Approx(0.1).epsilon(2e-3 / 0.1));
  CHECK(h.residual < 1e-8);

  std::vector<double> alphas{0.12, 0.125, 0.13, 0.135};
  const auto fs = fs_to_s_branch(presets::nonmonotone(), alphas, 0.03, 0.15, Exec::Parallel);
  const auto fs_ser = fs_to_s_branch(presets::nonmonotone(), alphas, 0.03, 0.15, Exec::Serial);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    REQUIRE(fs[i].error.empty());
    CHECK(fs[i].c == fs_ser[i].c);
    ModelParams q = presets::nonmonotone();
    q.alpha = fs[i].alpha;
    CHECK(std::abs(fs_to_s_mismatch(fs[i].c, q)) < 1e-7);
    if (i > 0) CHECK(fs[i].c < fs[i - 1].c);
  }
}

TEST_CASE("codimension-three point, (c, alpha) components") {
  const Codim3Point c3 = codim3_point(presets::nonmonotone(), 0.07, 0.14);
  CHECK(c3.c == doctest::Approx(0.0657).epsilon(1e-2 / 0.0657));
  CHECK(c3.alpha == doctest::Approx(0.1384).epsilon(1e-2 / 0.1384));
  // a follows from the delta_m of this parameter set.
  CHECK(c3.a * c3.c == doctest::Approx(delta_m(presets::nonmonotone(), Direction::GammaMinus)).epsilon(1e-6));
}

TEST_CASE("canard crossing") {
  ModelParams p = presets::canard();
  p.a = 0.5;
  const CanardCrossing cc = canard_crossing(p);
  REQUIRE(cc.found);
  CHECK(cc.signed_gap_before * cc.signed_gap_after < 0.0);
  CHECK(std::abs(potential(cc.u, p) - potential(cc.u_source, p)) < 1e-9);
  CHECK(cc.u > p.gamma1);
  CHECK(cc.u < p.gamma2);
  const SingularHeteroclinic h = canard_wave_solve(p);
  CHECK(h.kind == HetKind::CanardWave);

  ModelParams weak = presets::canard();
  weak.a = 0.05;
  CHECK_FALSE(canard_crossing(weak).found);
  CHECK_THROWS_AS(canard_wave_solve(weak), NoTransverseCrossing);

  const double thr = canard_threshold(presets::canard(), 0.01, 1.0);
  CHECK(thr > 0.05);
  CHECK(thr < 0.5);

  // Persistence: perturb alpha by 1e-3 and move c along the FS-to-S curve.
  ModelParams q = presets::canard();
  q.a = 0.5;
  q.alpha += 1e-3;
  const auto fs = fs_to_s_branch(q, {q.alpha}, 0.15, 0.25, Exec::Serial);
  REQUIRE(fs[0].error.empty());
  q.c = fs[0].c;
  CHECK(canard_crossing(q).found);
}
