#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "rnd/errors.hpp"
#include "rnd/model.hpp"

using namespace rnd;

TEST_CASE("diffusivity roots and value at zero") {
  const ModelParams p = presets::set_a();
  CHECK(diffusivity(p.gamma1, p) == doctest::Approx(0.0));
  CHECK(diffusivity(p.gamma2, p) == doctest::Approx(0.0));
  CHECK(diffusivity(0.0, p) == doctest::Approx(6.0 * (7.0 / 12.0) * 0.75).epsilon(1e-15));
  CHECK(diffusivity(0.0, p) == doctest::Approx(2.625).epsilon(1e-15));
}

TEST_CASE("potential is the antiderivative of the diffusivity") {
  const ModelParams p = presets::set_a();
  CHECK(potential(0.0, p) == 0.0);
  const double h = 1e-6;
  CHECK(std::abs((potential(0.5 + h, p) - potential(0.5 - h, p)) / (2 * h) - diffusivity(0.5, p)) < 1e-8);
  CHECK(potential(0.5, presets::symmetric()) == doctest::Approx(0.0625).epsilon(1e-14));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-0.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const double u = U(rng), hh = 1e-5;
    const double fd = (potential(u + hh, p) - potential(u - hh, p)) / (2 * hh);
    const double d = diffusivity(u, p);
    CHECK(std::abs(fd - d) <= 1e-7 * std::max(1.0, std::abs(d)));
  }
}

TEST_CASE("reaction roots and slopes") {
  const ModelParams p = presets::set_a();
  for (double u : {0.0, p.alpha, 1.0}) CHECK(reaction(u, p) == doctest::Approx(0.0));
  const double h = 1e-6;
  CHECK((reaction(h, p) - reaction(-h, p)) / (2 * h) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK((reaction(1 + h, p) - reaction(1 - h, p)) / (2 * h) == doctest::Approx(-4.0).epsilon(1e-8));
  CHECK(reaction_prime(0.0, p) == doctest::Approx(-p.kappa * p.alpha));
  CHECK(reaction_prime(1.0, p) == doctest::Approx(-p.kappa * (1 - p.alpha)));
}

TEST_CASE("branch classification") {
  ModelParams p = presets::set_a();
  auto fl = classify_branch(p.gamma1, p);
  CHECK(fl.tag == BranchTag::FoldLeft);
  CHECK(std::min(std::abs(fl.layer_eigs[0]), std::abs(fl.layer_eigs[1])) < 1e-12);

  auto mid = classify_branch(0.5 * (p.gamma1 + p.gamma2), p);
  CHECK(mid.tag == BranchTag::Middle);
  CHECK(std::abs(mid.layer_eigs[0].real()) < 1e-14);
  CHECK(std::abs(mid.layer_eigs[0].imag()) > 0.0);

  p.a = 1.0;
  p.c = 0.1;  // delta = 0.1
  auto l = classify_branch(0.0, p);
  CHECK(l.tag == BranchTag::SslLeft);
  CHECK(l.layer_eigs[0].imag() == 0.0);
  // mu^2 + delta mu - D(0) = 0 has product -D(0).
  CHECK((l.layer_eigs[0] * l.layer_eigs[1]).real() == doctest::Approx(-2.625).epsilon(1e-12));

  // D < 0 with delta > 0: both eigenvalues in the left half-plane.
  auto m2 = classify_branch(0.65, p);
  CHECK(m2.layer_eigs[0].real() < 0.0);
  CHECK(m2.layer_eigs[1].real() < 0.0);

  ModelParams q = presets::set_a();
  CHECK(classify_branch(q.gamma1 - 1e-9, q).tag == BranchTag::SslLeft);
  CHECK(classify_branch(q.gamma1 + 1e-9, q).tag == BranchTag::Middle);
  CHECK(classify_branch(q.gamma2 - 1e-9, q).tag == BranchTag::Middle);
  CHECK(classify_branch(q.gamma2 + 1e-9, q).tag == BranchTag::SsrRight);
}

TEST_CASE("equilibria") {
  ModelParams p = presets::set_a();
  p.c = 0.2;
  auto eq = classify_equilibria(p);
  REQUIRE(eq.size() == 3);
  CHECK(eq[0].which == Equilibrium::PMinus);
  CHECK(eq[0].u == 1.0);
  CHECK(eq[0].v == doctest::Approx(-0.2));
  CHECK(eq[0].kind == EquilibriumKind::Saddle);
  CHECK(eq[1].kind == EquilibriumKind::Saddle);
  CHECK(eq[2].v == doctest::Approx(-0.2 * p.alpha));

  ModelParams m = presets::symmetric();  // gamma1 < alpha < gamma2
  m.c = 0.05;
  CHECK(classify_equilibria(m)[2].kind == EquilibriumKind::Saddle);

  ModelParams c0 = presets::set_a();  // alpha < gamma1, c = 0
  CHECK(classify_equilibria(c0)[2].kind == EquilibriumKind::Centre);
}

TEST_CASE("folded singularities") {
  ModelParams p = presets::set_a();  // alpha < gamma1
  p.c = 0.2;
  auto fs = classify_folded_singularities(p);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].kind == FoldedKind::FoldedSaddle);
  CHECK(fs[0].v == doctest::Approx(-0.2 * p.gamma1));

  ModelParams m = presets::symmetric();
  m.c = 0.1;
  for (const auto& f : classify_folded_singularities(m))
    CHECK((f.kind == FoldedKind::FoldedNode || f.kind == FoldedKind::FoldedFocus));

  ModelParams s = presets::set_a();
  s.alpha = s.gamma1;
  CHECK(classify_folded_singularities(s)[0].kind == FoldedKind::FSNII);

  // The sign of det flips exactly as alpha crosses gamma1.
  s.alpha = s.gamma1 - 1e-6;
  CHECK(classify_folded_singularities(s)[0].kind == FoldedKind::FoldedSaddle);
  s.alpha = s.gamma1 + 1e-6;
  CHECK(classify_folded_singularities(s)[0].kind != FoldedKind::FoldedSaddle);
}

TEST_CASE("parameter validation and serialisation") {
  ModelParams p = presets::set_a();
  CHECK_NOTHROW(p.validate());
  p.gamma1 = 0.8;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  try {
    p.validate();
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("gamma1 < gamma2") != std::string::npos);
  }

  nlohmann::json j = presets::nonmonotone();
  ModelParams q;
  from_json(j, q);
  CHECK(q.beta == 1.0);
  CHECK(q.a == 0.5);
  nlohmann::json bad = {{"beta", 1.0}, {"bogus", 2.0}};
  CHECK_THROWS_AS(from_json(bad, q), ConfigError);

  ModelParams d = presets::set_a();
  d.a = 2.0;
  d.c = 0.1;
  CHECK(d.delta() == doctest::Approx(0.2));
}
