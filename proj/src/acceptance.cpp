#include "rnd/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rnd/errors.hpp"
#include "rnd/fullwave.hpp"
#include "rnd/layer.hpp"
#include "rnd/melnikov.hpp"
#include "rnd/reduced.hpp"
#include "rnd/spectral.hpp"

namespace rnd {

namespace {

struct Checks {
  std::vector<std::string> lines;
  bool pass = true;

  void add(bool ok, const std::string& what) {
    lines.push_back((ok ? "ok     " : "FAILED ") + what);
    pass = pass && ok;
  }
  // |value - target| <= tol
  void near(const std::string& name, double value, double target, double tol) {
    std::ostringstream s;
    s.precision(8);
    s << name << " = " << value << ", expected " << target << " +- " << tol;
    add(std::abs(value - target) <= tol, s.str());
  }
};

std::string num(double x, int prec = 8) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

constexpr double kFig9A = 0.5182;
constexpr double kEps = 1e-4;

WaveProfile set_a_wave(double a) {
  ModelParams p = presets::set_a();
  p.a = a;
  ReducedOptions ro;
  ro.max_step = 0.02;
  return het_bvp_solve(singular_het_solve(p, ro), kEps, p);
}

void criterion1(Checks& ck) {
  const ModelParams p = presets::set_a();
  const ShockRule r = equal_area_height(p);
  ck.near("w_h(0)", r.w, -0.5648, 5e-4);
  const double closed = -potential(0.5 * (p.gamma1 + p.gamma2), p);
  const double quad = equal_area_height_by_quadrature(p);
  ck.near("-Phi(inflection) - quadrature root", closed - quad, 0.0, 1e-9);
}

void criterion2(Checks& ck) {
  const ModelParams p = presets::symmetric();
  ReducedOptions o;
  o.c_lo = -0.1;
  o.c_hi = 0.1;
  o.c_grid = 9;
  const SingularHeteroclinic h = singular_het_solve(p, o);
  ck.near("u_l", h.shock.u_l, 0.06699, 1e-4);
  ck.near("u_r", h.shock.u_r, 0.93301, 1e-4);
  ck.near("c", h.wavespeed, 0.0, 1e-9);
  double hmax = 0.0;
  for (const SlowArc* arc : {&h.left_arc, &h.right_arc})
    for (const auto& s : arc->samples) hmax = std::max(hmax, std::abs(reduced_hamiltonian(s.u, s.v, p)));
  ck.near("max |H| on both arcs", hmax, 0.0, 1e-8);
}

void criterion3(Checks& ck) {
  const ModelParams p = presets::set_a();
  ck.near("w_h(0.1)", generalised_height(0.1, p, Direction::GammaMinus).w, -0.5661, 5e-4);
  const double dm = delta_m(p, Direction::GammaMinus);
  ck.near("delta_m (set A)", dm, 0.248, 3e-3);
  const ShockRule plateau = generalised_height(dm + 0.02, p, Direction::GammaMinus);
  ck.add(plateau.kind == RuleKind::Viscous, "rule beyond delta_m is " + to_string(plateau.kind));
  ck.near("w_sn", plateau.w, -0.5671, 5e-4);
  ck.near("delta_m (nonmonotone set)", delta_m(presets::nonmonotone(), Direction::GammaMinus), 0.2121, 3e-3);
}

void criterion4(Checks& ck, Exec exec) {
  ModelParams p = presets::set_a();
  ck.near("c(a = 0)", singular_het_solve(p).wavespeed, 0.19686, 1e-4);
  p.a = kFig9A;
  ck.near("c(a = 0.5182)", singular_het_solve(p).wavespeed, 0.19817, 2e-4);
  const ViscousOnset vo = viscous_onset(presets::set_a());
  ck.near("a_m", vo.a_m, 1.2465, 5e-3);
  ck.near("c_m", vo.c_m, 0.1994, 5e-4);
  const int n = 11;
  std::vector<double> cs(n);
  auto errs = for_each_index(
      n,
      [&](std::size_t i) {
        ModelParams q = presets::set_a();
        q.a = vo.a_m * static_cast<double>(i) / (n - 1);
        cs[i] = singular_het_solve(q).wavespeed;
      },
      exec);
  bool solved = std::all_of(errs.begin(), errs.end(), [](const std::string& e) { return e.empty(); });
  ck.add(solved, "all " + std::to_string(n) + " singular solves on [0, a_m] succeeded");
  if (solved) {
    auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
    ck.add(*lo >= 0.1973 - 5e-4 && *hi <= 0.1993 + 5e-4,
           "c over [0, a_m] spans [" + num(*lo) + ", " + num(*hi) + "], allowed [0.1968, 0.1998]");
  }
}

void criterion5(Checks& ck) {
  const ModelParams s = presets::symmetric();
  const ContinuationResult r1 = continue_branch("alpha", 0.2, s);
  ck.add(r1.completed, "leg alpha 0.5 -> 0.2 completed (" + std::to_string(r1.points.size()) + " points)");
  if (!r1.completed || r1.points.empty()) return;
  ModelParams s2 = s;
  s2.alpha = 0.2;
  s2.c = r1.points.back().free;
  const ContinuationResult r2 = continue_branch("gamma1", 7.0 / 12.0, s2);
  ck.add(r2.completed, "leg gamma1 1/4 -> 7/12 completed (" + std::to_string(r2.points.size()) + " points)");
  if (!r2.points.empty()) ck.near("final c", r2.points.back().free, 0.19686, 2e-4);
}

void criterion6(Checks& ck) {
  const ModelParams p = presets::set_a();
  const MelnikovResult m = layer_melnikov(p);
  const double fd = (generalised_height(1e-3, p, Direction::GammaMinus).w -
                     generalised_height(-1e-3, p, Direction::GammaMinus).w) /
                    2e-3;
  ck.add(std::abs(m.slope_b - fd) <= 0.05 * std::abs(m.slope_b),
         "layer b = " + num(m.slope_b) + ", central difference " + num(fd) + " (5%)");
  const ModelParams s = presets::symmetric();
  const MelnikovResult pw = piecewise_melnikov(s);
  ck.add(pw.slope_b < 0.0, "piecewise b = " + num(pw.slope_b) + " < 0");
  ReducedOptions o;
  o.c_lo = -0.1;
  o.c_hi = 0.1;
  o.c_grid = 9;
  ModelParams q = s;
  q.alpha = 0.501;
  const double cp = singular_het_solve(q, o).wavespeed;
  q.alpha = 0.499;
  const double cm = singular_het_solve(q, o).wavespeed;
  const double fdc = (cp - cm) / 2e-3;
  ck.add(std::abs(pw.slope_b - fdc) <= 0.05 * std::abs(pw.slope_b),
         "piecewise b vs c'(1/2) by central difference " + num(fdc) + " (5%)");
}

void criterion7(Checks& ck) {
  ModelParams p = presets::nonmonotone();
  p.c = 0.08;
  p.alpha = 0.12;
  const auto [tc, ta] = detect_tangency(p);
  ck.near("tangency c", tc, 0.0756, 2e-3);
  ck.near("tangency alpha", ta, 0.1212, 2e-3);

  ModelParams n = presets::nonmonotone();
  n.alpha = 0.115;
  ReducedOptions o;
  o.c_lo = 0.09;
  o.c_hi = 0.11;
  o.c_grid = 40;
  const SingularHeteroclinic h = nonmonotone_het_solve(n, o);
  ck.near("nonmonotone c at alpha = 0.115", h.wavespeed, 0.1, 2e-3);
  double umin = 1.0;
  for (const auto& s : h.left_arc.samples) umin = std::min(umin, s.u);
  ck.add(h.kind == HetKind::Nonmonotone && umin < h.shock.u_l - 1e-6,
         "left arc undershoots u_l (min u " + num(umin) + ", u_l " + num(h.shock.u_l) + ")");

  const Codim3Point c3 = codim3_point(presets::nonmonotone(), 0.07, 0.14);
  ck.near("codim-3 a", c3.a, 3.2304, 1e-2);
  ck.near("codim-3 c", c3.c, 0.0657, 1e-2);
  ck.near("codim-3 alpha", c3.alpha, 0.1384, 1e-2);

  ModelParams cn = presets::canard();
  const double thr = canard_threshold(cn, 0.01, 1.0);
  cn.a = 0.5;
  const CanardCrossing cc = canard_crossing(cn);
  ck.add(cc.found && cn.a > thr, "canard crossing at a = 0.5 found = " + std::string(cc.found ? "yes" : "no") +
                                     ", threshold a = " + num(thr, 4));
}

void criterion8(Checks& ck) {
  const WaveProfile w = set_a_wave(kFig9A);
  ck.near("c (eps = 1e-4)", w.wavespeed, 0.19826, 1e-4);
  const ShockRule r = generalised_height(w.params.delta(), w.params, Direction::GammaMinus);
  const double du = r.u_r - r.u_l;
  double dev = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < w.z.size(); ++i) {
    const double u = w.y[i][0];
    if (u < r.u_l + 0.05 * du || u > r.u_r - 0.05 * du) continue;
    dev = std::max(dev, std::abs(w.y[i][3] - r.w));
    ++count;
  }
  ck.add(count > 0 && dev <= 10.0 * kEps, "max |w - w_h(delta)| across the layer = " + num(dev, 4) + " over " +
                                               std::to_string(count) + " nodes, allowed " + num(10.0 * kEps));
}

// Largest relative distance from a predicted spatial eigenvalue to the
// nearest eigenvalue of the far-field matrix.
double asymptotic_mismatch(cd lambda, const ModelParams& p) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(eig_matrix_far(Equilibrium::PPlus, lambda, p));
  const auto pred = asymptotic_spatial_eigs(lambda, p);
  double worst = 0.0;
  for (cd m : pred) {
    double best = INFINITY;
    for (int k = 0; k < 4; ++k) best = std::min(best, std::abs(es.eigenvalues()(k) - m) / std::abs(es.eigenvalues()(k)));
    worst = std::max(worst, best);
  }
  return worst;
}

void criterion9(Checks& ck, const AcceptanceOptions& opt) {
  const ViscousOnset vo = viscous_onset(presets::set_a());
  const int na = std::max(opt.a_count, 2);
  std::vector<double> as(na);
  for (int i = 0; i < na; ++i) as[i] = vo.a_m * i / (na - 1);

  std::vector<WaveProfile> waves(na);
  auto errs = for_each_index(na, [&](std::size_t i) { waves[i] = set_a_wave(as[i]); }, opt.exec);
  for (int i = 0; i < na; ++i)
    if (!errs[i].empty()) ck.add(false, "wave at a = " + num(as[i], 5) + ": " + errs[i]);

  double disp = -INFINITY;
  for (int i = 0; i < na; ++i)
    if (errs[i].empty()) disp = std::max(disp, dispersion_max_real(waves[i].params));
  ck.add(disp < 0.0, "max Re lambda(k) over k in [1e-3, 1e6], all a: " + num(disp, 6));

  for (double a : {0.0, kFig9A}) {
    ModelParams q = presets::set_a();
    q.a = a;
    q.eps = kEps;
    q.c = 0.198;
    double worst = 0.0;
    for (double arg : {0.0, 0.5 * std::numbers::pi}) worst = std::max(worst, asymptotic_mismatch(std::polar(1e6, arg), q));
    ck.add(worst <= 0.01, "asymptotic spatial eigenvalues, a = " + num(a, 5) + ", |lambda| = 1e6: worst relative error " +
                              num(worst, 4) + " (1%)");
  }

  // Windings: every (a, R) pair is independent.
  const std::size_t nr = opt.radii.size();
  std::vector<int> wind(na * nr, -999);
  auto werrs = for_each_index(
      na * nr,
      [&](std::size_t k) {
        const std::size_t i = k / nr, j = k % nr;
        if (!errs[i].empty()) return;
        WindingResult r = winding_number(semicircle_contour(opt.radii[j], 1e-3), waves[i], waves[i].params, {},
                                         Exec::Serial);
        wind[k] = r.winding;
      },
      opt.exec);
  int bad = 0;
  for (std::size_t k = 0; k < wind.size(); ++k) {
    if (wind[k] == 0) continue;
    ++bad;
    ck.add(false, "winding at a = " + num(as[k / nr], 5) + ", R = " + num(opt.radii[k % nr]) + ": " +
                      (werrs[k].empty() ? std::to_string(wind[k]) : werrs[k]));
  }
  ck.add(bad == 0 && na >= 10, std::to_string(na) + " values of a in [0, " + num(vo.a_m, 5) + "] x " +
                                   std::to_string(nr) + " radii: winding 0 on " +
                                   std::to_string(wind.size() - bad) + "/" + std::to_string(wind.size()));

  const WaveProfile w = set_a_wave(kFig9A);
  const SpectrumReport rep = point_spectrum_scan(w, w.params, -0.95, 0.5, {}, {}, opt.exec);
  std::string found;
  for (const auto& e : rep.real_eigenvalues) found += " " + num(e.value, 6) + "(x" + std::to_string(e.multiplicity) + ")";
  const auto& ev = rep.real_eigenvalues;
  bool ok = ev.size() == 2;
  if (ok) {
    const auto& z0 = std::abs(ev[0].value) < std::abs(ev[1].value) ? ev[0] : ev[1];
    const auto& z1 = &z0 == &ev[0] ? ev[1] : ev[0];
    ok = std::abs(z0.value) < 1e-6 && z0.multiplicity == 1 && z1.value >= -0.81 && z1.value <= -0.79 &&
         z1.multiplicity == 1;
  }
  ck.add(ok, "real scan on [-0.95, 0.5] at a = 0.5182 found:" + found);
}

void criterion10(Checks& ck, Exec exec) {
  // Hamiltonian conservation and generalised-area residuals on layer orbits.
  for (const ModelParams& p : {presets::set_a(), presets::symmetric()}) {
    const LayerOrbit o = layer_orbit(equal_area_height(p), p, Direction::GammaMinus);
    const double h0 = layer_hamiltonian(o.u_left, 0.0, o.w, p);
    double dev = 0.0;
    for (const auto& s : o.samples) dev = std::max(dev, std::abs(layer_hamiltonian(s.u, s.uhat, o.w, p) - h0));
    ck.add(dev < 1e-7, "Hamiltonian drift on delta = 0 orbit (beta = " + num(p.beta) + ", gamma1 = " +
                           num(p.gamma1, 4) + "): " + num(dev, 3));
  }
  double worst = 0.0;
  for (const ModelParams& p : {presets::set_a(), presets::nonmonotone()}) {
    const double dm = delta_m(p, Direction::GammaMinus);
    for (double d : {0.0, 0.05, 0.1, 0.2, 0.99 * dm, 1.2 * dm})
      for (Direction dir : {Direction::GammaMinus, Direction::GammaPlus}) {
        const double dd = dir == Direction::GammaMinus ? d : -d;
        const LayerOrbit o = layer_orbit(generalised_height(dd, p, dir), p, dir);
        worst = std::max(worst, generalised_area_residual(o, p));
      }
  }
  ck.add(worst < 1e-6, "generalised-area residual over 24 orbits: " + num(worst, 3));

  double sym = 0.0;
  for (double d : {0.05, 0.1, 0.2, 0.3})
    sym = std::max(sym, std::abs(generalised_height(d, presets::set_a(), Direction::GammaMinus).w -
                                 generalised_height(-d, presets::set_a(), Direction::GammaPlus).w));
  ck.add(sym < 1e-9, "w_h(delta, GammaMinus) vs w_h(-delta, GammaPlus): max difference " + num(sym, 3));

  const WaveProfile w = set_a_wave(kFig9A);
  const auto contour = semicircle_contour(1e3, 1e-3);
  std::vector<cd> pick;
  for (std::size_t i = 0; i < contour.size(); i += 30) pick.push_back(contour[i]);
  EvansOptions e6, e5;
  e5.riccati.swap_threshold = 1e-5;
  const auto s6 = evans_sweep(pick, w, w.params, e6, exec);
  const auto s5 = evans_sweep(pick, w, w.params, e5, exec);
  double rel = 0.0;
  for (std::size_t i = 0; i < pick.size(); ++i) rel = std::max(rel, std::abs(s6[i].value - s5[i].value) / std::abs(s6[i].value));
  ck.add(rel < 1e-6, "Evans value, swap threshold 1e-6 vs 1e-5 on R = 1e3 (" + std::to_string(pick.size()) +
                         " points): max relative difference " + num(rel, 3));

  const std::vector<std::pair<std::string, std::vector<cd>>> loops = {
      {"semicircle R = 1e3", contour}, {"circle |lambda| = 1e-3", circle_contour(0.0, 1e-3)}};
  for (const auto& [name, loop] : loops) {
    std::vector<int> ws;
    for (double level : {0.6, 0.7, 0.8}) {
      WindingOptions wo;
      wo.evans.level = level;
      ws.push_back(winding_number(loop, w, w.params, wo, exec).winding);
    }
    ck.add(ws[0] == ws[1] && ws[1] == ws[2], name + ": windings at u(z0) = 0.6, 0.7, 0.8 are " + std::to_string(ws[0]) +
                                                 ", " + std::to_string(ws[1]) + ", " + std::to_string(ws[2]));
  }

  const SmoothLimit sl = piecewise_smooth_limit(presets::set_a());
  double lim = 0.0;
  for (int k = 0; k < 2; ++k) lim = std::max(lim, std::abs(sl.piecewise[k] * sl.v1 - sl.smooth[k]) / std::abs(sl.smooth[k]));
  ck.add(lim < 1e-6, "piecewise formula with zero shift times v1 vs smooth integrals: relative difference " + num(lim, 3));
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& os, const AcceptanceOptions& opt) {
  const std::vector<std::function<void(Checks&)>> crit = {
      criterion1,
      criterion2,
      criterion3,
      [&](Checks& c) { criterion4(c, opt.exec); },
      criterion5,
      criterion6,
      criterion7,
      criterion8,
      [&](Checks& c) { criterion9(c, opt); },
      [&](Checks& c) { criterion10(c, opt.exec); },
  };
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(crit.size()); ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    Checks ck;
    try {
      crit[id - 1](ck);
    } catch (const std::exception& e) {
      ck.add(false, std::string("exception: ") + e.what());
    }
    for (const auto& l : ck.lines) os << "  [" << id << "] " << l << '\n';
    os << "criterion " << id << ": " << (ck.pass ? "PASS" : "FAIL") << '\n' << std::flush;
    out.push_back({id, ck.pass, ck.lines});
  }
  return out;
}

}  // namespace rnd
