#include "rnd/figures.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rnd/errors.hpp"
#include "rnd/fullwave.hpp"
#include "rnd/io.hpp"
#include "rnd/layer.hpp"
#include "rnd/reduced.hpp"
#include "rnd/spectral.hpp"

namespace rnd {

namespace {

using io::fmt;
using Files = std::vector<std::string>;

constexpr double kFig9A = 0.5182;
constexpr double kFig9Eps = 1e-4;

void write_arcs(std::ostream& os, const SingularHeteroclinic& h, const ModelParams& p) {
  io::write_header(os, p,
                   {{"kind", to_string(h.kind)},
                    {"c", fmt(h.wavespeed)},
                    {"a", fmt(h.a)},
                    {"w", fmt(h.shock.w)},
                    {"u_l", fmt(h.shock.u_l)},
                    {"u_r", fmt(h.shock.u_r)},
                    {"residual", fmt(h.residual)}});
  os << "arc,zeta,u,v\n";
  auto dump = [&](const char* name, const SlowArc& arc) {
    for (const auto& s : arc.samples)
      os << name << ',' << fmt(s.zeta) << ',' << fmt(s.u) << ',' << fmt(s.v) << '\n';
  };
  dump("left", h.left_arc);
  dump("right", h.right_arc);
  dump("middle", h.middle_arc);
}

void write_orbit(std::ostream& os, const LayerOrbit& o, const ModelParams& p) {
  io::write_header(os, p,
                   {{"w", fmt(o.w)},
                    {"delta", fmt(o.delta)},
                    {"direction", to_string(o.direction)},
                    {"u_left", fmt(o.u_left)},
                    {"u_right", fmt(o.u_right)}});
  os << "y,u,uhat\n";
  for (const auto& s : o.samples) os << fmt(s.y) << ',' << fmt(s.u) << ',' << fmt(s.uhat) << '\n';
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

Files fig2(const std::string& dir, Exec) {
  const ModelParams p = presets::symmetric();
  ReducedOptions o;
  o.c_lo = -0.1;
  o.c_hi = 0.1;
  o.c_grid = 9;
  o.max_step = 0.02;
  const SingularHeteroclinic h = singular_het_solve(p, o);
  io::write_file(dir, "fig2_arcs.csv", [&](std::ostream& os) { write_arcs(os, h, p); });
  io::write_file(dir, "fig2_shock.csv", [&](std::ostream& os) {
    io::write_header(os, p, {{"w", fmt(h.shock.w)}});
    os << "u,v\n";
    const double v = h.right_arc.samples.back().v;
    os << fmt(h.shock.u_r) << ',' << fmt(v) << '\n' << fmt(h.shock.u_l) << ',' << fmt(v) << '\n';
  });
  // Zero level set of the reduced Hamiltonian: v = +-sqrt(-2 int_0^u D f).
  io::write_file(dir, "fig2_contour.csv", [&](std::ostream& os) {
    io::write_header(os, p, {{"level", "0"}});
    os << "u,v_plus,v_minus\n";
    for (double u : linspace(-0.2, 1.2, 701)) {
      const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double s) { return diffusivity(s, p) * reaction(s, p); }, 0.0, u);
      if (I > 0.0) continue;
      const double v = std::sqrt(-2.0 * I);
      os << fmt(u) << ',' << fmt(v) << ',' << fmt(-v) << '\n';
    }
  });
  return {"fig2_arcs.csv", "fig2_shock.csv", "fig2_contour.csv"};
}

Files fig4(const std::string& dir, Exec) {
  const ModelParams p = presets::set_a();
  const ShockRule r = equal_area_height(p);
  io::write_file(dir, "fig4_potential.csv", [&](std::ostream& os) {
    io::write_header(os, p, {{"w_h", fmt(r.w)}, {"u_l", fmt(r.u_l)}, {"u_r", fmt(r.u_r)}});
    os << "u,phi,minus_w_h\n";
    for (double u : linspace(0.0, 1.0, 501))
      os << fmt(u) << ',' << fmt(potential(u, p)) << ',' << fmt(-r.w) << '\n';
  });
  const LayerOrbit o = layer_orbit(r, p, Direction::GammaMinus);
  io::write_file(dir, "fig4_orbit.csv", [&](std::ostream& os) { write_orbit(os, o, p); });
  return {"fig4_potential.csv", "fig4_orbit.csv"};
}

Files fig5(const std::string& dir, Exec) {
  const ModelParams p = presets::set_a();
  const double dm = delta_m(p, Direction::GammaMinus);
  Files out;
  for (auto [name, d] : {std::pair{"fig5a_orbit.csv", 0.1}, std::pair{"fig5b_orbit.csv", dm}}) {
    const ShockRule r = generalised_height(d, p, Direction::GammaMinus);
    const LayerOrbit o = layer_orbit(r, p, Direction::GammaMinus);
    io::write_file(dir, name, [&](std::ostream& os) { write_orbit(os, o, p); });
    out.push_back(name);
  }
  return out;
}

Files fig7(const std::string& dir, Exec) {
  const ModelParams s = presets::symmetric();
  const ContinuationResult r1 = continue_branch("alpha", 0.2, s);
  io::write_file(dir, "fig7a_alpha.csv", [&](std::ostream& os) { io::write_continuation_csv(os, r1, "alpha", s); });
  if (r1.points.empty()) throw StepFailure("first continuation leg produced no points");
  ModelParams s2 = s;
  s2.alpha = 0.2;
  s2.c = r1.points.back().free;
  const ContinuationResult r2 = continue_branch("gamma1", 7.0 / 12.0, s2);
  io::write_file(dir, "fig7b_gamma1.csv", [&](std::ostream& os) { io::write_continuation_csv(os, r2, "gamma1", s2); });
  return {"fig7a_alpha.csv", "fig7b_gamma1.csv"};
}

Files fig8(const std::string& dir, Exec exec) {
  const ModelParams p = presets::set_a();
  const auto deltas = linspace(-0.35, 0.35, 141);
  for (Direction d : {Direction::GammaMinus, Direction::GammaPlus}) {
    const auto pts = layer_bifurcation_branch(deltas, p, d, exec);
    const std::string name = d == Direction::GammaMinus ? "fig8a_delta_w_minus.csv" : "fig8a_delta_w_plus.csv";
    io::write_file(dir, name, [&](std::ostream& os) { io::write_layer_branch_csv(os, pts, p, d); });
  }
  const auto as = linspace(0.0, 1.6, 81);
  std::vector<double> cs(as.size()), res(as.size());
  std::vector<std::string> kinds(as.size());
  auto errs = for_each_index(
      as.size(),
      [&](std::size_t i) {
        ModelParams q = p;
        q.a = as[i];
        const SingularHeteroclinic h = singular_het_solve(q);
        cs[i] = h.wavespeed;
        res[i] = h.residual;
        kinds[i] = to_string(h.shock.kind);
      },
      exec);
  io::write_file(dir, "fig8b_a_c.csv", [&](std::ostream& os) {
    io::write_header(os, p);
    os << "param,c,kind,residual\n";
    for (std::size_t i = 0; i < as.size(); ++i) {
      if (!errs[i].empty()) {
        os << "# a " << fmt(as[i]) << " failed: " << errs[i] << '\n';
        continue;
      }
      os << fmt(as[i]) << ',' << fmt(cs[i]) << ',' << kinds[i] << ',' << fmt(res[i]) << '\n';
    }
  });
  return {"fig8a_delta_w_minus.csv", "fig8a_delta_w_plus.csv", "fig8b_a_c.csv"};
}

WaveProfile fig9_wave() {
  ModelParams p = presets::set_a();
  p.a = kFig9A;
  ReducedOptions ro;
  ro.max_step = 0.02;
  return het_bvp_solve(singular_het_solve(p, ro), kFig9Eps, p);
}

Files fig9(const std::string& dir, Exec) {
  const WaveProfile w = fig9_wave();
  const ShockRule r = generalised_height(w.params.delta(), w.params, Direction::GammaMinus);
  io::write_file(dir, "fig9_profile.csv", [&](std::ostream& os) { io::write_profile_csv(os, w); });
  io::write_file(dir, "fig9_rule.csv", [&](std::ostream& os) {
    io::write_header(os, w.params, {{"delta", fmt(r.delta)}});
    os << "w_h,u_l,u_r\n" << fmt(r.w) << ',' << fmt(r.u_l) << ',' << fmt(r.u_r) << '\n';
  });
  return {"fig9_profile.csv", "fig9_rule.csv"};
}

Files fig10(const std::string& dir, Exec exec) {
  const ModelParams p = presets::nonmonotone();
  const auto deltas = linspace(0.0, 0.3, 61);
  const auto pts = layer_bifurcation_branch(deltas, p, Direction::GammaMinus, exec);
  io::write_file(dir, "fig10a_delta_w.csv",
                 [&](std::ostream& os) { io::write_layer_branch_csv(os, pts, p, Direction::GammaMinus); });
  const auto alphas = linspace(0.10, 0.145, 46);
  const auto fs = fs_to_s_branch(p, alphas, 0.03, 0.15, exec);
  io::write_file(dir, "fig10a_fs_to_s.csv", [&](std::ostream& os) {
    io::write_header(os, p);
    os << "param,c,alpha,kind,residual\n";
    for (const auto& f : fs) {
      if (!f.error.empty()) {
        os << "# alpha " << fmt(f.alpha) << " failed: " << f.error << '\n';
        continue;
      }
      ModelParams q = p;
      q.alpha = f.alpha;
      os << fmt(f.alpha) << ',' << fmt(f.c) << ',' << fmt(f.alpha) << ",FsToS,"
         << fmt(std::abs(fs_to_s_mismatch(f.c, q))) << '\n';
    }
  });
  const Codim3Point c3 = codim3_point(p, 0.07, 0.14);
  io::write_file(dir, "fig10b_codim3.json", [&](std::ostream& os) {
    nlohmann::json j{{"params", p}, {"a", c3.a}, {"c", c3.c}, {"alpha", c3.alpha}};
    os << j.dump(2) << '\n';
  });
  return {"fig10a_delta_w.csv", "fig10a_fs_to_s.csv", "fig10b_codim3.json"};
}

Files fig11(const std::string& dir, Exec) {
  ModelParams p = presets::nonmonotone();
  p.c = 0.08;
  p.alpha = 0.12;
  const auto [tc, ta] = detect_tangency(p);
  ModelParams t = p;
  t.c = tc;
  t.alpha = ta;
  ReducedOptions ro;
  ro.max_step = 0.02;
  // At the tangency the matching root is double, so the arcs are assembled directly.
  SingularHeteroclinic ht;
  ht.wavespeed = tc;
  ht.a = t.a;
  ht.kind = HetKind::Nonmonotone;
  ht.shock = generalised_height(t.a * tc, t, Direction::GammaMinus);
  ht.right_arc = manifold_arc(Anchor::WuPMinus, tc, t, ht.shock.u_r, 1, ro);
  ht.left_arc = manifold_arc(Anchor::WsPPlus, tc, t, ht.shock.u_l - 1e-5, 1, ro);
  ht.residual = std::abs(ht.left_arc.samples.back().v - ht.right_arc.samples.back().v);
  io::write_file(dir, "fig11a_tangency.csv", [&](std::ostream& os) { write_arcs(os, ht, t); });
  ModelParams n = presets::nonmonotone();
  n.alpha = 0.115;
  ro.c_lo = 0.09;
  ro.c_hi = 0.11;
  ro.c_grid = 40;
  const SingularHeteroclinic hn = nonmonotone_het_solve(n, ro);
  io::write_file(dir, "fig11b_nonmonotone.csv", [&](std::ostream& os) { write_arcs(os, hn, n); });
  return {"fig11a_tangency.csv", "fig11b_nonmonotone.csv"};
}

Files fig12(const std::string& dir, Exec) {
  ModelParams p = presets::canard();
  p.a = 0.5;
  ReducedOptions ro;
  ro.max_step = 0.02;
  const SingularHeteroclinic h = canard_wave_solve(p, ro);
  io::write_file(dir, "fig12_canard.csv", [&](std::ostream& os) { write_arcs(os, h, p); });
  return {"fig12_canard.csv"};
}

Files fig13(const std::string& dir, Exec exec) {
  const WaveProfile w = fig9_wave();
  const WindingResult r = winding_number(semicircle_contour(1e3, 1e-3), w, w.params, {}, exec);
  io::write_file(dir, "fig13_contour.csv", [&](std::ostream& os) {
    io::write_header(os, w.params, {{"R", "1000"}, {"detour", "0.001"}, {"winding", std::to_string(r.winding)}});
    write_evans_csv(os, r.samples);
  });
  return {"fig13_contour.csv"};
}

const std::map<std::string, std::function<Files(const std::string&, Exec)>>& table() {
  static const std::map<std::string, std::function<Files(const std::string&, Exec)>> t = {
      {"fig2", fig2},   {"fig4", fig4},   {"fig5", fig5},   {"fig7", fig7},   {"fig8", fig8},
      {"fig9", fig9},   {"fig10", fig10}, {"fig11", fig11}, {"fig12", fig12}, {"fig13", fig13}};
  return t;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig2", "fig4",  "fig5",  "fig7",  "fig8",
                                               "fig9", "fig10", "fig11", "fig12", "fig13"};
  return ids;
}

std::vector<std::string> figure_repro(const std::string& id, const std::string& out_dir, Exec exec) {
  auto it = table().find(id);
  if (it == table().end()) throw ConfigError("unknown figure id '" + id + "'");
  return it->second(out_dir, exec);
}

}  // namespace rnd
