#include "rnd/layer.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rnd/errors.hpp"
#include "rnd/numerics.hpp"
#include "rnd/ode.hpp"

namespace rnd {

namespace {

using V2 = ode::Vec<2>;

double antiderivative_phi(double u, const ModelParams& p) {
  return p.beta * u * u *
         (u * u / 12.0 - (p.gamma1 + p.gamma2) * u / 6.0 + 0.5 * p.gamma1 * p.gamma2);
}

enum class Side { Left, Right };

struct BranchRun {
  bool reached = false;  // crossed the target section
  bool turned = false;   // uhat hit zero first
  double uhat = 0.0;     // at the section
  ode::Result<2> res;
};

// Roots of mu^2 + delta mu - D = 0 (real for D >= 0).
std::pair<double, double> saddle_eigs(double D, double delta) {
  double s = std::sqrt(std::max(0.0, delta * delta + 4.0 * D));
  return {0.5 * (-delta + s), 0.5 * (-delta - s)};
}

// One invariant-manifold branch of the saddle at the given side, integrated
// toward the interior until u reaches target (or a turn / span exhaustion).
BranchRun run_branch(Side side, double w, double delta, double ul, double ur, double target,
                     const ModelParams& p, Direction dir, const LayerOptions& opt, double span,
                     bool record) {
  const bool unstable = (side == Side::Right) == (dir == Direction::GammaMinus);
  const double ue = side == Side::Right ? ur : ul;
  auto [mup, mum] = saddle_eigs(diffusivity(ue, p), delta);
  const double mu = unstable ? mup : mum;
  const double nrm = std::hypot(1.0, mu);
  const double sgn = side == Side::Right ? -1.0 : 1.0;
  V2 x0{ue + sgn * opt.seed / nrm, sgn * opt.seed * mu / nrm};

  auto rhs = [&](double, const V2& x) { return layer_rhs(x[0], x[1], w, delta, p); };
  // Moving away from p_r means u decreasing; from p_l, u increasing.
  std::vector<ode::Event<2>> ev = {
      {[target](double, const V2& x) { return x[0] - target; }, 0, true},
      {[](double, const V2& x) { return x[1]; }, 0, true},
  };
  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.record = record;
  o.first_step = 1e-3;
  if (record) o.max_step = opt.orbit_max_step;
  BranchRun br;
  br.res = ode::integrate<2>(rhs, x0, 0.0, unstable ? span : -span, ev, o);
  if (br.res.stopped_by(0)) {
    br.reached = true;
    br.uhat = br.res.x_end[1];
  } else if (br.res.stopped_by(1)) {
    br.turned = true;
  }
  return br;
}

std::vector<LayerSample> to_samples(const ode::Result<2>& r) {
  std::vector<LayerSample> s;
  s.reserve(r.t.size());
  for (std::size_t i = 0; i < r.t.size(); ++i) s.push_back({r.t[i] - r.t_end, r.x[i][0], r.x[i][1]});
  return s;
}

}  // namespace

std::array<double, 2> layer_rhs(double u, double uhat, double w, double delta,
                                 const ModelParams& p) {
  return {uhat, w + potential(u, p) - delta * uhat};
}

double layer_hamiltonian(double u, double uhat, double w, const ModelParams& p) {
  return 0.5 * uhat * uhat - w * u - antiderivative_phi(u, p);
}

std::pair<double, double> jump_zone(const ModelParams& p) {
  return {-potential(p.gamma1, p), -potential(p.gamma2, p)};
}

std::pair<double, double> jump_endpoints(double w, const ModelParams& p) {
  auto [wlo, whi] = jump_zone(p);
  const double slack = 1e-14 * std::max(1.0, std::abs(w));
  if (!(w >= wlo - slack && w <= whi + slack))
    throw OutOfJumpZone("w = " + std::to_string(w) + " outside [" + std::to_string(wlo) + ", " +
                        std::to_string(whi) + "]");
  auto g = [&](double u) { return potential(u, p) + w; };
  double ul = p.gamma1, ur = p.gamma2;
  if (w > wlo) {
    double step = 0.5;
    while (g(p.gamma1 - step) >= 0.0) step *= 2.0;
    ul = num::root(g, p.gamma1 - step, p.gamma1, 1e-15, "jump_endpoints");
  }
  if (w < whi) {
    double step = 0.5;
    while (g(p.gamma2 + step) <= 0.0) step *= 2.0;
    ur = num::root(g, p.gamma2, p.gamma2 + step, 1e-15, "jump_endpoints");
  }
  return {ul, ur};
}

double equal_area_integral(double w, const ModelParams& p) {
  auto [ul, ur] = jump_endpoints(w, p);
  auto f = [&](double u) { return w + potential(u, p); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, ul, ur, 15, 1e-14);
}

ShockRule equal_area_height(const ModelParams& p) {
  ShockRule r;
  r.kind = RuleKind::EqualArea;
  r.w = -potential(0.5 * (p.gamma1 + p.gamma2), p);
  std::tie(r.u_l, r.u_r) = jump_endpoints(r.w, p);
  double res = equal_area_integral(r.w, p);
  if (!(std::abs(res) < 1e-9))
    throw NoConvergence("equal-area residual " + std::to_string(res) + " exceeds 1e-9");
  return r;
}

double equal_area_height_by_quadrature(const ModelParams& p) {
  auto [wlo, whi] = jump_zone(p);
  return num::root([&](double w) { return equal_area_integral(w, p); }, wlo, whi, 1e-14,
                   "equal_area_height_by_quadrature");
}

double shoot_layer_gap(double w, double delta, const ModelParams& p, Direction dir,
                       const LayerOptions& opt) {
  auto [ul, ur] = jump_endpoints(w, p);
  const double um = 0.5 * (ul + ur);
  auto r = run_branch(Side::Right, w, delta, ul, ur, um, p, dir, opt, opt.y_span, false);
  auto l = run_branch(Side::Left, w, delta, ul, ur, um, p, dir, opt, opt.y_span, false);
  if (!(r.reached || r.turned) || !(l.reached || l.turned))
    throw NoCrossing("layer branch did not reach u = " + std::to_string(um) + " within span " +
                     std::to_string(opt.y_span));
  return r.uhat - l.uhat;
}

namespace {

// Height of the fold reached by GammaMinus for the given sign of delta.
double fold_height(double delta, const ModelParams& p) {
  return delta > 0.0 ? -potential(p.gamma1, p) : -potential(p.gamma2, p);
}

// Beyond the saddle-node the fold-height gap changes sign relative to its
// value at small |delta|, where the connection is still interpolated.
bool viscous_minus(double delta, const ModelParams& p, const LayerOptions& opt) {
  constexpr double kRef = 1e-3;
  if (std::abs(delta) <= kRef) return false;
  const double wf = fold_height(delta, p);
  const double gf = shoot_layer_gap(wf, delta, p, Direction::GammaMinus, opt);
  const double gr = shoot_layer_gap(wf, std::copysign(kRef, delta), p, Direction::GammaMinus, opt);
  return gf == 0.0 || (gf > 0.0) != (gr > 0.0);
}

ShockRule height_minus(double delta, const ModelParams& p, const LayerOptions& opt) {
  if (delta == 0.0) return equal_area_height(p);
  ShockRule r;
  r.delta = delta;
  const double wf = fold_height(delta, p);
  if (viscous_minus(delta, p, opt)) {
    r.kind = RuleKind::Viscous;
    r.w = wf;
  } else {
    r.kind = RuleKind::Interpolated;
    const double w0 = -potential(0.5 * (p.gamma1 + p.gamma2), p);
    auto g = [&](double w) { return shoot_layer_gap(w, delta, p, Direction::GammaMinus, opt); };
    r.w = num::root(g, std::min(w0, wf), std::max(w0, wf), opt.w_tol, "generalised_height");
  }
  std::tie(r.u_l, r.u_r) = jump_endpoints(r.w, p);
  return r;
}

}  // namespace

bool is_viscous(double delta, const ModelParams& p, Direction dir, const LayerOptions& opt) {
  return viscous_minus(dir == Direction::GammaMinus ? delta : -delta, p, opt);
}

ShockRule generalised_height(double delta, const ModelParams& p, Direction dir,
                             const LayerOptions& opt) {
  // w_h(delta, GammaPlus) = w_h(-delta, GammaMinus)
  ShockRule r = height_minus(dir == Direction::GammaMinus ? delta : -delta, p, opt);
  r.delta = delta;
  return r;
}

double delta_m(const ModelParams& p, Direction dir, const LayerOptions& opt) {
  const double s = dir == Direction::GammaMinus ? 1.0 : -1.0;
  auto pred = [&](double d) { return viscous_minus(s * d, p, opt); };
  double lo = 1e-3, hi = 0.5;
  int guard = 0;
  while (!pred(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 20) throw NotFound("delta_m: no saddle-node below |delta| = " + std::to_string(hi));
  }
  return num::bisect_predicate(pred, lo, hi, opt.delta_tol);
}

LayerOrbit layer_orbit(const ShockRule& rule, const ModelParams& p, Direction dir,
                       const LayerOptions& opt) {
  LayerOrbit o;
  o.w = rule.w;
  o.delta = rule.delta;
  o.direction = dir;
  std::tie(o.u_left, o.u_right) = jump_endpoints(rule.w, p);

  if (rule.kind == RuleKind::Viscous) {
    o.terminal = Terminal::SaddleToFold;
    // The hyperbolic endpoint is whichever is not on a fold.
    const bool left_fold = std::abs(o.u_left - p.gamma1) < 1e-12;
    const Side side = left_fold ? Side::Right : Side::Left;
    const double uf = left_fold ? o.u_left : o.u_right;
    const double target = left_fold ? uf + opt.fold_tol : uf - opt.fold_tol;
    // Dense sampling down to 1e-3 from the fold, then an uncapped run along
    // the algebraically slow centre direction.
    const double near = left_fold ? uf + 1e-3 : uf - 1e-3;
    auto br = run_branch(side, o.w, o.delta, o.u_left, o.u_right, near, p, dir, opt,
                         opt.viscous_span, true);
    if (!br.reached) throw NoCrossing("viscous orbit did not reach the fold neighbourhood");
    auto rhs = [&](double, const V2& x) { return layer_rhs(x[0], x[1], o.w, o.delta, p); };
    std::vector<ode::Event<2>> ev = {
        {[target](double, const V2& x) { return x[0] - target; }, 0, true}};
    ode::Options oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    const double t0 = br.res.t_end;
    const double t1 = t0 + (t0 >= 0.0 ? opt.viscous_span : -opt.viscous_span);
    auto tail = ode::integrate<2>(rhs, br.res.x_end, t0, t1, ev, oo);
    if (!tail.stopped_by(0))
      throw NoCrossing("viscous orbit did not approach the fold within " +
                       std::to_string(opt.fold_tol));
    br.res.t.insert(br.res.t.end(), tail.t.begin() + 1, tail.t.end());
    br.res.x.insert(br.res.x.end(), tail.x.begin() + 1, tail.x.end());
    br.res.t_end = tail.t_end;
    o.samples = to_samples(br.res);
    if (t0 < 0.0) std::reverse(o.samples.begin(), o.samples.end());
    return o;
  }

  const double um = 0.5 * (o.u_left + o.u_right);
  auto r = run_branch(Side::Right, o.w, o.delta, o.u_left, o.u_right, um, p, dir, opt,
                      opt.y_span, true);
  auto l = run_branch(Side::Left, o.w, o.delta, o.u_left, o.u_right, um, p, dir, opt,
                      opt.y_span, true);
  if (!r.reached || !l.reached) throw NoCrossing("layer orbit branches did not reach the section");
  auto sr = to_samples(r.res);
  auto sl = to_samples(l.res);
  // The unstable half ends at y = 0, the stable half starts there.
  auto& first = (dir == Direction::GammaMinus) ? sr : sl;
  auto& second = (dir == Direction::GammaMinus) ? sl : sr;
  std::reverse(second.begin(), second.end());
  o.samples = first;
  o.samples.insert(o.samples.end(), second.begin() + 1, second.end());
  return o;
}

double generalised_area_residual(const LayerOrbit& orbit, const ModelParams& p) {
  std::vector<double> u, a, b;
  for (const auto& s : orbit.samples) {
    u.push_back(s.u);
    a.push_back(orbit.w + potential(s.u, p));
    b.push_back(s.uhat);
  }
  return std::abs(num::trapezoid(u, a) - orbit.delta * num::trapezoid(u, b));
}

std::vector<BranchPoint> layer_bifurcation_branch(const std::vector<double>& deltas,
                                                  const ModelParams& p, Direction dir, Exec exec,
                                                  const LayerOptions& opt) {
  std::vector<BranchPoint> out(deltas.size());
  auto errs = for_each_index(
      deltas.size(),
      [&](std::size_t i) {
        out[i].delta = deltas[i];
        ShockRule r = generalised_height(deltas[i], p, dir, opt);
        out[i].w = r.w;
        out[i].kind = r.kind;
        out[i].u_l = r.u_l;
        out[i].u_r = r.u_r;
      },
      exec);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].delta = deltas[i];
    out[i].error = errs[i];
    if (!errs[i].empty()) out[i].w = std::nan("");
  }
  return out;
}

std::string to_string(RuleKind k) {
  switch (k) {
    case RuleKind::EqualArea: return "EqualArea";
    case RuleKind::Interpolated: return "Interpolated";
    case RuleKind::Viscous: return "Viscous";
  }
  return "?";
}

std::string to_string(Direction d) {
  return d == Direction::GammaPlus ? "GammaPlus" : "GammaMinus";
}

}  // namespace rnd
