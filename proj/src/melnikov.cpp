#include "rnd/melnikov.hpp"

#include <algorithm>
#include <cmath>

#include "rnd/errors.hpp"
#include "rnd/reduced.hpp"

namespace rnd {

namespace {

P2 normal_of(const P2& h) {
  const double n = std::hypot(h[0], h[1]);
  return {-h[1] / n, h[0] / n};
}

P2 adjoint_rhs(const std::array<double, 4>& J, const P2& psi) {
  // -J^T psi
  return {-(J[0] * psi[0] + J[2] * psi[1]), -(J[1] * psi[0] + J[3] * psi[1])};
}

std::size_t origin_index(const PlanarOrbit& o) {
  auto it = std::min_element(o.t.begin(), o.t.end(),
                             [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (it == o.t.end() || std::abs(*it) > 1e-12)
    throw ConfigError("base orbit has no sample at t = 0");
  return static_cast<std::size_t>(it - o.t.begin());
}

}  // namespace

void extend_tail(PlanarOrbit& orbit, const P2& saddle, double rate, double clip, double dt) {
  const bool front = rate > 0.0;
  const P2 x0 = front ? orbit.x.front() : orbit.x.back();
  const double t0 = front ? orbit.t.front() : orbit.t.back();
  const P2 d{x0[0] - saddle[0], x0[1] - saddle[1]};
  const double dist = std::hypot(d[0], d[1]);
  if (!(dist > clip)) return;
  const double span = std::log(dist / clip) / std::abs(rate);
  const auto n = static_cast<std::size_t>(std::ceil(span / dt));
  std::vector<double> ts;
  std::vector<P2> xs;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = front ? t0 - std::min(k * dt, span) : t0 + std::min(k * dt, span);
    const double s = std::exp(rate * (t - t0));
    ts.push_back(t);
    xs.push_back({saddle[0] + s * d[0], saddle[1] + s * d[1]});
  }
  if (front) {
    std::reverse(ts.begin(), ts.end());
    std::reverse(xs.begin(), xs.end());
    orbit.t.insert(orbit.t.begin(), ts.begin(), ts.end());
    orbit.x.insert(orbit.x.begin(), xs.begin(), xs.end());
  } else {
    orbit.t.insert(orbit.t.end(), ts.begin(), ts.end());
    orbit.x.insert(orbit.x.end(), xs.begin(), xs.end());
  }
}

AdjointSolution adjoint_solve(const PlanarOrbit& orbit, const PlanarField& h,
                              const PlanarJacobian& J, AdjointSide side, const P2* psi0,
                              const AdjointOptions& opt) {
  const std::size_t i0 = origin_index(orbit);
  const std::size_t n = orbit.t.size();
  std::vector<P2> psi(n, P2{0.0, 0.0});
  psi[i0] = psi0 ? *psi0 : normal_of(h(orbit.x[i0]));
  AdjointSolution sol;
  sol.side = side;
  // Drift is only measured where the field is resolved above roundoff; deep
  // in the extended tails h itself is dominated by cancellation.
  const P2 h0 = h(orbit.x[i0]);
  const double h_floor = 1e-5 * std::hypot(h0[0], h0[1]);

  // Classical RK4 on the sample grid; the base orbit between samples is the
  // cubic Hermite interpolant built from the field values.
  auto step = [&](std::size_t i, std::size_t j) {
    const double dt = orbit.t[j] - orbit.t[i];
    const P2& xi = orbit.x[i];
    const P2& xj = orbit.x[j];
    const P2 hi = h(xi), hj = h(xj);
    const P2 xm{0.5 * (xi[0] + xj[0]) + dt / 8.0 * (hi[0] - hj[0]),
                0.5 * (xi[1] + xj[1]) + dt / 8.0 * (hi[1] - hj[1])};
    const auto Ji = J(xi), Jm = J(xm), Jj = J(xj);
    const P2 y = psi[i];
    const P2 k1 = adjoint_rhs(Ji, y);
    const P2 k2 = adjoint_rhs(Jm, {y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]});
    const P2 k3 = adjoint_rhs(Jm, {y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]});
    const P2 k4 = adjoint_rhs(Jj, {y[0] + dt * k3[0], y[1] + dt * k3[1]});
    P2 yn{y[0] + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    const double hn = std::hypot(hj[0], hj[1]), yn_n = std::hypot(yn[0], yn[1]);
    if (hn > h_floor && yn_n > 0.0)
      sol.angle_drift = std::max(sol.angle_drift, std::abs(yn[0] * hj[0] + yn[1] * hj[1]) / (hn * yn_n));
    const P2 nv = normal_of(hj);
    const double a = yn[0] * nv[0] + yn[1] * nv[1];
    psi[j] = {a * nv[0], a * nv[1]};
  };

  std::size_t lo = i0, hi = i0;
  if (side != AdjointSide::Forward) {
    for (std::size_t i = i0; i > 0; --i) step(i, i - 1);
    lo = 0;
  }
  if (side != AdjointSide::Backward) {
    for (std::size_t i = i0; i + 1 < n; ++i) step(i, i + 1);
    hi = n - 1;
  }
  const double p0 = std::hypot(psi[i0][0], psi[i0][1]);
  for (std::size_t e : {lo, hi}) {
    if (e == i0) continue;
    const double pe = std::hypot(psi[e][0], psi[e][1]);
    if (!(pe < opt.decay_tol * p0))
      throw NonDecaying("adjoint at t = " + std::to_string(orbit.t[e]) + " has relative size " +
                        std::to_string(pe / p0));
  }
  for (std::size_t i = lo; i <= hi; ++i) sol.samples.push_back({orbit.t[i], psi[i][0], psi[i][1]});
  return sol;
}

double melnikov_integral(const AdjointSolution& psi, const PlanarOrbit& orbit,
                         const PlanarField& dfield) {
  // Adjoint samples are a contiguous run of orbit samples.
  auto it = std::lower_bound(orbit.t.begin(), orbit.t.end(), psi.samples.front().t);
  std::size_t k = static_cast<std::size_t>(it - orbit.t.begin());
  double s = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < psi.samples.size(); ++i, ++k) {
    const P2 d = dfield(orbit.x[k]);
    const double val = psi.samples[i].psi1 * d[0] + psi.samples[i].psi2 * d[1];
    if (i > 0) s += 0.5 * (psi.samples[i].t - psi.samples[i - 1].t) * (val + prev);
    prev = val;
  }
  return s;
}

namespace {

struct LayerBase {
  PlanarOrbit orbit;
  PlanarField h;
  PlanarJacobian J;
  double w;
};

LayerBase layer_base(const ModelParams& p, Direction dir, const MelnikovOptions& opt) {
  ShockRule rule = equal_area_height(p);
  LayerOptions lopt = opt.layer;
  lopt.orbit_max_step = opt.sample_step;
  LayerOrbit lo = layer_orbit(rule, p, dir, lopt);
  LayerBase b;
  for (const auto& s : lo.samples) {
    b.orbit.t.push_back(s.y);
    b.orbit.x.push_back({s.u, s.uhat});
  }
  const double ml = std::sqrt(diffusivity(lo.u_left, p));
  const double mr = std::sqrt(diffusivity(lo.u_right, p));
  const P2 pl{lo.u_left, 0.0}, pr{lo.u_right, 0.0};
  if (dir == Direction::GammaMinus) {
    extend_tail(b.orbit, pr, mr, opt.clip, opt.sample_step);
    extend_tail(b.orbit, pl, -ml, opt.clip, opt.sample_step);
  } else {
    extend_tail(b.orbit, pl, ml, opt.clip, opt.sample_step);
    extend_tail(b.orbit, pr, -mr, opt.clip, opt.sample_step);
  }
  const double w = rule.w;
  b.w = w;
  b.h = [&p, w](const P2& x) { return P2(layer_rhs(x[0], x[1], w, 0.0, p)); };
  b.J = [&p](const P2& x) { return std::array<double, 4>{0.0, 1.0, diffusivity(x[0], p), 0.0}; };
  return b;
}

}  // namespace

MelnikovResult layer_melnikov(const ModelParams& p, Direction dir, const MelnikovOptions& opt) {
  LayerBase b = layer_base(p, dir, opt);
  AdjointSolution psi = adjoint_solve(b.orbit, b.h, b.J, AdjointSide::Full, nullptr, opt.adjoint);
  MelnikovResult r;
  r.partials["w"] = melnikov_integral(psi, b.orbit, [](const P2&) { return P2{0.0, 1.0}; });
  r.partials["delta"] = melnikov_integral(psi, b.orbit, [](const P2& x) { return P2{0.0, -x[1]}; });
  r.slope_b = -r.partials["delta"] / r.partials["w"];
  r.base_orbit_id = "layer:" + to_string(dir) + ":w=" + std::to_string(b.w) + ":delta=0";
  r.adjoints.push_back(std::move(psi));
  return r;
}

SmoothLimit piecewise_smooth_limit(const ModelParams& p, const MelnikovOptions& opt) {
  LayerBase b = layer_base(p, Direction::GammaMinus, opt);
  const std::size_t i0 = origin_index(b.orbit);
  PiecewiseSide src, snk;
  src.orbit.t.assign(b.orbit.t.begin(), b.orbit.t.begin() + i0 + 1);
  src.orbit.x.assign(b.orbit.x.begin(), b.orbit.x.begin() + i0 + 1);
  snk.orbit.t.assign(b.orbit.t.begin() + i0, b.orbit.t.end());
  snk.orbit.x.assign(b.orbit.x.begin() + i0, b.orbit.x.end());
  for (PiecewiseSide* s : {&src, &snk}) {
    s->h = b.h;
    s->J = b.J;
    s->dparams["w"] = [](const P2&) { return P2{0.0, 1.0}; };
    s->dparams["delta"] = [](const P2& x) { return P2{0.0, -x[1]}; };
  }
  MelnikovResult pw = piecewise_melnikov_general(src, snk, opt.adjoint);
  MelnikovResult sm = layer_melnikov(p, Direction::GammaMinus, opt);
  SmoothLimit out;
  out.v1 = pw.v1_minus;
  out.piecewise = {pw.partials["w"], pw.partials["delta"]};
  out.smooth = {sm.partials["w"], sm.partials["delta"]};
  return out;
}

MelnikovResult piecewise_melnikov_general(const PiecewiseSide& source, const PiecewiseSide& sink,
                                          const AdjointOptions& opt) {
  const P2 xs = source.orbit.x[origin_index(source.orbit)];
  const P2 xk = sink.orbit.x[origin_index(sink.orbit)];
  if (std::hypot(xs[0] - xk[0], xs[1] - xk[1]) > 1e-6)
    throw ConfigError("piecewise sides do not meet at t = 0");
  const P2 hm = source.h(xs), hp = sink.h(xk);
  const double nm = std::hypot(hm[0], hm[1]), np = std::hypot(hp[0], hp[1]);
  const P2 vm{hm[0] / nm, hm[1] / nm}, vp{hp[0] / np, hp[1] / np};
  const P2 psim{-vm[1], vm[0]}, psip{-vp[1], vp[0]};
  AdjointSolution am = adjoint_solve(source.orbit, source.h, source.J, AdjointSide::Backward, &psim, opt);
  AdjointSolution ap = adjoint_solve(sink.orbit, sink.h, sink.J, AdjointSide::Forward, &psip, opt);
  MelnikovResult r;
  r.v1_minus = vm[0];
  r.v1_plus = vp[0];
  for (const auto& [name, d] : source.dparams) {
    auto it = sink.dparams.find(name);
    if (it == sink.dparams.end()) continue;
    r.partials[name] = melnikov_integral(am, source.orbit, d) / vm[0] +
                       melnikov_integral(ap, sink.orbit, it->second) / vp[0];
  }
  r.adjoints.push_back(std::move(am));
  r.adjoints.push_back(std::move(ap));
  return r;
}

MelnikovResult piecewise_melnikov(const ModelParams& p, const MelnikovOptions& opt) {
  if (std::abs(p.gamma1 + p.gamma2 - 1.0) > 1e-12 || std::abs(p.alpha - 0.5) > 1e-12 ||
      std::abs(p.c) > 1e-12 || p.a != 0.0)
    throw ConfigError("piecewise_melnikov needs gamma2 = 1 - gamma1, alpha = 1/2, c = 0, a = 0");
  const double c = 0.0;
  ShockRule rule = equal_area_height(p);
  ReducedOptions ro;
  ro.max_step = opt.sample_step;
  SlowArc right = manifold_arc(Anchor::WuPMinus, c, p, rule.u_r, 1, ro);
  SlowArc left = manifold_arc(Anchor::WsPPlus, c, p, rule.u_l, 1, ro);
  const double shift = rule.u_r - rule.u_l;

  PiecewiseSide src, snk;
  const double zr = right.samples.back().zeta;
  for (const auto& s : right.samples) {
    src.orbit.t.push_back(s.zeta - zr);
    src.orbit.x.push_back({s.u - shift, s.v});
  }
  const double zl = left.samples.back().zeta;
  for (auto it = left.samples.rbegin(); it != left.samples.rend(); ++it) {
    snk.orbit.t.push_back(it->zeta - zl);
    snk.orbit.x.push_back({it->u, it->v});
  }
  // The two arcs end on the same v only up to the matching residual; pin the
  // crossing point to the sink value so both sides meet exactly.
  src.orbit.x.back()[1] = snk.orbit.x.front()[1];

  auto saddle_rate = [&](double u, bool unstable) {
    const double k = diffusivity(u, p) * reaction_prime(u, p);
    const double s = std::sqrt(c * c - 4.0 * k);
    return unstable ? 0.5 * (-c + s) : 0.5 * (-c - s);
  };
  extend_tail(src.orbit, {1.0 - shift, -c}, saddle_rate(1.0, true), opt.clip,
              opt.sample_step);
  extend_tail(snk.orbit, {0.0, 0.0}, saddle_rate(0.0, false), opt.clip,
              opt.sample_step);

  auto make = [&](PiecewiseSide& side, double du) {
    side.h = [&p, du](const P2& x) { return P2(desing_rhs(x[0] + du, x[1], 0.0, p)); };
    side.J = [&p, du](const P2& x) {
      const double u = x[0] + du;
      const double dfu = diffusivity_prime(u, p) * reaction(u, p) +
                         diffusivity(u, p) * reaction_prime(u, p);
      return std::array<double, 4>{0.0, -1.0, dfu, 0.0};
    };
    side.dparams["alpha"] = [&p, du](const P2& x) {
      const double u = x[0] + du;
      return P2{0.0, diffusivity(u, p) * reaction_dalpha(u, p)};
    };
    side.dparams["c"] = [du](const P2& x) { return P2{-(x[0] + du), 0.0}; };
  };
  make(src, shift);
  make(snk, 0.0);

  MelnikovResult r = piecewise_melnikov_general(src, snk, opt.adjoint);
  if (std::abs(r.v1_minus - r.v1_plus) > 1e-9)
    throw PrefactorMismatch("v1- = " + std::to_string(r.v1_minus) + ", v1+ = " +
                            std::to_string(r.v1_plus));
  r.slope_b = -r.partials["alpha"] / r.partials["c"];
  r.base_orbit_id = "standing-wave:u_l=" + std::to_string(rule.u_l) + ":u_r=" + std::to_string(rule.u_r);
  return r;
}

}  // namespace rnd
