#include "rnd/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rnd/errors.hpp"
#include "rnd/numerics.hpp"
#include "rnd/ode.hpp"

namespace rnd {

namespace {

using V2 = ode::Vec<2>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// int_0^u D(s) f(s) ds for the quadratic D and cubic f (exact polynomial).
double integral_df(double u, const ModelParams& p) {
  // D f = -beta kappa s (s-g1)(s-g2)(s-alpha)(s-1), expanded in powers of s.
  const double g1 = p.gamma1, g2 = p.gamma2, al = p.alpha;
  const double e1 = g1 + g2 + al + 1.0;
  const double e2 = g1 * g2 + (g1 + g2) * (al + 1.0) + al;
  const double e3 = g1 * g2 * (al + 1.0) + (g1 + g2) * al;
  const double e4 = g1 * g2 * al;
  // s (s^4 - e1 s^3 + e2 s^2 - e3 s + e4)
  const double poly = std::pow(u, 6) / 6.0 - e1 * std::pow(u, 5) / 5.0 + e2 * std::pow(u, 4) / 4.0 -
                      e3 * u * u * u / 3.0 + e4 * u * u / 2.0;
  return -p.beta * p.kappa * poly;
}

struct Seed {
  V2 x0;
  bool forward;
};

// Eigenvector (1, -(c+lam)) of [[-c,-1],[k,0]] for eigenvalue lam.
V2 eigvec(double c, double lam) {
  V2 e{1.0, -(c + lam)};
  const double n = std::hypot(e[0], e[1]);
  return {e[0] / n, e[1] / n};
}

Seed make_seed(Anchor anchor, double c, const ModelParams& p, double seed, int branch = -1) {
  double ue = 0.0, k = 0.0;
  bool unstable = true;
  double sgn = 1.0;  // sign of u-component of the departure direction
  switch (anchor) {
    case Anchor::WuPMinus:
      ue = 1.0, unstable = true, sgn = -1.0;
      break;
    case Anchor::WsPMinus:
      ue = 1.0, unstable = false, sgn = -1.0;
      break;
    case Anchor::WsPPlus:
      ue = 0.0, unstable = false, sgn = 1.0;
      break;
    case Anchor::WuPPlus:
      ue = 0.0, unstable = true, sgn = 1.0;
      break;
    case Anchor::WuFoldedSaddle:
      ue = p.gamma1, unstable = true, sgn = branch < 0 ? -1.0 : 1.0;
      break;
  }
  if (anchor == Anchor::WuFoldedSaddle) k = diffusivity_prime(ue, p) * reaction(ue, p);
  else k = diffusivity(ue, p) * reaction_prime(ue, p);
  const double disc = c * c - 4.0 * k;
  if (!(disc > 0.0)) throw Miss("anchor " + to_string(anchor) + " is not a saddle");
  const double lam = unstable ? 0.5 * (-c + std::sqrt(disc)) : 0.5 * (-c - std::sqrt(disc));
  V2 e = eigvec(c, lam);
  if ((e[0] > 0.0) != (sgn > 0.0)) e = {-e[0], -e[1]};
  return {{ue + seed * e[0], -c * ue + seed * e[1]}, unstable};
}

ode::Result<2> run_anchor(const Seed& s, double c, const ModelParams& p, double section_u,
                          int crossing, bool record, const ReducedOptions& opt) {
  auto rhs = [&](double, const V2& x) { return desing_rhs(x[0], x[1], c, p); };
  const double ub = p.alpha, vb = -c * p.alpha, r = opt.pb_guard;
  std::vector<ode::Event<2>> ev = {
      {[section_u](double, const V2& x) { return x[0] - section_u; }, 0, true, crossing},
      {[=](double, const V2& x) { return std::hypot(x[0] - ub, x[1] - vb) - r; }, -1, true, 1},
  };
  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.record = record;
  if (record) o.max_step = opt.max_step > 0.0 ? opt.max_step : 0.02;
  return ode::integrate<2>(rhs, s.x0, 0.0, s.forward ? opt.zeta_span : -opt.zeta_span, ev, o);
}

SlowArc to_arc(const ode::Result<2>& r, Anchor anchor, const ModelParams& p) {
  SlowArc a;
  a.anchor = anchor;
  for (std::size_t i = 0; i < r.t.size(); ++i) a.samples.push_back({r.t[i], r.x[i][0], r.x[i][1]});
  if (!a.samples.empty()) {
    const auto& mid = a.samples[a.samples.size() / 2];
    a.orientation_flag = diffusivity(mid.u, p) >= 0.0 ? 1 : -1;
  }
  return a;
}

double hit_or_nan(Anchor anchor, double c, const ModelParams& p, double u, int crossing,
                  const ReducedOptions& opt) {
  try {
    return manifold_section_hit(anchor, c, p, u, crossing, opt);
  } catch (const NumericalError&) {
    return kNaN;
  }
}

// First turning point (u' = 0) of the backward W^s(p+).
V2 ws_turning_point(double c, const ModelParams& p, const ReducedOptions& opt) {
  Seed s = make_seed(Anchor::WsPPlus, c, p, opt.seed);
  auto rhs = [&](double, const V2& x) { return desing_rhs(x[0], x[1], c, p); };
  std::vector<ode::Event<2>> ev = {{[c](double, const V2& x) { return x[1] + c * x[0]; }, 0, true, 1}};
  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.record = false;
  auto r = ode::integrate<2>(rhs, s.x0, 0.0, -opt.zeta_span, ev, o);
  if (!r.stopped_by(0)) throw Miss("W^s(p+) has no turning point");
  return r.x_end;
}

SingularHeteroclinic assemble(const ModelParams& p, double c, int crossing, HetKind kind,
                              const ReducedOptions& opt) {
  SingularHeteroclinic h;
  h.wavespeed = c;
  h.a = p.a;
  h.kind = kind;
  h.shock = generalised_height(p.a * c, p, Direction::GammaMinus, opt.layer);
  h.left_arc = manifold_arc(Anchor::WsPPlus, c, p, h.shock.u_l, crossing, opt);
  h.right_arc = manifold_arc(Anchor::WuPMinus, c, p, h.shock.u_r, 1, opt);
  h.residual = std::abs(h.left_arc.samples.back().v - h.right_arc.samples.back().v);
  return h;
}

double solve_c(const std::function<double(double)>& F, const ReducedOptions& opt,
               const std::string& what) {
  auto br = num::first_sign_change(F, opt.c_lo, opt.c_hi, opt.c_grid);
  if (!br)
    throw NoRoot(what + ": no sign change of the matching condition for c in [" +
                 std::to_string(opt.c_lo) + ", " + std::to_string(opt.c_hi) + "]");
  return num::root(F, br->lo, br->hi, opt.c_tol, what);
}

}  // namespace

std::array<double, 2> desing_rhs(double u, double v, double c, const ModelParams& p) {
  return {-(v + c * u), diffusivity(u, p) * reaction(u, p)};
}

double reduced_hamiltonian(double u, double v, const ModelParams& p) {
  return -0.5 * v * v - integral_df(u, p);
}

double manifold_section_hit(Anchor anchor, double c, const ModelParams& p, double section_u,
                            int crossing, const ReducedOptions& opt) {
  Seed s = make_seed(anchor, c, p, opt.seed);
  auto r = run_anchor(s, c, p, section_u, crossing, false, opt);
  if (r.stopped_by(1)) throw Miss("trajectory captured near p_b before u = " + std::to_string(section_u));
  if (!r.stopped_by(0))
    throw Miss("no crossing " + std::to_string(crossing) + " of u = " + std::to_string(section_u));
  const double du = desing_rhs(r.x_end[0], r.x_end[1], c, p)[0];
  if (std::abs(du) < 1e-9) throw Miss("grazing contact with the section");
  return r.x_end[1];
}

SlowArc manifold_arc(Anchor anchor, double c, const ModelParams& p, double section_u, int crossing,
                     const ReducedOptions& opt) {
  Seed s = make_seed(anchor, c, p, opt.seed);
  auto r = run_anchor(s, c, p, section_u, crossing, true, opt);
  if (!r.stopped_by(0))
    throw Miss("no crossing " + std::to_string(crossing) + " of u = " + std::to_string(section_u));
  return to_arc(r, anchor, p);
}

double het_mismatch(double c, const ModelParams& p, int crossing, const ReducedOptions& opt) {
  ShockRule rule;
  try {
    rule = generalised_height(p.a * c, p, Direction::GammaMinus, opt.layer);
  } catch (const NumericalError&) {
    return kNaN;
  }
  return hit_or_nan(Anchor::WsPPlus, c, p, rule.u_l, crossing, opt) -
         hit_or_nan(Anchor::WuPMinus, c, p, rule.u_r, 1, opt);
}

double het_mismatch_evasion(double c, const ModelParams& p, const ReducedOptions& opt) {
  ShockRule rule;
  try {
    rule = generalised_height(p.a * c, p, Direction::GammaPlus, opt.layer);
  } catch (const NumericalError&) {
    return kNaN;
  }
  return hit_or_nan(Anchor::WuPPlus, c, p, rule.u_l, 1, opt) -
         hit_or_nan(Anchor::WsPMinus, c, p, rule.u_r, 1, opt);
}

SingularHeteroclinic singular_het_solve(const ModelParams& p, const ReducedOptions& opt) {
  p.validate();
  const double c = solve_c([&](double c) { return het_mismatch(c, p, 1, opt); }, opt,
                           "singular_het_solve");
  return assemble(p, c, 1, std::abs(c) < 1e-9 ? HetKind::StandingWave : HetKind::MonotoneInvasion,
                  opt);
}

ViscousOnset viscous_onset(const ModelParams& p, const ReducedOptions& opt) {
  ViscousOnset v;
  v.delta_m = delta_m(p, Direction::GammaMinus, opt.layer);
  ModelParams q = p;
  // Any a with a c >= delta_m over the whole bracket gives the fold height.
  q.a = 2.0 * v.delta_m / std::max(opt.c_lo, 1e-3);
  v.c_m = singular_het_solve(q, opt).wavespeed;
  v.a_m = v.delta_m / v.c_m;
  return v;
}

SingularHeteroclinic singular_het_solve_evasion(const ModelParams& p, const ReducedOptions& opt) {
  p.validate();
  ReducedOptions o = opt;
  o.c_lo = -opt.c_hi;
  o.c_hi = -opt.c_lo;
  const double c = solve_c([&](double c) { return het_mismatch_evasion(c, p, opt); }, o,
                           "singular_het_solve_evasion");
  SingularHeteroclinic h;
  h.wavespeed = c;
  h.a = p.a;
  h.kind = HetKind::MonotoneEvasion;
  h.shock = generalised_height(p.a * c, p, Direction::GammaPlus, opt.layer);
  h.left_arc = manifold_arc(Anchor::WuPPlus, c, p, h.shock.u_l, 1, opt);
  h.right_arc = manifold_arc(Anchor::WsPMinus, c, p, h.shock.u_r, 1, opt);
  h.residual = std::abs(h.left_arc.samples.back().v - h.right_arc.samples.back().v);
  return h;
}

SingularHeteroclinic nonmonotone_het_solve(const ModelParams& p, const ReducedOptions& opt) {
  p.validate();
  const double c = solve_c([&](double c) { return het_mismatch(c, p, 2, opt); }, opt,
                           "nonmonotone_het_solve");
  return assemble(p, c, 2, HetKind::Nonmonotone, opt);
}

ContinuationResult continue_branch(const std::string& vary, double target, const ModelParams& p0,
                                   const std::string& free, const ContinuationOptions& copt,
                                   const ReducedOptions& opt) {
  p0.validate();
  ContinuationResult out;
  auto F = [&](double x, double y) {
    ModelParams q = p0;
    q.set(vary, x);
    q.set(free, y);
    return het_mismatch(q.c, q, 1, opt);
  };
  // Local re-solve of the free parameter around a prediction.
  auto correct = [&](double x, double y_pred, double width) -> std::optional<double> {
    auto g = [&](double y) { return F(x, y); };
    for (int k = 0; k < 3; ++k, width *= 2.0) {
      auto br = num::first_sign_change(g, y_pred - width, y_pred + width, 8);
      if (br) {
        try {
          return num::root(g, br->lo, br->hi, 1e-13, "continue_branch");
        } catch (const NumericalError&) {
          return std::nullopt;
        }
      }
    }
    return std::nullopt;
  };

  double x = p0.get(vary), y = p0.get(free);
  double r0 = F(x, y);
  if (!(std::abs(r0) <= copt.residual_tol)) {
    auto y0 = correct(x, y, 1e-2);
    if (!y0) {
      out.message = "initial point does not solve the matching condition";
      return out;
    }
    y = *y0;
    r0 = F(x, y);
  }
  out.points.push_back({x, y, std::abs(r0)});

  const double sgn = target >= x ? 1.0 : -1.0;
  double h = copt.h0;
  double slope = 0.0;
  while (sgn * (target - x) > 0.0) {
    const double step = std::min(h, std::abs(target - x));
    const double xn = x + sgn * step;
    const double y_pred = y + slope * (xn - x);
    const double width = 4.0 * std::abs(y_pred - y) + 1e-3;
    auto yn = correct(xn, y_pred, width);
    double res = yn ? std::abs(F(xn, *yn)) : kNaN;
    if (!yn || !(res <= copt.residual_tol)) {
      h *= 0.5;
      if (h < copt.h_min) {
        out.message = "StepFailure: step fell below " + std::to_string(copt.h_min) + " at " +
                      vary + " = " + std::to_string(x);
        return out;
      }
      continue;
    }
    slope = (*yn - y) / (xn - x);
    x = xn;
    y = *yn;
    out.points.push_back({x, y, res});
    h = std::min(h * 1.5, copt.h_max);
  }
  out.completed = true;
  return out;
}

std::pair<double, double> detect_tangency(const ModelParams& p, const ReducedOptions& opt) {
  auto F = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2);
    ModelParams q = p;
    q.c = x[0];
    q.alpha = x[1];
    if (!(q.alpha > 0.0 && q.alpha < q.gamma1)) {
      r.setConstant(kNaN);
      return r;
    }
    try {
      ShockRule rule = generalised_height(q.a * q.c, q, Direction::GammaMinus, opt.layer);
      V2 t = ws_turning_point(q.c, q, opt);
      r[0] = t[0] - rule.u_l;
      r[1] = t[1] - manifold_section_hit(Anchor::WuPMinus, q.c, q, rule.u_r, 1, opt);
    } catch (const NumericalError&) {
      r.setConstant(kNaN);
    }
    return r;
  };
  Eigen::VectorXd x0(2);
  x0 << p.c, p.alpha;
  try {
    Eigen::VectorXd x = num::solve(F, x0, 1e-9);
    return {x[0], x[1]};
  } catch (const NumericalError& e) {
    throw NotFound(std::string("tangency: ") + e.what());
  }
}

double fs_to_s_mismatch(double c, const ModelParams& p, const ReducedOptions& opt) {
  const double us = 0.5 * p.gamma1;
  Seed s = make_seed(Anchor::WuFoldedSaddle, c, p, opt.seed, -1);
  auto ra = run_anchor(s, c, p, us, 1, false, opt);
  if (!ra.stopped_by(0)) throw Miss("folded-saddle manifold missed u = gamma1/2");
  return ra.x_end[1] - manifold_section_hit(Anchor::WsPPlus, c, p, us, 1, opt);
}

std::vector<FsToSPoint> fs_to_s_branch(const ModelParams& p, const std::vector<double>& alphas,
                                       double c_lo, double c_hi, Exec exec,
                                       const ReducedOptions& opt) {
  std::vector<FsToSPoint> out(alphas.size());
  auto errs = for_each_index(
      alphas.size(),
      [&](std::size_t i) {
        ModelParams q = p;
        q.alpha = alphas[i];
        out[i].alpha = alphas[i];
        auto F = [&](double c) {
          try {
            return fs_to_s_mismatch(c, q, opt);
          } catch (const NumericalError&) {
            return kNaN;
          }
        };
        ReducedOptions o = opt;
        o.c_lo = c_lo;
        o.c_hi = c_hi;
        try {
          out[i].c = solve_c(F, o, "fs_to_s_branch");
        } catch (const NoRoot& e) {
          throw NotFound(e.what());
        }
      },
      exec);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].alpha = alphas[i];
    out[i].error = errs[i];
    if (!errs[i].empty()) out[i].c = kNaN;
  }
  return out;
}

Codim3Point codim3_point(const ModelParams& p, double c0, double alpha0, const ReducedOptions& opt) {
  const double wf = -potential(p.gamma1, p);
  const double ur = jump_endpoints(wf, p).second;
  auto F = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2);
    ModelParams q = p;
    q.c = x[0];
    q.alpha = x[1];
    try {
      r[0] = fs_to_s_mismatch(q.c, q, opt);
      r[1] = manifold_section_hit(Anchor::WuPMinus, q.c, q, ur, 1, opt) + q.c * q.gamma1;
    } catch (const NumericalError&) {
      r.setConstant(kNaN);
    }
    return r;
  };
  Eigen::VectorXd x0(2);
  x0 << c0, alpha0;
  Eigen::VectorXd x;
  try {
    x = num::solve(F, x0, 1e-9);
  } catch (const NumericalError& e) {
    throw NotFound(std::string("codimension-three point: ") + e.what());
  }
  ModelParams q = p;
  q.alpha = x[1];
  const double dm = delta_m(q, Direction::GammaMinus, opt.layer);
  return {dm / x[0], x[0], x[1]};
}

namespace {

struct Curve {
  std::vector<double> u, v;
};

// Folded-saddle unstable manifold on S_m (u > gamma1) up to its first turn.
Curve fs_middle_branch(double c, const ModelParams& p, const ReducedOptions& opt, SlowArc* arc) {
  Seed s = make_seed(Anchor::WuFoldedSaddle, c, p, opt.seed, +1);
  auto rhs = [&](double, const V2& x) { return desing_rhs(x[0], x[1], c, p); };
  const double g2 = p.gamma2;
  std::vector<ode::Event<2>> ev = {
      {[g2](double, const V2& x) { return x[0] - g2; }, 0, true, 1},
      {[c](double, const V2& x) { return x[1] + c * x[0]; }, 0, true, 1},
  };
  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_step = 0.01;
  auto r = ode::integrate<2>(rhs, s.x0, 0.0, 1e3, ev, o);
  Curve cv;
  for (auto& x : r.x) {
    cv.u.push_back(x[0]);
    cv.v.push_back(x[1]);
  }
  if (arc) *arc = to_arc(r, Anchor::WuFoldedSaddle, p);
  return cv;
}

double interp(const Curve& cv, double u) {
  // cv.u is monotone increasing up to the first turn.
  if (cv.u.size() < 2 || u < cv.u.front() || u > cv.u.back()) return kNaN;
  auto it = std::upper_bound(cv.u.begin(), cv.u.end(), u);
  std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cv.u.begin(), 1), cv.u.size() - 1);
  const double t = (u - cv.u[i - 1]) / (cv.u[i] - cv.u[i - 1]);
  return cv.v[i - 1] + t * (cv.v[i] - cv.v[i - 1]);
}

double middle_root(double u, const ModelParams& p) {
  const double target = potential(u, p);
  return num::root([&](double x) { return potential(x, p) - target; }, p.gamma1, p.gamma2, 1e-15,
                   "middle_root");
}

}  // namespace

CanardCrossing canard_crossing(const ModelParams& p, const ReducedOptions& opt) {
  const double c = p.c, delta = p.a * p.c;
  if (!(delta > 0.0)) throw NoTransverseCrossing("canard crossing needs delta = a c > 0");
  const double ur_max = generalised_height(delta, p, Direction::GammaMinus, opt.layer).u_r;
  ReducedOptions o = opt;
  o.max_step = 0.005;
  SlowArc src = manifold_arc(Anchor::WuPMinus, c, p, p.gamma2 + 1e-9, 1, o);
  Curve fs = fs_middle_branch(c, p, opt, nullptr);

  CanardCrossing cc;
  double prev_gap = kNaN, prev_u = 0.0, prev_um = 0.0, prev_v = 0.0;
  for (const auto& s : src.samples) {
    if (!(s.u < ur_max && s.u > p.gamma2)) continue;
    const double um = middle_root(s.u, p);
    const double gap = s.v - interp(fs, um);
    if (std::isfinite(gap) && std::isfinite(prev_gap) && (gap > 0.0) != (prev_gap > 0.0)) {
      const double t = prev_gap / (prev_gap - gap);
      cc.found = true;
      cc.u = prev_um + t * (um - prev_um);
      cc.v = prev_v + t * (s.v - prev_v);
      cc.u_source = prev_u + t * (s.u - prev_u);
      cc.signed_gap_before = prev_gap;
      cc.signed_gap_after = gap;
      return cc;
    }
    prev_gap = gap;
    prev_u = s.u;
    prev_um = um;
    prev_v = s.v;
  }
  return cc;
}

SingularHeteroclinic canard_wave_solve(const ModelParams& p, const ReducedOptions& opt) {
  p.validate();
  CanardCrossing cc = canard_crossing(p, opt);
  if (!cc.found)
    throw NoTransverseCrossing("no transverse crossing of the projected W^u(p-) with the "
                               "folded-saddle manifold; delta = " + std::to_string(p.a * p.c));
  SingularHeteroclinic h;
  h.kind = HetKind::CanardWave;
  h.wavespeed = p.c;
  h.a = p.a;
  h.shock.kind = RuleKind::Interpolated;
  h.shock.delta = p.a * p.c;
  h.shock.w = -potential(cc.u_source, p);
  h.shock.u_l = cc.u;
  h.shock.u_r = cc.u_source;
  h.right_arc = manifold_arc(Anchor::WuPMinus, p.c, p, cc.u_source, 1, opt);
  SlowArc mid;
  Curve fs = fs_middle_branch(p.c, p, opt, &mid);
  // Keep the part between the folded saddle and the crossing, in physical order.
  std::vector<SlowSample> keep;
  for (const auto& s : mid.samples)
    if (s.u <= cc.u) keep.push_back(s);
  std::reverse(keep.begin(), keep.end());
  mid.samples = keep;
  mid.orientation_flag = -1;
  h.middle_arc = mid;
  h.left_arc = manifold_arc(Anchor::WsPPlus, p.c, p, 0.5 * p.gamma1, 1, opt);
  h.residual = std::abs(fs_to_s_mismatch(p.c, p, opt));
  return h;
}

double canard_threshold(const ModelParams& p, double a_lo, double a_hi, double tol,
                        const ReducedOptions& opt) {
  auto found = [&](double a) {
    ModelParams q = p;
    q.a = a;
    return canard_crossing(q, opt).found;
  };
  if (found(a_lo)) return a_lo;
  if (!found(a_hi)) throw NotFound("no canard crossing up to a = " + std::to_string(a_hi));
  return num::bisect_predicate(found, a_lo, a_hi, tol);
}

SingularHeteroclinic standing_wave_solve(const ModelParams& p, const std::string& free,
                                         const ReducedOptions& opt) {
  ModelParams q = p;
  q.c = 0.0;
  q.validate();
  auto F = [&](double y) {
    ModelParams r = q;
    r.set(free, y);
    return het_mismatch(0.0, r, 1, opt);
  };
  const double y0 = q.get(free);
  if (!(std::abs(F(y0)) <= 1e-12)) {
    auto br = num::first_sign_change(F, y0 - 0.05, y0 + 0.05, 20);
    if (!br) throw NoRoot("standing_wave_solve: no sign change in " + free);
    q.set(free, num::root(F, br->lo, br->hi, 1e-13, "standing_wave_solve"));
  }
  return assemble(q, 0.0, 1, HetKind::StandingWave, opt);
}

std::string to_string(HetKind k) {
  switch (k) {
    case HetKind::MonotoneInvasion: return "MonotoneInvasion";
    case HetKind::MonotoneEvasion: return "MonotoneEvasion";
    case HetKind::Nonmonotone: return "Nonmonotone";
    case HetKind::CanardWave: return "CanardWave";
    case HetKind::StandingWave: return "StandingWave";
  }
  return "?";
}

std::string to_string(Anchor a) {
  switch (a) {
    case Anchor::WuPMinus: return "WuPMinus";
    case Anchor::WsPPlus: return "WsPPlus";
    case Anchor::WuFoldedSaddle: return "WuFoldedSaddle";
    case Anchor::WsPMinus: return "WsPMinus";
    case Anchor::WuPPlus: return "WuPPlus";
  }
  return "?";
}

}  // namespace rnd
