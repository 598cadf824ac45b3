#include "rnd/fullwave.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "rnd/errors.hpp"

namespace rnd {

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

Vec4 to_vec(const State4& s) { return Vec4(s[0], s[1], s[2], s[3]); }
State4 to_state(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

// dF/dc at fixed state (c enters through delta = a c and w' = v + c u).
Vec4 slow_dc(const State4& x, const ModelParams& p) {
  return Vec4(0.0, -p.a * x[1] / p.eps, 0.0, x[0]);
}

double linear_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

std::vector<double> build_mesh(double L, double eps, const BvpOptions& opt) {
  std::vector<double> half{0.0};
  const double h0 = opt.h_layer * eps;
  double z = 0.0, h = h0;
  while (z < L) {
    if (z >= opt.layer_halfwidth * eps) h = std::min(h * opt.growth, opt.h_max);
    z += h;
    half.push_back(std::min(z, L));
  }
  // Avoid a sliver at the right end.
  if (half.size() > 2 && half.back() - half[half.size() - 2] < 0.5 * h) {
    half.erase(half.end() - 2);
  }
  std::vector<double> mesh;
  for (auto it = half.rbegin(); it != half.rend(); ++it) mesh.push_back(-*it);
  mesh.insert(mesh.end(), half.begin() + 1, half.end());
  return mesh;
}

// Rows spanning the orthogonal complement of the chosen invariant subspace.
Eigen::Matrix<double, 2, 4> complement_rows(Equilibrium which, bool unstable, const ModelParams& p) {
  SaddleSplit s = saddle_subspaces(which, p);
  const Eigen::Matrix<double, 4, 2>& B = unstable ? s.unstable : s.stable;
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(B);
  Mat4 Q = qr.householderQ();
  return Q.rightCols<2>().transpose();
}

struct Bc {
  Eigen::Matrix<double, 2, 4> rows;
  Eigen::Vector2d value;
  Eigen::Vector2d dc;
};

Bc boundary(Equilibrium which, const State4& y, const ModelParams& p) {
  // Left end sits on E^u(p-), right end on E^s(p+).
  const bool unstable = which == Equilibrium::PMinus;
  auto g = [&](const ModelParams& q, Eigen::Matrix<double, 2, 4>* rows) {
    Eigen::Matrix<double, 2, 4> R = complement_rows(which, unstable, q);
    if (rows) *rows = R;
    return Eigen::Vector2d(R * (to_vec(y) - to_vec(equilibrium_state(which, q))));
  };
  Bc bc;
  bc.value = g(p, &bc.rows);
  const double hc = 1e-6;
  ModelParams qp = p, qm = p;
  qp.c += hc;
  qm.c -= hc;
  Eigen::Matrix<double, 2, 4> Rp, Rm;
  Eigen::Vector2d gp = g(qp, &Rp), gm = g(qm, &Rm);
  // Guard against a sign flip of the QR basis between the perturbed states.
  for (int r = 0; r < 2; ++r) {
    if (Rp.row(r).dot(bc.rows.row(r)) < 0.0) gp[r] = -gp[r];
    if (Rm.row(r).dot(bc.rows.row(r)) < 0.0) gm[r] = -gm[r];
  }
  bc.dc = (gp - gm) / (2.0 * hc);
  return bc;
}

struct Collocation {
  const std::vector<double>& z;
  ModelParams p;
  std::size_t i0;  // node at z = 0
  double phase_u;
  bool fix_c;
  double c_fixed;

  std::size_t n() const { return z.size(); }
  std::size_t size() const { return 4 * n() + 1; }

  ModelParams with_c(double c) const {
    ModelParams q = p;
    q.c = c;
    return q;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& Y) const {
    const double c = Y[4 * n()];
    const ModelParams q = with_c(c);
    Eigen::VectorXd R(size());
    auto node = [&](std::size_t i) { return State4{Y[4 * i], Y[4 * i + 1], Y[4 * i + 2], Y[4 * i + 3]}; };
    R.segment<2>(0) = boundary(Equilibrium::PMinus, node(0), q).value;
    std::vector<Vec4> F(n());
    for (std::size_t i = 0; i < n(); ++i) F[i] = to_vec(slow_rhs(node(i), q));
    for (std::size_t i = 0; i + 1 < n(); ++i) {
      const double h = z[i + 1] - z[i];
      const Vec4 yi = Y.segment<4>(4 * i), yj = Y.segment<4>(4 * i + 4);
      const Vec4 ym = 0.5 * (yi + yj) - h / 8.0 * (F[i + 1] - F[i]);
      const Vec4 fm = to_vec(slow_rhs(to_state(ym), q));
      R.segment<4>(2 + 4 * i) = yj - yi - h / 6.0 * (F[i] + 4.0 * fm + F[i + 1]);
    }
    R.segment<2>(4 * n() - 2) = boundary(Equilibrium::PPlus, node(n() - 1), q).value;
    R[4 * n()] = fix_c ? c - c_fixed : Y[4 * i0] - phase_u;
    return R;
  }

  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& Y) const {
    const double c = Y[4 * n()];
    const ModelParams q = with_c(c);
    const std::size_t cc = 4 * n();
    std::vector<Eigen::Triplet<double>> T;
    T.reserve(40 * n());
    auto node = [&](std::size_t i) { return State4{Y[4 * i], Y[4 * i + 1], Y[4 * i + 2], Y[4 * i + 3]}; };
    auto put_bc = [&](std::size_t row, std::size_t col, const Bc& bc) {
      for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 4; ++k) T.emplace_back(row + r, col + k, bc.rows(r, k));
        T.emplace_back(row + r, cc, bc.dc[r]);
      }
    };
    put_bc(0, 0, boundary(Equilibrium::PMinus, node(0), q));

    std::vector<Vec4> F(n()), Fc(n());
    std::vector<Mat4> J(n());
    for (std::size_t i = 0; i < n(); ++i) {
      F[i] = to_vec(slow_rhs(node(i), q));
      J[i] = slow_jacobian(node(i), q);
      Fc[i] = slow_dc(node(i), q);
    }
    const Mat4 I = Mat4::Identity();
    for (std::size_t i = 0; i + 1 < n(); ++i) {
      const double h = z[i + 1] - z[i];
      const Vec4 yi = Y.segment<4>(4 * i), yj = Y.segment<4>(4 * i + 4);
      const Vec4 ym = 0.5 * (yi + yj) - h / 8.0 * (F[i + 1] - F[i]);
      const State4 sm = to_state(ym);
      const Mat4 Jm = slow_jacobian(sm, q);
      const Vec4 Fcm = slow_dc(sm, q);
      const Mat4 dym_i = 0.5 * I + h / 8.0 * J[i];
      const Mat4 dym_j = 0.5 * I - h / 8.0 * J[i + 1];
      const Vec4 dym_c = -h / 8.0 * (Fc[i + 1] - Fc[i]);
      const Mat4 Ai = -I - h / 6.0 * (J[i] + 4.0 * Jm * dym_i);
      const Mat4 Aj = I - h / 6.0 * (J[i + 1] + 4.0 * Jm * dym_j);
      const Vec4 Ac = -h / 6.0 * (Fc[i] + 4.0 * (Fcm + Jm * dym_c) + Fc[i + 1]);
      const std::size_t row = 2 + 4 * i;
      for (int r = 0; r < 4; ++r) {
        for (int k = 0; k < 4; ++k) {
          if (Ai(r, k) != 0.0) T.emplace_back(row + r, 4 * i + k, Ai(r, k));
          if (Aj(r, k) != 0.0) T.emplace_back(row + r, 4 * i + 4 + k, Aj(r, k));
        }
        T.emplace_back(row + r, cc, Ac[r]);
      }
    }
    put_bc(4 * n() - 2, 4 * (n() - 1), boundary(Equilibrium::PPlus, node(n() - 1), q));
    if (fix_c) T.emplace_back(cc, cc, 1.0);
    else T.emplace_back(cc, 4 * i0, 1.0);
    Eigen::SparseMatrix<double> M(size(), size());
    M.setFromTriplets(T.begin(), T.end());
    return M;
  }
};

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

NewtonOutcome newton(const Collocation& col, Eigen::VectorXd& Y, int max_iter) {
  NewtonOutcome out;
  Eigen::VectorXd R = col.residual(Y);
  double rn = R.norm();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    Eigen::SparseMatrix<double> Jm = col.jacobian(Y);
    lu.compute(Jm);
    if (lu.info() != Eigen::Success) break;
    Eigen::VectorXd dY = lu.solve(-R);
    if (!dY.allFinite()) break;
    double lam = 1.0;
    bool accepted = false;
    for (int k = 0; k < 12; ++k, lam *= 0.5) {
      Eigen::VectorXd Yn = Y + lam * dY;
      Eigen::VectorXd Rn = col.residual(Yn);
      const double rnn = Rn.norm();
      if (std::isfinite(rnn) && rnn < (1.0 - 1e-4 * lam) * rn) {
        Y = Yn;
        R = Rn;
        rn = rnn;
        accepted = true;
        break;
      }
    }
    const double step = lam * dY.lpNorm<Eigen::Infinity>();
    if (!accepted) {
      // At roundoff level the residual can no longer decrease.
      out.converged = R.lpNorm<Eigen::Infinity>() < 1e-9;
      break;
    }
    if (R.lpNorm<Eigen::Infinity>() < 1e-11 || (lam == 1.0 && step < 1e-12)) {
      out.converged = true;
      break;
    }
  }
  out.residual = R.lpNorm<Eigen::Infinity>();
  if (!out.converged) out.converged = out.residual < 1e-9;
  return out;
}

WaveProfile make_profile(const std::vector<double>& z, const Eigen::VectorXd& Y, const ModelParams& p) {
  WaveProfile w;
  w.z = z;
  const std::size_t n = z.size();
  w.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.y[i] = {Y[4 * i], Y[4 * i + 1], Y[4 * i + 2], Y[4 * i + 3]};
  w.wavespeed = Y[4 * n];
  w.params = p;
  w.params.c = w.wavespeed;
  w.eps = p.eps;
  return w;
}

Eigen::VectorXd pack(const std::vector<double>& z, const WaveProfile& src, double c) {
  Eigen::VectorXd Y(4 * z.size() + 1);
  const State4 pm = equilibrium_state(Equilibrium::PMinus, src.params);
  const State4 pp = equilibrium_state(Equilibrium::PPlus, src.params);
  for (std::size_t i = 0; i < z.size(); ++i) {
    State4 s;
    if (z[i] < src.z.front()) s = pm;
    else if (z[i] > src.z.back()) s = pp;
    else s = profile_state(src, z[i]);
    for (int k = 0; k < 4; ++k) Y[4 * i + k] = s[k];
  }
  Y[4 * z.size()] = c;
  return Y;
}

std::size_t zero_index(const std::vector<double>& z) {
  auto it = std::lower_bound(z.begin(), z.end(), 0.0);
  if (it == z.end() || *it != 0.0) throw ConfigError("mesh has no node at z = 0");
  return static_cast<std::size_t>(it - z.begin());
}

// Splits intervals whose quarter-point defect exceeds half the tolerance.
std::vector<double> refine_mesh(const WaveProfile& w, double tol) {
  std::vector<double> z{w.z.front()};
  for (std::size_t i = 0; i + 1 < w.z.size(); ++i) {
    WaveProfile one;
    one.z = {w.z[i], w.z[i + 1]};
    one.y = {w.y[i], w.y[i + 1]};
    one.params = w.params;
    one.eps = w.eps;
    if (profile_defect(one, {0.25, 0.75}) > 0.5 * tol) z.push_back(0.5 * (w.z[i] + w.z[i + 1]));
    z.push_back(w.z[i + 1]);
  }
  return z;
}

double default_half_length(const ModelParams& p) {
  double slowest = std::numeric_limits<double>::infinity();
  for (Equilibrium e : {Equilibrium::PMinus, Equilibrium::PPlus}) {
    SaddleSplit s = saddle_subspaces(e, p);
    for (int k = 0; k < 4; ++k) slowest = std::min(slowest, std::abs(s.eigenvalues[k].real()));
  }
  return 40.0 / slowest;
}

WaveProfile solve_on_mesh(std::vector<double> z, Eigen::VectorXd Y, const ModelParams& q,
                          const BvpOptions& opt, double c_fixed) {
  for (int round = 0;; ++round) {
    Collocation col{z, q, zero_index(z), opt.phase_u, opt.fix_c, c_fixed};
    NewtonOutcome nt = newton(col, Y, opt.max_newton);
    if (!nt.converged)
      throw NoConvergence("collocation Newton stalled at residual " + std::to_string(nt.residual) +
                          " after " + std::to_string(nt.iterations) + " iterations");
    WaveProfile w = make_profile(z, Y, q);
    w.newton_iterations = nt.iterations;
    w.residual_norm = profile_defect(w, {0.25, 0.75});
    if (w.residual_norm <= opt.tol || round >= opt.max_refine) {
      if (w.residual_norm > opt.tol)
        throw NoConvergence("residual " + std::to_string(w.residual_norm) +
                            " above tolerance after mesh refinement");
      return w;
    }
    std::vector<double> zn = refine_mesh(w, opt.tol);
    Y = pack(zn, w, w.wavespeed);
    z = std::move(zn);
  }
}

void check_endpoints(const WaveProfile& w, const BvpOptions& opt) {
  const State4 pm = equilibrium_state(Equilibrium::PMinus, w.params);
  const State4 pp = equilibrium_state(Equilibrium::PPlus, w.params);
  double dl = 0.0, dr = 0.0;
  for (int k = 0; k < 4; ++k) {
    dl = std::max(dl, std::abs(w.y.front()[k] - pm[k]));
    dr = std::max(dr, std::abs(w.y.back()[k] - pp[k]));
  }
  if (dl > opt.endpoint_tol || dr > opt.endpoint_tol)
    throw DomainTooShort("endpoint distances " + std::to_string(dl) + ", " + std::to_string(dr));
}

// Composite guess: slow arcs in physical z plus the layer orbit at y = z/eps.
Eigen::VectorXd initial_guess(const std::vector<double>& z, const SingularHeteroclinic& seed,
                              const ModelParams& q, double phase_u) {
  auto slow = [&](const SlowArc& arc, std::vector<double>& zs, std::vector<double>& us,
                  std::vector<double>& vs) {
    const auto& s = arc.samples;
    std::vector<double> acc(s.size(), 0.0);
    for (std::size_t i = 1; i < s.size(); ++i)
      acc[i] = acc[i - 1] + 0.5 * (s[i].zeta - s[i - 1].zeta) *
                                (diffusivity(s[i].u, q) + diffusivity(s[i - 1].u, q));
    // dz = D(u) dzeta; z = 0 at the shock end of the arc.
    for (std::size_t i = 0; i < s.size(); ++i) {
      zs.push_back(acc[i] - acc.back());
      us.push_back(s[i].u);
      vs.push_back(s[i].v);
    }
    std::vector<std::size_t> idx(zs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return zs[a] < zs[b]; });
    std::vector<double> z2, u2, v2;
    for (auto i : idx) {
      z2.push_back(zs[i]);
      u2.push_back(us[i]);
      v2.push_back(vs[i]);
    }
    zs = z2, us = u2, vs = v2;
  };
  std::vector<double> zr, ur, vr, zl, ul, vl;
  slow(seed.right_arc, zr, ur, vr);
  slow(seed.left_arc, zl, ul, vl);

  LayerOrbit lo = layer_orbit(seed.shock, q, Direction::GammaMinus);
  std::vector<double> ys, lu, lh;
  for (const auto& s : lo.samples) {
    ys.push_back(s.y);
    lu.push_back(s.u);
    lh.push_back(s.uhat);
  }
  double y0 = 0.0;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if ((lu[i - 1] - phase_u) * (lu[i] - phase_u) <= 0.0) {
      y0 = ys[i - 1] + (phase_u - lu[i - 1]) / (lu[i] - lu[i - 1]) * (ys[i] - ys[i - 1]);
      break;
    }
  }
  const double ur_end = seed.shock.u_r;
  const double ul_end = seed.shock.u_l;
  Eigen::VectorXd Y(4 * z.size() + 1);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double y = z[i] / q.eps + y0;
    const double ulay = linear_interp(ys, lu, y);
    const double hlay = linear_interp(ys, lh, y);
    double u, v;
    if (z[i] < 0.0) {
      const double us = linear_interp(zr, ur, z[i]);
      u = us + ulay - ur_end;
      v = linear_interp(zr, vr, z[i]);
      Y[4 * i + 3] = -potential(us, q);
    } else {
      const double us = linear_interp(zl, ul, z[i]);
      u = us + ulay - ul_end;
      v = linear_interp(zl, vl, z[i]);
      Y[4 * i + 3] = -potential(us, q);
    }
    Y[4 * i] = u;
    Y[4 * i + 1] = hlay;
    Y[4 * i + 2] = v;
  }
  Y[4 * z.size()] = q.c;
  return Y;
}

}  // namespace

State4 fast_rhs(const State4& x, const ModelParams& p) {
  const double delta = p.a * p.c;
  return {x[1], x[3] + potential(x[0], p) - delta * x[1], p.eps * reaction(x[0], p),
          p.eps * (x[2] + p.c * x[0])};
}

State4 slow_rhs(const State4& x, const ModelParams& p) {
  const double delta = p.a * p.c;
  return {x[1] / p.eps, (x[3] + potential(x[0], p) - delta * x[1]) / p.eps, reaction(x[0], p),
          x[2] + p.c * x[0]};
}

Eigen::Matrix4d slow_jacobian(const State4& x, const ModelParams& p) {
  const double delta = p.a * p.c;
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 1) = 1.0 / p.eps;
  J(1, 0) = diffusivity(x[0], p) / p.eps;
  J(1, 1) = -delta / p.eps;
  J(1, 3) = 1.0 / p.eps;
  J(2, 0) = reaction_prime(x[0], p);
  J(3, 0) = p.c;
  J(3, 2) = 1.0;
  return J;
}

State4 equilibrium_state(Equilibrium which, const ModelParams& p) {
  switch (which) {
    case Equilibrium::PMinus: return {1.0, 0.0, -p.c, -potential(1.0, p)};
    case Equilibrium::PPlus: return {0.0, 0.0, 0.0, -potential(0.0, p)};
    case Equilibrium::PB: return {p.alpha, 0.0, -p.c * p.alpha, -potential(p.alpha, p)};
  }
  return {};
}

SaddleSplit saddle_subspaces(Equilibrium which, const ModelParams& p) {
  if (!(p.eps > 0.0)) throw ConfigError("saddle_subspaces needs eps > 0");
  SaddleSplit s;
  s.jacobian = slow_jacobian(equilibrium_state(which, p), p);
  Eigen::EigenSolver<Eigen::Matrix4d> es(s.jacobian);
  Eigen::Vector4cd ev = es.eigenvalues();
  Eigen::Matrix4cd V = es.eigenvectors();
  std::array<int, 4> idx{0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ev[a].real() < ev[b].real(); });
  int nneg = 0;
  for (int k = 0; k < 4; ++k) {
    s.eigenvalues[k] = ev[idx[k]];
    if (std::abs(ev[k].real()) <= 1e-10)
      throw DegenerateSplitting("eigenvalue with |Re| <= 1e-10 at " +
                                std::string(which == Equilibrium::PMinus ? "p-" : "p+"));
    if (ev[k].real() < 0.0) ++nneg;
  }
  if (nneg != 2) throw DegenerateSplitting("splitting is not 2/2");
  // Real bases: for a complex pair, real and imaginary parts span the plane.
  auto basis = [&](int k0) {
    Eigen::Matrix<double, 4, 2> B;
    const Eigen::Vector4cd a = V.col(idx[k0]), b = V.col(idx[k0 + 1]);
    if (std::abs(s.eigenvalues[k0].imag()) > 0.0) {
      B.col(0) = a.real();
      B.col(1) = a.imag();
    } else {
      B.col(0) = a.real();
      B.col(1) = b.real();
    }
    for (int j = 0; j < 2; ++j) {
      Eigen::Index im;
      B.col(j).cwiseAbs().maxCoeff(&im);
      if (B(im, j) < 0.0) B.col(j) = -B.col(j);
    }
    Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(B);
    Eigen::Matrix<double, 4, 2> Q = qr.householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
    return Q;
  };
  s.stable = basis(0);
  s.unstable = basis(2);
  return s;
}

State4 profile_state(const WaveProfile& w, double z) {
  if (z <= w.z.front()) return w.y.front();
  if (z >= w.z.back()) return w.y.back();
  auto it = std::upper_bound(w.z.begin(), w.z.end(), z);
  const std::size_t j = static_cast<std::size_t>(it - w.z.begin()), i = j - 1;
  const double h = w.z[j] - w.z[i], t = (z - w.z[i]) / h;
  const State4 fi = slow_rhs(w.y[i], w.params), fj = slow_rhs(w.y[j], w.params);
  const double h00 = 2 * t * t * t - 3 * t * t + 1, h10 = t * t * t - 2 * t * t + t;
  const double h01 = -2 * t * t * t + 3 * t * t, h11 = t * t * t - t * t;
  State4 s;
  for (int k = 0; k < 4; ++k)
    s[k] = h00 * w.y[i][k] + h10 * h * fi[k] + h01 * w.y[j][k] + h11 * h * fj[k];
  return s;
}

State4 profile_derivative(const WaveProfile& w, double z) {
  if (z <= w.z.front()) return slow_rhs(w.y.front(), w.params);
  if (z >= w.z.back()) return slow_rhs(w.y.back(), w.params);
  auto it = std::upper_bound(w.z.begin(), w.z.end(), z);
  const std::size_t j = static_cast<std::size_t>(it - w.z.begin()), i = j - 1;
  const double h = w.z[j] - w.z[i], t = (z - w.z[i]) / h;
  const State4 fi = slow_rhs(w.y[i], w.params), fj = slow_rhs(w.y[j], w.params);
  const double d00 = (6 * t * t - 6 * t) / h, d10 = 3 * t * t - 4 * t + 1;
  const double d01 = (-6 * t * t + 6 * t) / h, d11 = 3 * t * t - 2 * t;
  State4 s;
  for (int k = 0; k < 4; ++k) s[k] = d00 * w.y[i][k] + d10 * fi[k] + d01 * w.y[j][k] + d11 * fj[k];
  return s;
}

double profile_position(const WaveProfile& w, double level) {
  for (std::size_t i = 1; i < w.z.size(); ++i) {
    const double a = w.y[i - 1][0] - level, b = w.y[i][0] - level;
    if (a == 0.0) return w.z[i - 1];
    if ((a > 0.0) != (b > 0.0)) {
      double lo = w.z[i - 1], hi = w.z[i];
      for (int k = 0; k < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++k) {
        const double mid = 0.5 * (lo + hi);
        if ((profile_state(w, mid)[0] - level > 0.0) == (a > 0.0)) lo = mid;
        else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  throw NotFound("profile never reaches u = " + std::to_string(level));
}

double profile_defect(const WaveProfile& w, const std::vector<double>& fractions) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < w.z.size(); ++i) {
    const double h = w.z[i + 1] - w.z[i];
    for (double f : fractions) {
      const double zz = w.z[i] + f * h;
      const State4 y = profile_state(w, zz), dy = profile_derivative(w, zz);
      const State4 F = slow_rhs(y, w.params);
      double num = 0.0, den = 1.0;
      for (int k = 0; k < 4; ++k) {
        num = std::max(num, std::abs(dy[k] - F[k]));
        den = std::max(den, std::abs(F[k]));
      }
      worst = std::max(worst, num / den);
    }
  }
  return worst;
}

WaveProfile het_bvp_resolve(const WaveProfile& guess, const ModelParams& p, const BvpOptions& opt) {
  ModelParams q = p;
  q.c = guess.wavespeed;
  q.eps = guess.eps;
  Eigen::VectorXd Y = pack(guess.z, guess, guess.wavespeed);
  WaveProfile w = solve_on_mesh(guess.z, Y, q, opt, guess.wavespeed);
  check_endpoints(w, opt);
  w.experimental = guess.experimental;
  return w;
}

WaveProfile het_bvp_solve(const SingularHeteroclinic& seed, double eps, const ModelParams& p,
                          const BvpOptions& opt) {
  if (!(eps > 0.0 && eps <= 1e-2)) throw ConfigError("het_bvp_solve needs 0 < eps <= 1e-2");
  ModelParams q = p;
  q.eps = eps;
  q.c = seed.wavespeed;
  q.validate();
  const bool experimental = seed.kind == HetKind::Nonmonotone || seed.kind == HetKind::CanardWave;
  double L = opt.half_length > 0.0 ? opt.half_length : default_half_length(q);

  auto attempt = [&](double len) {
    std::vector<double> z = build_mesh(len, eps, opt);
    Eigen::VectorXd Y = initial_guess(z, seed, q, opt.phase_u);
    return solve_on_mesh(z, Y, q, opt, q.c);
  };

  WaveProfile w;
  try {
    w = attempt(L);
  } catch (const NoConvergence&) {
    if (!opt.eps_continuation || eps * 10.0 > 1e-2) throw;
    // Continue down from a larger eps, rescaling the layer coordinate.
    BvpOptions o2 = opt;
    WaveProfile prev = het_bvp_solve(seed, eps * 10.0, p, o2);
    for (double e = eps * 10.0 / std::sqrt(10.0);; e /= std::sqrt(10.0)) {
      const double en = std::max(e, eps);
      ModelParams qe = q;
      qe.eps = en;
      std::vector<double> z = build_mesh(L, en, opt);
      // Squeeze the previous layer by eps ratio near the shock.
      WaveProfile scaled = prev;
      const double r = en / prev.eps;
      for (auto& zz : scaled.z) {
        const double a = std::abs(zz);
        const double lw = opt.layer_halfwidth * prev.eps;
        if (a < lw) zz *= r;
        else zz = (zz > 0 ? 1.0 : -1.0) * (lw * r + (a - lw) * (L - lw * r) / (L - lw));
      }
      scaled.params.eps = en;
      scaled.eps = en;
      Eigen::VectorXd Y(4 * z.size() + 1);
      for (std::size_t i = 0; i < z.size(); ++i) {
        State4 s{};
        auto it = std::upper_bound(scaled.z.begin(), scaled.z.end(), z[i]);
        std::size_t j = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - scaled.z.begin(), 1),
                                              scaled.z.size() - 1);
        const double t = std::clamp((z[i] - scaled.z[j - 1]) / (scaled.z[j] - scaled.z[j - 1]), 0.0, 1.0);
        for (int k = 0; k < 4; ++k) s[k] = (1 - t) * scaled.y[j - 1][k] + t * scaled.y[j][k];
        for (int k = 0; k < 4; ++k) Y[4 * i + k] = s[k];
      }
      Y[4 * z.size()] = prev.wavespeed;
      qe.c = prev.wavespeed;
      prev = solve_on_mesh(z, Y, qe, opt, qe.c);
      if (en <= eps) break;
    }
    w = prev;
  }
  int doublings = 0;
  for (;;) {
    try {
      check_endpoints(w, opt);
      break;
    } catch (const DomainTooShort&) {
      if (opt.half_length > 0.0 || ++doublings > 2) throw;
      L *= 2.0;
      w = attempt(L);
    }
  }
  w.experimental = experimental;
  return w;
}

}  // namespace rnd
