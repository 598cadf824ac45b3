#include "rnd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rnd/errors.hpp"

namespace rnd {

namespace {

using M2 = Eigen::Matrix2cd;

constexpr double kPi = std::numbers::pi;

// Riccati vector field in either chart and its derivative along dW.
M2 riccati_rhs(const M2& W, const EigBlocks& b, Chart chart) {
  if (chart == Chart::Primary) return b.C + b.D * W - W * b.A - W * b.B * W;
  return b.B + b.A * W - W * b.D - W * b.C * W;
}

M2 riccati_dir(const M2& W, const M2& dW, const EigBlocks& b, Chart chart) {
  if (chart == Chart::Primary) return b.D * dW - dW * b.A - dW * b.B * W - W * b.B * dW;
  return b.A * dW - dW * b.D - dW * b.C * W - W * b.C * dW;
}

// |det| of the orthonormalised frame block over which the chart is a graph.
double chart_quality(const M2& W) {
  const M2 G = M2::Identity() + W.adjoint() * W;
  return 1.0 / std::sqrt(std::abs(G.determinant()));
}

// Quality of the same plane seen in the other chart.
double other_chart_quality(const M2& W) { return std::abs(W.determinant()) * chart_quality(W); }

// Graph coordinates of the span of the two eigenvectors with the largest
// (unstable) or smallest (stable) real parts.
RiccatiState plane_from_matrix(const Eigen::Matrix4cd& M, bool unstable) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(M);
  const Eigen::Vector4cd ev = es.eigenvalues();
  std::array<int, 4> idx{0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ev[a].real() < ev[b].real(); });
  if (!(ev[idx[1]].real() < 0.0 && ev[idx[2]].real() > 0.0))
    throw DegenerateSplitting("far-field spatial eigenvalues do not split 2/2");
  Eigen::Matrix<cd, 4, 2> F;
  F.col(0) = es.eigenvectors().col(unstable ? idx[3] : idx[0]);
  F.col(1) = es.eigenvectors().col(unstable ? idx[2] : idx[1]);
  const M2 X = F.topRows<2>(), Y = F.bottomRows<2>();
  RiccatiState s;
  Eigen::PartialPivLU<M2> lx(X), ly(Y);
  const double qx = std::abs(X.determinant()), qy = std::abs(Y.determinant());
  if (qx >= qy) {
    s.W = Y * lx.inverse();
    s.chart = Chart::Primary;
  } else {
    s.W = X * ly.inverse();
    s.chart = Chart::Swapped;
  }
  return s;
}

using V4 = Eigen::Vector4cd;

V4 vec(const M2& W) { return Eigen::Map<const V4>(W.data()); }
M2 unvec(const V4& v) { return Eigen::Map<const M2>(v.data()); }

constexpr int kStages = 6;

// One step of linearly implicit Euler extrapolation (substep counts 1..6,
// Jacobian and z-derivative frozen at the step start). Every tableau entry
// has R(inf) = 0, so the error estimate stays meaningful for the fast
// components that relax onto the slaved plane.
struct ExtrapolationStep {
  M2 value;
  double err;  // scaled max-norm estimate, accept when <= 1
  bool finite;
};

template <class Rhs>
ExtrapolationStep extrapolation_step(Rhs&& rhs, const Eigen::Matrix4cd& J, const V4& ft, const M2& W0,
                                     double s0, double H, double atol, double rtol) {
  constexpr int K = kStages;
  std::array<std::array<V4, K>, K> T;
  const V4 y0 = vec(W0);
  for (int j = 0; j < K; ++j) {
    const int n = j + 1;
    const double h = H / n;
    const Eigen::PartialPivLU<Eigen::Matrix4cd> lu(Eigen::Matrix4cd::Identity() - h * J);
    V4 y = y0;
    for (int i = 0; i < n; ++i) y += lu.solve(h * vec(rhs(s0 + i * h, unvec(y))) + h * h * ft);
    T[j][0] = y;
    for (int k = 1; k <= j; ++k) {
      const double ratio = static_cast<double>(n) / (n - k);
      T[j][k] = T[j][k - 1] + (T[j][k - 1] - T[j - 1][k - 1]) / (ratio - 1.0);
    }
  }
  ExtrapolationStep out;
  out.value = unvec(T[K - 1][K - 1]);
  out.finite = T[K - 1][K - 1].allFinite();
  double err = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(T[K - 1][K - 1][i]));
    err = std::max(err, std::abs(T[K - 1][K - 1][i] - T[K - 1][K - 2][i]) / sc);
  }
  out.err = out.finite ? err : std::numeric_limits<double>::infinity();
  return out;
}

// Steps never straddle a breakpoint of the coefficients. The collocation
// profile is only C1 at mesh nodes; extrapolation across a node loses its
// error expansion and can settle on a wrong invariant plane.
template <class Blocks>
RiccatiState flow(const RiccatiState& start, FlowDirection dir, double z_end, double eps,
                  const RiccatiOptions& opt, const std::vector<double>& breaks, Blocks&& blocks) {
  const double sgn = dir == FlowDirection::Forward ? 1.0 : -1.0;
  const double span = sgn * (z_end - start.z);
  if (span < 0.0) throw ConfigError("riccati_flow: z_end lies behind the start in the flow direction");
  RiccatiState st = start;
  const double hw = opt.layer_halfwidth * eps, cap = std::max(opt.layer_cap * eps, 1e-300);
  const double hz = 1e-4 * std::max(eps, 1e-8);

  auto zof = [&](double s) { return start.z + sgn * s; };
  // Flow in s = sgn (z - z_start) >= 0.
  auto rhs = [&](double s, const M2& W) -> M2 { return sgn * riccati_rhs(W, blocks(zof(s)), st.chart); };

  double s = 0.0, ds = std::min(cap, std::max(span, 1e-300));
  std::size_t steps = 0;
  while (s < span) {
    if (++steps > opt.max_steps) throw IrrecoverableBlowup("riccati_flow step budget exhausted");
    const double z = zof(s);
    double lim = span - s;
    if (std::abs(z) <= hw) {
      lim = std::min(lim, cap);
    } else if (z * sgn < 0.0) {
      lim = std::min(lim, std::max(std::abs(z) - hw, cap));
    }
    if (!breaks.empty()) {
      const double tol = 1e-12 * std::max(1.0, std::abs(z));
      if (sgn > 0.0) {
        auto it = std::upper_bound(breaks.begin(), breaks.end(), z + tol);
        if (it != breaks.end()) lim = std::min(lim, *it - z);
      } else {
        auto it = std::lower_bound(breaks.begin(), breaks.end(), z - tol);
        if (it != breaks.begin()) lim = std::min(lim, z - *(it - 1));
      }
    }
    const double H = std::min(ds, lim);
    const bool clipped = H == lim;

    const EigBlocks b = blocks(z);
    Eigen::Matrix4cd J;
    for (int k = 0; k < 4; ++k) {
      M2 E = M2::Zero();
      E(k % 2, k / 2) = 1.0;  // column-major to match vec()
      J.col(k) = sgn * vec(riccati_dir(st.W, E, b, st.chart));
    }
    // d/ds of sgn F(z(s)) is dF/dz.
    const V4 ft = vec((riccati_rhs(st.W, blocks(z + hz), st.chart) -
                       riccati_rhs(st.W, blocks(z - hz), st.chart)) / (2.0 * hz));
    const ExtrapolationStep r = extrapolation_step(rhs, J, ft, st.W, s, H, opt.atol, opt.rtol);
    const double fac = r.err > 0.0 ? 0.9 * std::pow(r.err, -1.0 / kStages) : 4.0;
    if (!(r.err <= 1.0)) {
      ds = H * std::clamp(fac, 0.1, 0.5);
      if (ds < 1e-14 * std::max(1.0, span)) throw IrrecoverableBlowup("riccati_flow step size underflow");
      continue;
    }
    s = clipped && lim == span - s ? span : s + H;
    st.W = r.value;
    const double next = H * std::clamp(fac, 0.2, 4.0);
    // A step shortened to meet a limit says nothing about the next one.
    ds = clipped ? std::max(ds, next) : next;
    if (chart_quality(st.W) < opt.swap_threshold) {
      if (other_chart_quality(st.W) < opt.swap_threshold)
        throw IrrecoverableBlowup("both Riccati charts degenerate at z = " + std::to_string(zof(s)));
      st.W = M2(st.W.inverse());
      st.chart = st.chart == Chart::Primary ? Chart::Swapped : Chart::Primary;
      ++st.swaps;
    }
  }
  st.z = z_end;
  return st;
}

double wave_u(const WaveProfile& wave, double z) { return profile_state(wave, z)[0]; }

// Mesh nodes next to an interval where u actually changes; in the flat far
// field the kinks are below roundoff and steps may cross them.
std::vector<double> active_breaks(const WaveProfile& wave) {
  std::vector<double> out;
  const std::size_t n = wave.z.size();
  auto moving = [&](std::size_t i) { return std::abs(wave.y[i + 1][0] - wave.y[i][0]) > 1e-13; };
  for (std::size_t i = 0; i < n; ++i) {
    if ((i > 0 && moving(i - 1)) || (i + 1 < n && moving(i))) out.push_back(wave.z[i]);
  }
  return out;
}

}  // namespace

EigBlocks eig_blocks(double u, cd lambda, const ModelParams& p) {
  const double e = p.eps;
  EigBlocks b;
  b.A << 0.0, 1.0 / e, (diffusivity(u, p) + e * p.a * lambda) / e, -p.delta() / e;
  b.B << 0.0, 0.0, 0.0, 1.0 / e;
  b.C << reaction_prime(u, p) - lambda, 0.0, p.c, 0.0;
  b.D << 0.0, 0.0, 1.0, 0.0;
  return b;
}

namespace {
Eigen::Matrix4cd assemble(const EigBlocks& b) {
  Eigen::Matrix4cd M;
  M << b.A, b.B, b.C, b.D;
  return M;
}
}  // namespace

Eigen::Matrix4cd eig_matrix(double z, cd lambda, const WaveProfile& wave, const ModelParams& p) {
  return assemble(eig_blocks(wave_u(wave, z), lambda, p));
}

Eigen::Matrix4cd eig_matrix_far(Equilibrium end, cd lambda, const ModelParams& p) {
  return assemble(eig_blocks(end == Equilibrium::PMinus ? 1.0 : 0.0, lambda, p));
}

cd dispersion(double k, Equilibrium end, const ModelParams& p) {
  const double u = end == Equilibrium::PMinus ? 1.0 : 0.0;
  const double k2 = k * k;
  const double re = (reaction_prime(u, p) - diffusivity(u, p) * k2 - p.eps * p.eps * k2 * k2) /
                    (1.0 + p.a * p.eps * k2);
  return {re, p.c * k};
}

double dispersion_max_real(const ModelParams& p, double k_lo, double k_hi, int n) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Equilibrium e : {Equilibrium::PMinus, Equilibrium::PPlus}) {
    worst = std::max(worst, dispersion(0.0, e, p).real());
    for (int i = 0; i < n; ++i) {
      const double k = k_lo * std::pow(k_hi / k_lo, static_cast<double>(i) / (n - 1));
      worst = std::max(worst, dispersion(k, e, p).real());
    }
  }
  return worst;
}

std::array<cd, 4> asymptotic_spatial_eigs(cd lambda, const ModelParams& p) {
  std::array<cd, 4> mu;
  const double arg = std::arg(lambda), mag = std::abs(lambda);
  if (p.a == 0.0) {
    // eps^2 mu^4 = -lambda
    for (int m = 0; m < 4; ++m)
      mu[m] = std::pow(mag, 0.25) * std::polar(1.0, (arg + (2 * m + 1) * kPi) / 4.0) / std::sqrt(p.eps);
  } else {
    const cd big = std::sqrt(p.a * mag / p.eps) * std::polar(1.0, arg / 2.0);
    const double small = 1.0 / std::sqrt(p.a * p.eps);
    mu = {big, -big, cd(small, 0.0), cd(-small, 0.0)};
  }
  return mu;
}

RiccatiState riccati_start(FlowDirection dir, cd lambda, const WaveProfile& wave, const ModelParams& p,
                           const RiccatiOptions&) {
  const double z = dir == FlowDirection::Forward ? wave.z.front() : wave.z.back();
  RiccatiState s = plane_from_matrix(eig_matrix(z, lambda, wave, p), dir == FlowDirection::Forward);
  s.z = z;
  return s;
}

RiccatiState riccati_flow(const RiccatiState& start, FlowDirection dir, cd lambda, const WaveProfile& wave,
                          const ModelParams& p, double z_end, const RiccatiOptions& opt) {
  return flow(start, dir, z_end, p.eps, opt, active_breaks(wave),
              [&](double z) { return eig_blocks(wave_u(wave, z), lambda, p); });
}

RiccatiState riccati_flow_frozen(const RiccatiState& start, Equilibrium end, cd lambda, const ModelParams& p,
                                 double z_end, const RiccatiOptions& opt) {
  const EigBlocks b = eig_blocks(end == Equilibrium::PMinus ? 1.0 : 0.0, lambda, p);
  RiccatiOptions o = opt;
  o.layer_halfwidth = 0.0;
  return flow(start, z_end >= start.z ? FlowDirection::Forward : FlowDirection::Backward, z_end, p.eps, o, {},
              [&](double) { return b; });
}

double frame_det(const RiccatiState& s) {
  return s.chart == Chart::Primary ? chart_quality(s.W) : other_chart_quality(s.W);
}

EvansSample evans_value_at(cd lambda, double z0, const WaveProfile& wave, const ModelParams& p,
                           const EvansOptions& opt) {
  const RiccatiState m = riccati_flow(riccati_start(FlowDirection::Forward, lambda, wave, p, opt.riccati),
                                      FlowDirection::Forward, lambda, wave, p, z0, opt.riccati);
  const RiccatiState q = riccati_flow(riccati_start(FlowDirection::Backward, lambda, wave, p, opt.riccati),
                                      FlowDirection::Backward, lambda, wave, p, z0, opt.riccati);
  auto quality = [](const RiccatiState& s, Chart target) {
    return s.chart == target ? chart_quality(s.W) : other_chart_quality(s.W);
  };
  auto in_chart = [](const RiccatiState& s, Chart target) -> M2 {
    return s.chart == target ? s.W : M2(s.W.inverse());
  };
  const double qp = std::min(quality(m, Chart::Primary), quality(q, Chart::Primary));
  const double qs = std::min(quality(m, Chart::Swapped), quality(q, Chart::Swapped));
  EvansSample out;
  out.lambda = lambda;
  out.z0 = z0;
  out.chart_swaps = m.swaps + q.swaps;
  if (qp >= qs) {
    out.value = (in_chart(q, Chart::Primary) - in_chart(m, Chart::Primary)).determinant();
  } else {
    // det(W+ - W-) = det(V+ - V-) / (det V+ det V-) with V = W^{-1}.
    const M2 vp = in_chart(q, Chart::Swapped), vm = in_chart(m, Chart::Swapped);
    out.value = (vp - vm).determinant() / (vp.determinant() * vm.determinant());
  }
  return out;
}

EvansSample evans_value(cd lambda, const WaveProfile& wave, const ModelParams& p, const EvansOptions& opt) {
  return evans_value_at(lambda, profile_position(wave, opt.level), wave, p, opt);
}

std::vector<cd> semicircle_contour(double R, double r, int n) {
  if (!(R > r && r > 0.0) || n < 16) throw ConfigError("semicircle_contour needs R > r > 0 and n >= 16");
  std::vector<cd> pts;
  const int n_arc = n / 2, n_det = n / 8, n_axis = (n - n_arc - n_det) / 2;
  // Outer arc from -iR through R to iR.
  for (int i = 0; i < n_arc; ++i) pts.push_back(std::polar(R, -kPi / 2 + kPi * i / n_arc));
  // Down the imaginary axis from iR to ir, log spaced.
  for (int i = 0; i < n_axis; ++i) pts.push_back(cd(0.0, R * std::pow(r / R, static_cast<double>(i) / n_axis)));
  // Detour around the origin through +r.
  for (int i = 0; i < n_det; ++i) pts.push_back(std::polar(r, kPi / 2 - kPi * i / n_det));
  // From -ir down to -iR.
  for (int i = 0; i < n_axis; ++i) pts.push_back(cd(0.0, -r * std::pow(R / r, static_cast<double>(i) / n_axis)));
  return pts;
}

std::vector<cd> circle_contour(cd centre, double r, int n) {
  std::vector<cd> pts;
  for (int i = 0; i < n; ++i) pts.push_back(centre + std::polar(r, 2.0 * kPi * i / n));
  return pts;
}

std::vector<EvansSample> evans_sweep(const std::vector<cd>& lambdas, const WaveProfile& wave,
                                     const ModelParams& p, const EvansOptions& opt, Exec exec) {
  std::vector<EvansSample> out(lambdas.size());
  const double z0 = profile_position(wave, opt.level);
  auto errors = for_each_index(
      lambdas.size(), [&](std::size_t i) { out[i] = evans_value_at(lambdas[i], z0, wave, p, opt); }, exec);
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      std::ostringstream os;
      os << "Evans evaluation failed at lambda = " << lambdas[i] << ": " << errors[i];
      throw IrrecoverableBlowup(os.str());
    }
  }
  return out;
}

WindingResult winding_number(const std::vector<cd>& contour, const WaveProfile& wave, const ModelParams& p,
                             const WindingOptions& opt, Exec exec) {
  if (contour.size() < 3) throw ConfigError("winding_number needs at least 3 contour points");
  std::vector<EvansSample> pts = evans_sweep(contour, wave, p, opt.evans, exec);
  std::vector<int> depth(pts.size(), 0);  // depth of the edge starting at each point
  auto gap = [](const EvansSample& a, const EvansSample& b) { return std::abs(std::arg(b.value / a.value)); };
  for (;;) {
    std::vector<std::size_t> bad;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
      if (!(gap(pts[i], pts[(i + 1) % n]) < opt.max_gap)) bad.push_back(i);
    if (bad.empty()) break;
    std::vector<cd> mids;
    for (std::size_t i : bad) {
      if (depth[i] >= opt.max_bisections) {
        std::ostringstream os;
        os << "argument gap not resolved near lambda = " << pts[i].lambda;
        throw RefinementExhausted(os.str());
      }
      mids.push_back(0.5 * (pts[i].lambda + pts[(i + 1) % n].lambda));
    }
    std::vector<EvansSample> mv = evans_sweep(mids, wave, p, opt.evans, exec);
    std::vector<EvansSample> np;
    std::vector<int> nd;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      np.push_back(pts[i]);
      if (k < bad.size() && bad[k] == i) {
        nd.push_back(depth[i] + 1);
        np.push_back(mv[k]);
        nd.push_back(depth[i] + 1);
        ++k;
      } else {
        nd.push_back(depth[i]);
      }
    }
    pts = std::move(np);
    depth = std::move(nd);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) total += std::arg(pts[(i + 1) % pts.size()].value / pts[i].value);
  WindingResult res;
  res.raw = total / (2.0 * kPi);
  res.winding = static_cast<int>(std::lround(res.raw));
  res.samples = std::move(pts);
  return res;
}

SpectrumReport point_spectrum_scan(const WaveProfile& wave, const ModelParams& p, double re_lo, double re_hi,
                                   const std::vector<double>& radii, const ScanOptions& opt, Exec exec) {
  if (!(re_hi > re_lo) || !(opt.step > 0.0)) throw ConfigError("point_spectrum_scan needs re_lo < re_hi, step > 0");
  SpectrumReport rep;
  std::ostringstream txt;
  txt << std::setprecision(10);
  const int n = static_cast<int>(std::ceil((re_hi - re_lo) / opt.step - 1e-9)) + 1;
  std::vector<cd> grid;
  for (int i = 0; i < n; ++i) grid.push_back(cd(std::min(re_lo + i * opt.step, re_hi), 0.0));
  const EvansOptions& eo = opt.winding.evans;
  const std::vector<EvansSample> ev = evans_sweep(grid, wave, p, eo, exec);
  const double z0 = profile_position(wave, eo.level);
  auto E = [&](double x) { return evans_value_at(cd(x, 0.0), z0, wave, p, eo).value.real(); };

  txt << "real scan on [" << re_lo << ", " << re_hi << "], step " << opt.step << "\n";
  for (int i = 0; i + 1 < n; ++i) {
    double lo = grid[i].real(), hi = grid[i + 1].real();
    double flo = ev[i].value.real(), fhi = ev[i + 1].value.real();
    if (flo == 0.0) {
      rep.real_eigenvalues.push_back({lo, 0});
      continue;
    }
    if ((flo > 0.0) == (fhi > 0.0)) continue;
    const double scale = std::min(std::abs(flo), std::abs(fhi));
    while (hi - lo > opt.root_tol) {
      const double mid = 0.5 * (lo + hi), fm = E(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0.0) == (flo > 0.0)) lo = mid, flo = fm;
      else hi = mid, fhi = fm;
    }
    const double root = 0.5 * (lo + hi);
    // A sign change through a pole leaves |E| large at the bracket.
    if (std::min(std::abs(flo), std::abs(fhi)) > scale) {
      txt << "  sign change at " << root << " is a pole, skipped\n";
      continue;
    }
    rep.real_eigenvalues.push_back({root, 0});
  }
  for (auto& e : rep.real_eigenvalues) {
    WindingResult w = winding_number(circle_contour(cd(e.value, 0.0), opt.multiplicity_radius), wave, p,
                                     opt.winding, exec);
    e.multiplicity = w.winding;
    txt << "  eigenvalue " << e.value << " multiplicity " << e.multiplicity << "\n";
  }
  for (double R : radii) {
    WindingResult w = winding_number(semicircle_contour(R, opt.origin_detour), wave, p, opt.winding, exec);
    rep.windings.emplace_back(R, w.winding);
    txt << "semicircle R = " << R << ": winding " << w.winding << " (" << w.samples.size() << " samples)\n";
  }
  rep.text = txt.str();
  return rep;
}

void write_evans_csv(std::ostream& os, const std::vector<EvansSample>& samples) {
  os << "re_lambda,im_lambda,re_E,im_E,chart_swaps\n";
  os << std::setprecision(17);
  for (const auto& s : samples)
    os << s.lambda.real() << ',' << s.lambda.imag() << ',' << s.value.real() << ',' << s.value.imag() << ','
       << s.chart_swaps << '\n';
}

}  // namespace rnd
