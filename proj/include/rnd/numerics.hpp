#pragma once

// Small numerical helpers shared by the modules: bracketed roots, sign-change
// scans, trapezoid sums and a thin wrapper over Eigen's hybrid Powell solver.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "rnd/errors.hpp"

namespace rnd::num {

using Fn = std::function<double(double)>;

// Bracketed root by TOMS 748 (Brent-class). Throws NoRoot without a sign change.
inline double root(const Fn& f, double lo, double hi, double xtol = 1e-12,
                   const std::string& what = "root") {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(std::isfinite(flo) && std::isfinite(fhi)) || (flo > 0.0) == (fhi > 0.0))
    throw NoRoot(what + ": no sign change on [" + std::to_string(lo) + ", " +
                 std::to_string(hi) + "]");
  std::uintmax_t it = 200;
  auto tol = [xtol](double a, double b) { return std::abs(a - b) <= xtol; };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, it);
  return 0.5 * (r.first + r.second);
}

struct Bracket {
  double lo, hi, flo, fhi;
};

// Samples f on n+1 equispaced points and returns the first adjacent pair with
// finite values of opposite sign. Non-finite samples are skipped.
inline std::optional<Bracket> first_sign_change(const Fn& f, double lo, double hi, int n) {
  double xp = lo, fp = f(lo);
  for (int i = 1; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    double fx = f(x);
    if (std::isfinite(fp) && std::isfinite(fx) && (fp <= 0.0) != (fx <= 0.0))
      return Bracket{xp, x, fp, fx};
    if (std::isfinite(fx) || !std::isfinite(fp)) {
      xp = x;
      fp = fx;
    }
  }
  return std::nullopt;
}

// Bisection on a boolean predicate with pred(lo) != pred(hi).
inline double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                               double xtol) {
  bool plo = pred(lo);
  while (std::abs(hi - lo) > xtol) {
    double mid = 0.5 * (lo + hi);
    if (pred(mid) == plo) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

using VecFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Solves F(x) = 0 with the hybrid Powell method (forward-difference Jacobian).
// Throws NoConvergence unless |F| <= ftol at the returned point.
Eigen::VectorXd solve(const VecFn& F, Eigen::VectorXd x0, double ftol = 1e-10,
                      double xtol = 1e-13, int maxfev = 400);

}  // namespace rnd::num
