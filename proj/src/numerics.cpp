#include "rnd/numerics.hpp"

#include <unsupported/Eigen/NonLinearOptimization>

namespace rnd::num {

namespace {

struct Functor {
  const VecFn* F;
  int n;
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    fvec = (*F)(x);
    for (int i = 0; i < fvec.size(); ++i)
      if (!std::isfinite(fvec[i])) return -1;
    return 0;
  }
  int inputs() const { return n; }
  int values() const { return n; }
};

}  // namespace

Eigen::VectorXd solve(const VecFn& F, Eigen::VectorXd x0, double ftol, double xtol, int maxfev) {
  Functor fn{&F, static_cast<int>(x0.size())};
  Eigen::HybridNonLinearSolver<Functor> solver(fn);
  solver.parameters.xtol = xtol;
  solver.parameters.maxfev = maxfev;
  solver.diag.setConstant(x0.size(), 1.0);
  solver.useExternalScaling = true;
  solver.solveNumericalDiff(x0);
  Eigen::VectorXd r = F(x0);
  if (!(r.allFinite() && r.norm() <= ftol))
    throw NoConvergence("nonlinear solve stalled with |F| = " + std::to_string(r.norm()));
  return x0;
}

}  // namespace rnd::num
