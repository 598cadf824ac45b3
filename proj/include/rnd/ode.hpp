#pragma once

// Explicit adaptive integration (Dormand-Prince 5(4) with dense output from
// Boost.Odeint) plus event location on the dense interpolant.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "rnd/errors.hpp"

namespace rnd::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.0;  // 0: unlimited
  double first_step = 1e-4;
  bool record = true;
  std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
struct Event {
  std::function<double(double, const Vec<N>&)> g;
  int direction = 0;  // +1: g increasing through 0, -1: decreasing, 0: either
  bool terminal = true;
  int occurrence = 1;  // terminal stops at this crossing count
};

template <std::size_t N>
struct Hit {
  int event;
  double t;
  Vec<N> x;
};

template <std::size_t N>
struct Result {
  std::vector<double> t;
  std::vector<Vec<N>> x;
  std::vector<Hit<N>> hits;  // all located events in order
  int terminal_event = -1;   // index of the event that stopped integration
  double t_end = 0.0;
  Vec<N> x_end{};
  bool reached_end = false;

  bool stopped_by(int ev) const { return terminal_event == ev; }
};

namespace detail {

inline bool crosses(double ga, double gb, int direction) {
  if (ga == 0.0) return false;
  if (direction >= 0 && ga < 0.0 && gb >= 0.0) return true;
  if (direction <= 0 && ga > 0.0 && gb <= 0.0) return true;
  return false;
}

}  // namespace detail

// Integrates x' = rhs(t, x) from t0 to t1 (either direction). Events are
// tested after each accepted step and located to ~1e-14 relative in t.
// Backward runs are done forward in s = -t; odeint's step cap drops the sign
// of negative steps.
template <std::size_t N, class Rhs>
Result<N> integrate(Rhs&& rhs, const Vec<N>& x0, double t0, double t1,
                    const std::vector<Event<N>>& events, const Options& opt = {}) {
  namespace odeint = boost::numeric::odeint;
  using State = Vec<N>;
  using Stepper = odeint::runge_kutta_dopri5<State>;

  Result<N> res;
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double s1 = std::abs(t1 - t0);
  auto time = [&](double s) { return t0 + dir * s; };
  auto dense = odeint::make_dense_output(opt.atol, opt.rtol, opt.max_step, Stepper());
  auto sys = [&](const State& x, State& dx, double s) {
    dx = rhs(time(s), x);
    if (dir < 0.0)
      for (auto& v : dx) v = -v;
  };

  dense.initialize(x0, 0.0, std::min(opt.first_step, s1 > 0.0 ? s1 : opt.first_step));
  if (opt.record) {
    res.t.push_back(t0);
    res.x.push_back(x0);
  }
  std::vector<double> gprev(events.size());
  std::vector<int> count(events.size(), 0);
  for (std::size_t e = 0; e < events.size(); ++e) gprev[e] = events[e].g(t0, x0);

  std::size_t steps = 0;
  double s = 0.0;
  State x = x0;
  while (s < s1) {
    if (++steps > opt.max_steps) break;
    auto [sa, sb] = dense.do_step(sys);
    double send = sb;
    State xe;
    if (sb >= s1) {
      send = s1;
      dense.calc_state(s1, xe);
    } else {
      xe = dense.current_state();
    }
    bool finite = true;
    for (double v : xe) finite = finite && std::isfinite(v);
    if (!finite) break;

    // Earliest event crossing inside (s, send].
    int first = -1;
    double s_first = send;
    std::vector<std::pair<int, double>> located;
    for (std::size_t e = 0; e < events.size(); ++e) {
      double gb = events[e].g(time(send), xe);
      const int d = dir > 0.0 ? events[e].direction : -events[e].direction;
      if (detail::crosses(gprev[e], gb, d)) {
        double root = send;
        if (gb != 0.0) {
          auto ge = [&](double q) {
            State xs;
            dense.calc_state(q, xs);
            return events[e].g(time(q), xs);
          };
          boost::uintmax_t it = 100;
          auto tol = [](double a, double b) {
            return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a));
          };
          auto r = boost::math::tools::toms748_solve(ge, s, send, gprev[e], gb, tol, it);
          root = 0.5 * (r.first + r.second);
        }
        located.emplace_back(static_cast<int>(e), root);
        if (events[e].terminal && ++count[e] >= events[e].occurrence &&
            (first < 0 || root < s_first)) {
          first = static_cast<int>(e);
          s_first = root;
        }
      }
      gprev[e] = gb;
    }
    std::sort(located.begin(), located.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    for (auto [e, se] : located) {
      if (first >= 0 && se > s_first) break;
      State xs;
      dense.calc_state(se, xs);
      res.hits.push_back({e, time(se), xs});
    }
    if (first >= 0) {
      State xf;
      dense.calc_state(s_first, xf);
      res.terminal_event = first;
      res.t_end = time(s_first);
      res.x_end = xf;
      if (opt.record) {
        res.t.push_back(res.t_end);
        res.x.push_back(xf);
      }
      return res;
    }
    s = send;
    x = xe;
    if (opt.record) {
      res.t.push_back(time(s));
      res.x.push_back(x);
    }
  }
  res.t_end = time(s);
  res.x_end = x;
  res.reached_end = s >= s1;
  return res;
}

}  // namespace rnd::ode
