// Command-line front end. Exit status: 0 success, 1 configuration error,
// 2 numerical failure (or any acceptance criterion failing for `accept`).

#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rnd/acceptance.hpp"
#include "rnd/errors.hpp"
#include "rnd/exec.hpp"
#include "rnd/figures.hpp"
#include "rnd/fullwave.hpp"
#include "rnd/io.hpp"
#include "rnd/layer.hpp"
#include "rnd/melnikov.hpp"
#include "rnd/reduced.hpp"
#include "rnd/spectral.hpp"

using namespace rnd;
using nlohmann::json;
using io::fmt;

namespace {

const char* const kModelKeys[] = {"beta", "gamma1", "gamma2", "alpha", "kappa", "a", "c", "eps"};

struct Global {
  std::string config;
  std::string out = "out";
  int threads = 0;
  std::string preset = "set-a";
};

// Command options: CLI flags land here first, config values fill the rest.
class Opts {
 public:
  explicit Opts(json j) : j_(std::move(j)) {}

  double num(const std::string& key, double def) const {
    if (!j_.contains(key)) return def;
    if (!j_[key].is_number()) throw ConfigError("option '" + key + "' must be a number");
    return j_[key].get<double>();
  }
  std::string str(const std::string& key, const std::string& def) const {
    if (!j_.contains(key)) return def;
    if (!j_[key].is_string()) throw ConfigError("option '" + key + "' must be a string");
    return j_[key].get<std::string>();
  }
  std::vector<double> list(const std::string& key, std::vector<double> def) const {
    if (!j_.contains(key)) return def;
    if (!j_[key].is_array()) throw ConfigError("option '" + key + "' must be an array");
    return j_[key].get<std::vector<double>>();
  }
  double positive(const std::string& key, double def) const {
    const double v = num(key, def);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("option '" + key + "' must be positive (got " + fmt(v) + ")");
    return v;
  }
  int count(const std::string& key, int def, int min = 2) const {
    const double v = num(key, def);
    if (v < min || v != std::floor(v) || v > 1e6)
      throw ConfigError("option '" + key + "' must be an integer >= " + std::to_string(min));
    return static_cast<int>(v);
  }

 private:
  json j_;
};

void require_sorted(double lo, double hi, const std::string& what) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw ConfigError(what + ": grid bounds must be finite with lo < hi (got " + fmt(lo) + ", " + fmt(hi) + ")");
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
  return x;
}

ModelParams preset(const std::string& name) {
  if (name == "set-a") return presets::set_a();
  if (name == "symmetric") return presets::symmetric();
  if (name == "nonmonotone") return presets::nonmonotone();
  if (name == "canard") return presets::canard();
  throw ConfigError("unknown preset '" + name + "' (set-a, symmetric, nonmonotone, canard)");
}

Direction direction(const std::string& s) {
  if (s == "minus" || s == "GammaMinus") return Direction::GammaMinus;
  if (s == "plus" || s == "GammaPlus") return Direction::GammaPlus;
  throw ConfigError("direction must be 'minus' or 'plus'");
}

ReducedOptions reduced_opts(const Opts& o, const ModelParams& p) {
  ReducedOptions r;
  // The symmetric set has its standing wave at c = 0, outside the default bracket.
  if (p.gamma1 + p.gamma2 == 1.0 && p.alpha == 0.5) {
    r.c_lo = -0.1;
    r.c_hi = 0.1;
    r.c_grid = 9;
  }
  r.c_lo = o.num("c_lo", r.c_lo);
  r.c_hi = o.num("c_hi", r.c_hi);
  require_sorted(r.c_lo, r.c_hi, "wavespeed bracket");
  r.c_grid = o.count("c_grid", r.c_grid);
  r.max_step = 0.02;
  return r;
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
  io::write_file(dir, name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

int run(const std::string& cmd, const Global& g, const ModelParams& p, const Opts& o,
        const std::vector<std::string>& positional) {
  const std::string& out = g.out;
  json doc{{"params", p}};
  if (cmd == "equal-area") {
    const ShockRule r = equal_area_height(p);
    doc["shock"] = io::to_json(r);
    doc["w_by_quadrature"] = equal_area_height_by_quadrature(p);
    write_json(out, "equal_area.json", doc);
    std::cout << "w_h = " << fmt(r.w) << "  u_l = " << fmt(r.u_l) << "  u_r = " << fmt(r.u_r) << '\n';
  } else if (cmd == "layer-bif") {
    const double lo = o.num("delta_min", 0.0), hi = o.num("delta_max", 0.3);
    require_sorted(lo, hi, "delta grid");
    const Direction d = direction(o.str("direction", "minus"));
    const auto pts = layer_bifurcation_branch(linspace(lo, hi, o.count("n", 61)), p, d);
    io::write_file(out, "layer_branch.csv", [&](std::ostream& os) { io::write_layer_branch_csv(os, pts, p, d); });
    const double dm = delta_m(p, d);
    std::cout << "delta_m = " << fmt(dm) << "  points = " << pts.size() << '\n';
  } else if (cmd == "singular-het") {
    const ReducedOptions r = reduced_opts(o, p);
    const int crossing = o.count("crossing", 1, 1);
    const SingularHeteroclinic h = crossing == 2 ? nonmonotone_het_solve(p, r) : singular_het_solve(p, r);
    write_json(out, "singular_het.json", io::to_json(h));
    std::cout << "c = " << fmt(h.wavespeed) << "  kind = " << to_string(h.kind) << "  rule = " << to_string(h.shock.kind)
              << "  residual = " << fmt(h.residual) << '\n';
  } else if (cmd == "continue") {
    const std::string vary = o.str("vary", "alpha"), free = o.str("free", "c");
    const double target = o.num("target", NAN);
    if (std::isnan(target)) throw ConfigError("continue needs a target (--set target=...)");
    ContinuationOptions co;
    co.h0 = o.positive("h0", co.h0);
    co.h_min = o.positive("h_min", co.h_min);
    ModelParams p0 = p;
    const ReducedOptions r = reduced_opts(o, p);
    p0.c = singular_het_solve(p0, r).wavespeed;
    const ContinuationResult cr = continue_branch(vary, target, p0, free, co, r);
    io::write_file(out, "continuation.csv", [&](std::ostream& os) { io::write_continuation_csv(os, cr, vary, p0); });
    if (cr.points.empty()) throw StepFailure(cr.message);
    std::cout << vary << " = " << fmt(cr.points.back().value) << "  " << free << " = " << fmt(cr.points.back().free)
              << "  completed = " << (cr.completed ? "yes" : "no") << '\n';
    if (!cr.completed) throw StepFailure(cr.message);
  } else if (cmd == "tangency") {
    ModelParams guess = p;
    guess.c = o.num("c0", 0.08);
    guess.alpha = o.num("alpha0", 0.12);
    const auto [c, alpha] = detect_tangency(guess);
    doc["c"] = c;
    doc["alpha"] = alpha;
    write_json(out, "tangency.json", doc);
    std::cout << "tangency c = " << fmt(c) << "  alpha = " << fmt(alpha) << '\n';
  } else if (cmd == "fs-to-s") {
    const double lo = o.num("alpha_min", 0.10), hi = o.num("alpha_max", 0.145);
    require_sorted(lo, hi, "alpha grid");
    const double clo = o.num("c_lo", 0.03), chi = o.num("c_hi", 0.15);
    require_sorted(clo, chi, "wavespeed bracket");
    const auto pts = fs_to_s_branch(p, linspace(lo, hi, o.count("n", 46)), clo, chi);
    io::write_file(out, "fs_to_s.csv", [&](std::ostream& os) {
      io::write_header(os, p);
      os << "param,c,alpha,kind,residual\n";
      for (const auto& f : pts) {
        ModelParams q = p;
        q.alpha = f.alpha;
        if (f.error.empty())
          os << fmt(f.alpha) << ',' << fmt(f.c) << ',' << fmt(f.alpha) << ",FsToS,"
             << fmt(std::abs(fs_to_s_mismatch(f.c, q))) << '\n';
        else os << "# alpha " << fmt(f.alpha) << " failed: " << f.error << '\n';
      }
    });
    const Codim3Point c3 = codim3_point(p, o.num("c0", 0.07), o.num("alpha0", 0.14));
    doc["codim3"] = {{"a", c3.a}, {"c", c3.c}, {"alpha", c3.alpha}};
    write_json(out, "codim3.json", doc);
    std::cout << "codim-3 a = " << fmt(c3.a) << "  c = " << fmt(c3.c) << "  alpha = " << fmt(c3.alpha) << '\n';
  } else if (cmd == "canard") {
    const CanardCrossing cc = canard_crossing(p);
    const double thr = canard_threshold(p, o.positive("a_lo", 0.01), o.positive("a_hi", 1.0));
    doc["crossing"] = {{"found", cc.found}, {"u", cc.u}, {"v", cc.v}, {"u_source", cc.u_source}};
    doc["a_threshold"] = thr;
    if (cc.found) doc["wave"] = io::to_json(canard_wave_solve(p, reduced_opts(o, p)));
    write_json(out, "canard.json", doc);
    std::cout << "canard crossing " << (cc.found ? "found" : "absent") << " at a = " << fmt(p.a)
              << "  threshold a = " << fmt(thr) << '\n';
    if (!cc.found) throw NoTransverseCrossing("no crossing at a = " + fmt(p.a));
  } else if (cmd == "full-het") {
    const double eps = o.positive("eps", p.eps > 0.0 ? p.eps : 1e-4);
    BvpOptions bo;
    bo.tol = o.positive("tol", bo.tol);
    const WaveProfile w = het_bvp_solve(singular_het_solve(p, reduced_opts(o, p)), eps, p, bo);
    io::write_file(out, "profile.csv", [&](std::ostream& os) { io::write_profile_csv(os, w); });
    std::cout << "c = " << fmt(w.wavespeed) << "  residual = " << fmt(w.residual_norm) << "  nodes = " << w.z.size()
              << '\n';
  } else if (cmd == "spectrum") {
    const double eps = o.positive("eps", p.eps > 0.0 ? p.eps : 1e-4);
    const double lo = o.num("re_lo", -0.95), hi = o.num("re_hi", 0.5);
    require_sorted(lo, hi, "real scan interval");
    const auto radii = o.list("radii", {1e3, 1e4, 1e5});
    for (double r : radii)
      if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("radii must be positive");
    ScanOptions so;
    so.step = o.positive("step", so.step);
    const WaveProfile w = het_bvp_solve(singular_het_solve(p, reduced_opts(o, p)), eps, p);
    const SpectrumReport rep = point_spectrum_scan(w, w.params, lo, hi, radii, so);
    io::write_file(out, "spectrum.txt", [&](std::ostream& os) {
      os << "# params: " << json(w.params).dump() << '\n' << rep.text;
    });
    std::cout << rep.text;
  } else if (cmd == "melnikov") {
    const std::string kind = o.str("kind", "layer");
    MelnikovResult m;
    if (kind == "layer") m = layer_melnikov(p);
    else if (kind == "piecewise") m = piecewise_melnikov(p);
    else throw ConfigError("melnikov kind must be 'layer' or 'piecewise'");
    doc["melnikov"] = io::to_json(m);
    write_json(out, "melnikov_" + kind + ".json", doc);
    std::cout << "b = " << fmt(m.slope_b) << '\n';
  } else if (cmd == "accept") {
    AcceptanceOptions ao;
    for (double v : o.list("only", {})) ao.only.push_back(static_cast<int>(v));
    ao.a_count = o.count("a_count", ao.a_count);
    const auto res = run_acceptance(std::cout, ao);
    int failed = 0;
    for (const auto& r : res) failed += r.pass ? 0 : 1;
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
    return failed ? 2 : 0;
  } else if (cmd == "figure") {
    std::vector<std::string> ids = positional;
    if (ids.empty()) throw ConfigError("figure needs an id (" + std::to_string(figure_ids().size()) + " known) or 'all'");
    if (ids.size() == 1 && ids[0] == "all") ids = figure_ids();
    for (const auto& id : ids)
      for (const auto& f : figure_repro(id, out)) std::cout << id << ": " << out << "/" << f << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shock-fronted travelling waves: construction and spectral stability"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config, "JSON config with 'model' and 'options' objects");
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (0: runtime default)");
  app.add_option("--preset", g.preset, "base parameters: set-a, symmetric, nonmonotone, canard")->capture_default_str();
  std::map<std::string, std::optional<double>> model_flags;
  for (const char* k : kModelKeys) app.add_option("--" + std::string(k), model_flags[k], std::string("model ") + k);

  // Command options given on the command line, as raw key=value strings.
  std::vector<std::string> sets;
  std::vector<std::string> positional;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"layer-bif", "delta-w branch of the layer problem"},
      {"equal-area", "equal-area shock height"},
      {"singular-het", "singular heteroclinic (c free)"},
      {"continue", "natural-parameter continuation"},
      {"tangency", "tangency point in (c, alpha)"},
      {"fs-to-s", "folded saddle-to-saddle curve and codimension-three point"},
      {"canard", "canard crossing and threshold in a"},
      {"full-het", "eps > 0 heteroclinic by collocation"},
      {"spectrum", "real-axis Evans scan and contour windings"},
      {"melnikov", "Melnikov slopes (--set kind=layer|piecewise)"},
      {"accept", "run the acceptance criteria"},
      {"figure", "datasets for a figure id, or 'all'"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->add_option("--set", sets, "command option key=value (repeatable)");
    if (name == "figure") s->add_option("ids", positional, "figure ids");
    subs[name] = s;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string cmd;
  for (const auto& [name, s] : subs)
    if (s->parsed()) cmd = name;

  try {
    json cfg = json::object();
    if (!g.config.empty()) cfg = io::read_json_file(g.config);
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
      if (it.key() != "model" && it.key() != "options" && it.key() != "preset")
        throw ConfigError("unknown config key '" + it.key() + "' (model, options, preset)");

    if (cfg.contains("preset") && app.count("--preset") == 0) g.preset = cfg["preset"].get<std::string>();
    ModelParams p = preset(g.preset);
    if (cfg.contains("model")) from_json(cfg["model"], p);
    for (const auto& [k, v] : model_flags)
      if (v) p.set(k, *v);
    p.validate();

    json opts = cfg.contains("options") ? cfg["options"] : json::object();
    if (!opts.is_object()) throw ConfigError("'options' must be an object");
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      json parsed;
      try {
        parsed = json::parse(val);
      } catch (const json::exception&) {
        parsed = val;
      }
      opts[key] = parsed;
    }
    if (g.threads < 0) throw ConfigError("--threads must be >= 0");
    set_threads(g.threads);
    return run(cmd, g, p, Opts(opts), positional);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
}
