#include "rnd/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "rnd/errors.hpp"

namespace rnd::io {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_header(std::ostream& os, const ModelParams& p, const Meta& extra) {
  nlohmann::json j = p;
  os << "# params: " << j.dump() << '\n';
  for (const auto& [k, v] : extra) os << "# " << k << ": " << v << '\n';
}

void write_profile_csv(std::ostream& os, const WaveProfile& w) {
  write_header(os, w.params,
               {{"c", fmt(w.wavespeed)},
                {"eps", fmt(w.eps)},
                {"residual", fmt(w.residual_norm)},
                {"experimental", w.experimental ? "true" : "false"}});
  os << "z,u,uhat,v,w\n";
  for (std::size_t i = 0; i < w.z.size(); ++i) {
    os << fmt(w.z[i]);
    for (double v : w.y[i]) os << ',' << fmt(v);
    os << '\n';
  }
}

void write_layer_branch_csv(std::ostream& os, const std::vector<BranchPoint>& pts,
                            const ModelParams& p, Direction dir) {
  write_header(os, p, {{"direction", to_string(dir)}});
  os << "delta,w,kind,u_l,u_r\n";
  for (const auto& b : pts) {
    if (!b.error.empty()) {
      os << "# delta " << fmt(b.delta) << " failed: " << b.error << '\n';
      continue;
    }
    os << fmt(b.delta) << ',' << fmt(b.w) << ',' << to_string(b.kind) << ',' << fmt(b.u_l) << ','
       << fmt(b.u_r) << '\n';
  }
}

void write_continuation_csv(std::ostream& os, const ContinuationResult& r, const std::string& vary,
                            const ModelParams& p) {
  write_header(os, p,
               {{"vary", vary}, {"completed", r.completed ? "true" : "false"}, {"message", r.message}});
  os << "param,c,kind,residual\n";
  for (const auto& pt : r.points)
    os << fmt(pt.value) << ',' << fmt(pt.free) << ",MonotoneInvasion," << fmt(pt.residual) << '\n';
}

nlohmann::json to_json(const SlowArc& arc) {
  nlohmann::json j;
  j["anchor"] = to_string(arc.anchor);
  j["orientation_flag"] = arc.orientation_flag;
  auto& s = j["samples"] = nlohmann::json::array();
  for (const auto& x : arc.samples) s.push_back({x.zeta, x.u, x.v});
  return j;
}

nlohmann::json to_json(const ShockRule& s) {
  return {{"kind", to_string(s.kind)}, {"w", s.w}, {"u_l", s.u_l}, {"u_r", s.u_r}, {"delta", s.delta}};
}

nlohmann::json to_json(const SingularHeteroclinic& h) {
  nlohmann::json j;
  j["kind"] = to_string(h.kind);
  j["wavespeed"] = h.wavespeed;
  j["a"] = h.a;
  j["residual"] = h.residual;
  j["shock"] = to_json(h.shock);
  j["left_arc"] = to_json(h.left_arc);
  j["right_arc"] = to_json(h.right_arc);
  if (!h.middle_arc.samples.empty()) j["middle_arc"] = to_json(h.middle_arc);
  return j;
}

nlohmann::json to_json(const MelnikovResult& m) {
  nlohmann::json j;
  j["base_orbit"] = m.base_orbit_id;
  j["partials"] = m.partials;
  j["slope_b"] = m.slope_b;
  if (m.v1_minus != 0.0 || m.v1_plus != 0.0) {
    j["v1_minus"] = m.v1_minus;
    j["v1_plus"] = m.v1_plus;
  }
  auto& ad = j["adjoint_angle_drift"] = nlohmann::json::array();
  for (const auto& a : m.adjoints) ad.push_back(a.angle_drift);
  return j;
}

nlohmann::json to_json(const LayerOrbit& o) {
  nlohmann::json j;
  j["w"] = o.w;
  j["delta"] = o.delta;
  j["u_left"] = o.u_left;
  j["u_right"] = o.u_right;
  j["direction"] = to_string(o.direction);
  j["terminal"] = o.terminal == Terminal::SaddleToSaddle ? "SaddleToSaddle" : "SaddleToFold";
  auto& s = j["samples"] = nlohmann::json::array();
  for (const auto& x : o.samples) s.push_back({x.y, x.u, x.uhat});
  return j;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void write_file(const std::string& dir, const std::string& name,
                const std::function<void(std::ostream&)>& body) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  body(out);
}

}  // namespace rnd::io
