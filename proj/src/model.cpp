#include "rnd/model.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rnd/errors.hpp"

namespace rnd {

namespace {

const char* const kKeys[] = {"beta", "gamma1", "gamma2", "alpha", "kappa", "a", "c", "eps"};

double* field(ModelParams& p, const std::string& name) {
  if (name == "beta") return &p.beta;
  if (name == "gamma1") return &p.gamma1;
  if (name == "gamma2") return &p.gamma2;
  if (name == "alpha") return &p.alpha;
  if (name == "kappa") return &p.kappa;
  if (name == "a") return &p.a;
  if (name == "c") return &p.c;
  if (name == "eps") return &p.eps;
  return nullptr;
}

EquilibriumKind classify_planar(double trace, double det) {
  if (det < -kClassifyTol) return EquilibriumKind::Saddle;
  if (std::abs(trace) <= kClassifyTol) return EquilibriumKind::Centre;
  double disc = trace * trace - 4.0 * det;
  bool stable = trace < 0.0;
  if (disc >= 0.0) return stable ? EquilibriumKind::StableNode : EquilibriumKind::UnstableNode;
  return stable ? EquilibriumKind::StableFocus : EquilibriumKind::UnstableFocus;
}

}  // namespace

void ModelParams::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid parameters: " + msg); };
  for (const char* k : kKeys) {
    if (!std::isfinite(get(k))) fail(std::string(k) + " must be finite");
  }
  if (!(gamma1 > 0.0)) fail("gamma1 > 0 violated");
  if (!(gamma1 < gamma2)) fail("gamma1 < gamma2 violated");
  if (!(gamma2 < 1.0)) fail("gamma2 < 1 violated");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("0 < alpha < 1 violated");
  if (!(kappa > 0.0)) fail("kappa > 0 violated");
  if (!(beta > 0.0)) fail("beta > 0 violated");
  if (!(a >= 0.0)) fail("a >= 0 violated");
  if (!(eps >= 0.0)) fail("eps >= 0 violated");
}

double ModelParams::get(const std::string& name) const {
  auto* self = const_cast<ModelParams*>(this);
  double* f = field(*self, name);
  if (!f) throw ConfigError("unknown parameter '" + name + "'");
  return *f;
}

void ModelParams::set(const std::string& name, double value) {
  double* f = field(*this, name);
  if (!f) throw ConfigError("unknown parameter '" + name + "'");
  *f = value;
}

void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json::object();
  for (const char* k : kKeys) j[k] = p.get(k);
}

void from_json(const nlohmann::json& j, ModelParams& p) {
  if (!j.is_object()) throw ConfigError("model parameters must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!field(p, it.key())) throw ConfigError("unknown model key '" + it.key() + "'");
    if (!it.value().is_number()) throw ConfigError("model key '" + it.key() + "' must be a number");
    p.set(it.key(), it.value().get<double>());
  }
}

namespace presets {

ModelParams set_a() {
  ModelParams p;
  p.beta = 6.0;
  p.gamma1 = 7.0 / 12.0;
  p.gamma2 = 0.75;
  p.kappa = 5.0;
  p.alpha = 0.2;
  return p;
}

ModelParams symmetric() {
  ModelParams p;
  p.beta = 6.0;
  p.gamma1 = 0.25;
  p.gamma2 = 0.75;
  p.kappa = 5.0;
  p.alpha = 0.5;
  return p;
}

ModelParams nonmonotone() {
  ModelParams p;
  p.beta = 1.0;
  p.gamma1 = 0.4;
  p.gamma2 = 0.75;
  p.kappa = 3.0;
  p.a = 0.5;
  p.alpha = 0.12;
  return p;
}

ModelParams canard() {
  ModelParams p;
  p.beta = 1.0;
  p.gamma1 = 0.4;
  p.gamma2 = 0.75;
  p.kappa = 3.0;
  p.alpha = 0.068984;
  p.c = 0.2;
  return p;
}

}  // namespace presets

double diffusivity(double u, const ModelParams& p) {
  return p.beta * (u - p.gamma1) * (u - p.gamma2);
}

double diffusivity_prime(double u, const ModelParams& p) {
  return p.beta * (2.0 * u - p.gamma1 - p.gamma2);
}

double potential(double u, const ModelParams& p) {
  return p.beta * u * (u * u / 3.0 - 0.5 * (p.gamma1 + p.gamma2) * u + p.gamma1 * p.gamma2);
}

double reaction(double u, const ModelParams& p) {
  return p.kappa * u * (u - p.alpha) * (1.0 - u);
}

double reaction_prime(double u, const ModelParams& p) {
  return p.kappa * (-3.0 * u * u + 2.0 * (1.0 + p.alpha) * u - p.alpha);
}

double reaction_second(double u, const ModelParams& p) {
  return p.kappa * (-6.0 * u + 2.0 * (1.0 + p.alpha));
}

double reaction_dalpha(double u, const ModelParams& p) {
  return p.kappa * u * (u - 1.0);
}

ManifoldBranch classify_branch(double u, const ModelParams& p) {
  ManifoldBranch b;
  if (std::abs(u - p.gamma1) <= kClassifyTol) b.tag = BranchTag::FoldLeft;
  else if (std::abs(u - p.gamma2) <= kClassifyTol) b.tag = BranchTag::FoldRight;
  else if (u < p.gamma1) b.tag = BranchTag::SslLeft;
  else if (u < p.gamma2) b.tag = BranchTag::Middle;
  else b.tag = BranchTag::SsrRight;
  // mu^2 + delta mu - D(u) = 0
  const std::complex<double> d = p.delta();
  const std::complex<double> disc = std::sqrt(d * d + 4.0 * diffusivity(u, p));
  b.layer_eigs = {0.5 * (-d + disc), 0.5 * (-d - disc)};
  return b;
}

std::vector<EquilibriumInfo> classify_equilibria(const ModelParams& p) {
  std::vector<EquilibriumInfo> out;
  const std::array<std::pair<double, Equilibrium>, 3> pts = {
      std::pair{1.0, Equilibrium::PMinus}, std::pair{0.0, Equilibrium::PPlus},
      std::pair{p.alpha, Equilibrium::PB}};
  for (auto [u, which] : pts) {
    // Jacobian of (-(v+cu), D f) at (u,-cu): [[-c,-1],[D f',0]]
    double det = diffusivity(u, p) * reaction_prime(u, p);
    out.push_back({u, -p.c * u, classify_planar(-p.c, det), which});
  }
  return out;
}

std::vector<FoldedSingularityInfo> classify_folded_singularities(const ModelParams& p) {
  std::vector<FoldedSingularityInfo> out;
  for (double uf : {p.gamma1, p.gamma2}) {
    double det = diffusivity_prime(uf, p) * reaction(uf, p);
    FoldedKind k;
    if (std::abs(det) <= kClassifyTol) k = FoldedKind::FSNII;
    else if (det < 0.0) k = FoldedKind::FoldedSaddle;
    else k = (p.c * p.c - 4.0 * det >= 0.0) ? FoldedKind::FoldedNode : FoldedKind::FoldedFocus;
    out.push_back({uf, -p.c * uf, k});
  }
  return out;
}

std::string to_string(BranchTag t) {
  switch (t) {
    case BranchTag::SslLeft: return "SslLeft";
    case BranchTag::FoldLeft: return "FoldLeft";
    case BranchTag::Middle: return "Middle";
    case BranchTag::FoldRight: return "FoldRight";
    case BranchTag::SsrRight: return "SsrRight";
  }
  return "?";
}

std::string to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::Saddle: return "Saddle";
    case EquilibriumKind::StableNode: return "StableNode";
    case EquilibriumKind::StableFocus: return "StableFocus";
    case EquilibriumKind::UnstableNode: return "UnstableNode";
    case EquilibriumKind::UnstableFocus: return "UnstableFocus";
    case EquilibriumKind::Centre: return "Centre";
  }
  return "?";
}

std::string to_string(FoldedKind k) {
  switch (k) {
    case FoldedKind::FoldedSaddle: return "FoldedSaddle";
    case FoldedKind::FoldedNode: return "FoldedNode";
    case FoldedKind::FoldedFocus: return "FoldedFocus";
    case FoldedKind::FSNII: return "FSNII";
  }
  return "?";
}

}  // namespace rnd
