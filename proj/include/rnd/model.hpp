#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rnd {

// Dimensionless parameters of the regularised reaction-nonlinear-diffusion
// model. delta = a*c is always derived, never stored.
struct ModelParams {
  double beta = 6.0;
  double gamma1 = 7.0 / 12.0;
  double gamma2 = 0.75;
  double alpha = 0.2;
  double kappa = 5.0;
  double a = 0.0;
  double c = 0.0;
  double eps = 0.0;

  double delta() const { return a * c; }

  // Throws ConfigError naming the first violated invariant.
  void validate() const;

  // Named access used by continuation and the CLI ("beta", "gamma1", ...).
  double get(const std::string& name) const;
  void set(const std::string& name, double value);
};

void to_json(nlohmann::json& j, const ModelParams& p);
// Rejects unknown keys; missing keys keep their defaults.
void from_json(const nlohmann::json& j, ModelParams& p);

namespace presets {
// beta=6, gamma1=7/12, gamma2=3/4, kappa=5, alpha=1/5
ModelParams set_a();
// beta=6, gamma1=1/4, gamma2=3/4, kappa=5, alpha=1/2, c=0
ModelParams symmetric();
// beta=1, gamma1=0.4, gamma2=0.75, kappa=3, a=0.5; alpha is left at 0.12
ModelParams nonmonotone();
// beta=1, gamma1=2/5, gamma2=3/4, kappa=3, alpha=0.068984, c=0.2
ModelParams canard();
}  // namespace presets

double diffusivity(double u, const ModelParams& p);
double diffusivity_prime(double u, const ModelParams& p);
// Antiderivative of the diffusivity with potential(0) = 0.
double potential(double u, const ModelParams& p);
double reaction(double u, const ModelParams& p);
double reaction_prime(double u, const ModelParams& p);
double reaction_second(double u, const ModelParams& p);
// Partial derivative of the reaction term with respect to alpha.
double reaction_dalpha(double u, const ModelParams& p);

enum class BranchTag { SslLeft, FoldLeft, Middle, FoldRight, SsrRight };

struct ManifoldBranch {
  BranchTag tag;
  std::array<std::complex<double>, 2> layer_eigs;
};

enum class EquilibriumKind { Saddle, StableNode, StableFocus, UnstableNode, UnstableFocus, Centre };
enum class Equilibrium { PMinus, PPlus, PB };

struct EquilibriumInfo {
  double u;
  double v;
  EquilibriumKind kind;
  Equilibrium which;
};

enum class FoldedKind { FoldedSaddle, FoldedNode, FoldedFocus, FSNII };

struct FoldedSingularityInfo {
  double u;
  double v;
  FoldedKind kind;
};

// Absolute tolerance for "equals zero" in every classification below.
inline constexpr double kClassifyTol = 1e-12;

ManifoldBranch classify_branch(double u, const ModelParams& p);
std::vector<EquilibriumInfo> classify_equilibria(const ModelParams& p);
std::vector<FoldedSingularityInfo> classify_folded_singularities(const ModelParams& p);

std::string to_string(BranchTag t);
std::string to_string(EquilibriumKind k);
std::string to_string(FoldedKind k);

}  // namespace rnd
