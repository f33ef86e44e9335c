#pragma once

#include <limits>
#include <optional>

#include "gitkit/projective.hpp"

namespace gitkit {

struct FlowOptions {
  double tol_grad = 1e-10;
  double t_max = 1e4;
  double atol = 1e-10;
  double rtol = 1e-10;
  double fixed_step = 0.0;  // > 0 disables adaptive stepping (uniform samples)
  long max_steps = 5'000'000;
  int max_stored = 4096;
};

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<ProjectivePoint> points;
  std::vector<double> mu_norms;    // |mu(x(t))|
  std::vector<double> grad_norms;  // |L_x mu(x(t))|
  std::vector<AlgebraVector> xi_path;
  std::vector<Mat> g_path;
  bool converged = false;
  double max_conjugacy_drift = 0.0;
  // time past which the lift g(t) is frozen (its singular values would leave
  // the safely decomposable range); samples after it carry the frozen lift
  double t_lift_cap = std::numeric_limits<double>::infinity();

  struct RateFit {
    double epsilon = 0.0;
    double c = 0.0;
    double T = 0.0;
    double residual = 0.0;
    bool super_polynomial = false;
    bool degenerate = false;
  };
  std::optional<RateFit> rate;
};

/// Negative gradient flow of |mu|^2/2 together with its multiplicative lift
/// g' = g i mu(x), x(t) = g(t)^{-1} x0.
FlowTrajectory integrate_flow(const ProjectivePoint& x0, const CompactGroup& group,
                              const FlowOptions& opts = {});

struct FlowLimit {
  ProjectivePoint x_inf;
  double m = 0.0;
};

FlowLimit flow_limit(const FlowTrajectory& traj);

struct DominantWeight {
  AlgebraVector xi_inf;
  AlgebraVector xi_unit;
};

/// xi_infty = lim xi(t)/t by Richardson extrapolation over the trailing
/// third of the stored samples.
DominantWeight dominant_weight(const FlowTrajectory& traj, const CompactGroup& group,
                               double tol_class = 1e-6);

FlowTrajectory::RateFit lojasiewicz_fit(const FlowTrajectory& traj);

}  // namespace gitkit
