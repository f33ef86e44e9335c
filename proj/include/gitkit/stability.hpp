#pragma once

#include <string>

#include "gitkit/flow.hpp"
#include "gitkit/torus_geometry.hpp"

namespace gitkit {

enum class AuditMode { serial, parallel };

struct StabilityOptions {
  double tol_class = 1e-6;
  double tol_grad = 1e-10;
  double t_max = 1e4;
};

struct StabilityVerdict {
  StabilityClass klass = StabilityClass::undetermined;
  double m_estimate = 0.0;
  std::optional<AlgebraVector> xi_unit;      // destabilizing certificate (unstable)
  std::optional<ProjectivePoint> x_zero;     // limit with |mu| <= tol (otherwise)
  double sigma_min_isotropy = 0.0;
  std::vector<std::string> diagnostics;
};

/// Flow-based Hilbert-Mumford classification.
StabilityVerdict classify(const ProjectivePoint& x0, const CompactGroup& group,
                          const StabilityOptions& opts = {});

struct MumfordValue {
  double m_mu = 0.0;
  std::optional<AlgebraVector> argmax;  // unit xi0 with w(x0, xi0) = -m_mu
  std::string method;                   // "torus-exact", "flow", or "sampled"
};

MumfordValue mumford_function(const ProjectivePoint& x0, const CompactGroup& group,
                              const StabilityOptions& opts = {},
                              unsigned long long seed = 1);

struct AuditReport {
  long samples = 0;
  long violations = 0;
  double worst_slack = 0.0;  // min over samples; >= -1e-8 on pass
};

/// Samples (xi, g) and checks -w(x0,xi)/|xi| <= |mu(g x0)|; for torus
/// presets additionally checks the restricted inequality at fixed points.
AuditReport moment_weight_audit(const ProjectivePoint& x0, const CompactGroup& group,
                                long n_samples, unsigned long long seed,
                                AuditMode mode = AuditMode::parallel);

/// Upper bound on min over u in G of d(u x, y), by multi-start ascent of
/// |<u v_x, v_y>| over the group.
double orbit_distance_G(const ProjectivePoint& x, const ProjectivePoint& y,
                        const CompactGroup& group, unsigned long long seed = 1,
                        int n_starts = 20);

struct NessReport {
  double max_orbit_distance = 0.0;  // pairwise over flow limits
  double max_mu_gap = 0.0;          // spread of |mu| over limits
  double worst_kirwan_slack = 0.0;  // min of |mu(g x_inf)| - |mu(x_inf)|
};

NessReport ness_uniqueness_audit(const ProjectivePoint& x0, const CompactGroup& group,
                                 const std::vector<GroupPoint>& hs,
                                 unsigned long long seed = 1, long kirwan_samples = 100,
                                 const StabilityOptions& opts = {});

/// Phi_{x0}(exp(-i r xi)) / r for each r (stable against overflow).
std::vector<double> kempf_ness_ray_profile(const ProjectivePoint& x0, const CompactGroup& group,
                                           const AlgebraVector& xi_unit,
                                           const std::vector<double>& r_list);

struct KempfReport {
  int starts = 0;
  double max_pairwise = 0.0;  // distance between pulled-back unit certificates
  AlgebraVector xi0;
};

KempfReport kempf_uniqueness_audit(const ProjectivePoint& x0, const CompactGroup& group,
                                   int n_starts, unsigned long long seed = 1,
                                   const StabilityOptions& opts = {});

}  // namespace gitkit
