#pragma once

#include <optional>

#include "gitkit/lie_group.hpp"
#include "gitkit/toral.hpp"

namespace gitkit {

/// Point [v] of P(C^n) as a unit vector with the first nonzero coordinate
/// made real positive, carrying the symplectic scale hbar.
struct ProjectivePoint {
  CVec v;
  double hbar = 1.0;

  static ProjectivePoint make(CVec v, double hbar = 1.0);
};

/// Fubini-Study distance (angle between lines).
double projective_distance(const ProjectivePoint& x, const ProjectivePoint& y);

/// Tangent vector at x as the orthogonal representative in C^n.
/// The metric is g_x(a,b) = 2 hbar Re<a,b>, J is multiplication by i.
struct TangentVector {
  ProjectivePoint base;
  CVec rep;

  double norm() const { return std::sqrt(2.0 * base.hbar) * rep.norm(); }
};

struct WeightReport {
  double weight = 0.0;
  double lambda_max = 0.0;
  std::vector<bool> support;  // per merged eigenspace of i*zeta
  ProjectivePoint x_plus;
  std::optional<long> quantized;  // weight / (2 pi hbar) when zeta in Lambda^c
  bool support_ambiguous = false;
};

enum class WeightMode { exact, simulated };

AlgebraVector moment_map(const ProjectivePoint& x, const CompactGroup& group);

/// |mu(x)| in the algebra norm.
double moment_norm(const ProjectivePoint& x, const CompactGroup& group);

TangentVector infinitesimal_action(const ProjectivePoint& x, const Mat& zeta_mat);

/// grad of f = |mu|^2/2 at x; rep = i P_v(mu(x) v).
TangentVector grad_f(const ProjectivePoint& x, const CompactGroup& group);

double kempf_ness_value(const ProjectivePoint& x, const Mat& g);

WeightReport mu_weight(const ProjectivePoint& x, const ComplexAlgebraVector& zeta,
                       WeightMode mode = WeightMode::exact, double horizon = 0.0,
                       double tol_support = 1e-9);

/// Value of the quadratic form |L* L eta|^2 - |[mu(x),eta]|^2 at a critical
/// point of |mu|^2/2.
double hessian_at_critical(const ProjectivePoint& x, const CompactGroup& group, const AlgebraVector& eta);

struct IsotropyRank {
  int ker_real = 0;     // dim ker L_x
  int ker_complex = 0;  // dim ker L_x^c
  double sigma_min = 0.0;
};

IsotropyRank isotropy_rank(const ProjectivePoint& x, const CompactGroup& group);

}  // namespace gitkit
