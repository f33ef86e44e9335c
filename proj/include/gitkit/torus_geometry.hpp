#pragma once

#include "gitkit/projective.hpp"

namespace gitkit {

/// Representation weights of a torus action: coordinate j of C^n carries
/// weight vector lambda_j in R^d, read off the diagonal of i*e_a.
struct WeightSystem {
  std::vector<RVec> lambdas;  // n vectors in R^d
  std::vector<bool> support;
};

WeightSystem extract_weights(const CompactGroup& group, const ProjectivePoint& x,
                             double tol_support = 1e-9);

enum class ZeroLocation { outside, boundary, relative_interior };

struct MomentPolytope {
  std::vector<RVec> vertices;
  ZeroLocation contains_zero = ZeroLocation::outside;
  RVec nearest;        // minimizer of |.| over the hull
  double m = 0.0;
  int affine_dim = 0;  // dimension of the affine hull of the supported weights
};

MomentPolytope moment_polytope(const WeightSystem& ws, double hbar);

/// Minimum-norm point of conv(points) by Frank-Wolfe with away steps;
/// duality gap below 1e-12.
std::pair<RVec, double> nearest_point(const std::vector<RVec>& points);

/// Brute-force min-norm point over all affine subsets (test oracle).
std::pair<RVec, double> nearest_point_exhaustive(const std::vector<RVec>& points);

enum class StabilityClass { unstable, semistable, polystable, stable, undetermined };

struct TorusVerdict {
  StabilityClass klass = StabilityClass::undetermined;
  double m = 0.0;
  RVec eta_star;                          // nearest point of the supported-weight hull
  std::optional<AlgebraVector> xi_unit;   // destabilizing certificate when unstable
  MomentPolytope polytope;
};

TorusVerdict torus_classify(const CompactGroup& group, const ProjectivePoint& x,
                            double tol_support = 1e-9);

}  // namespace gitkit
