#pragma once

#include <optional>

#include "gitkit/lie_group.hpp"

namespace gitkit {

/// Point of M = G^c/G in the global chart eta -> pi(exp(i eta)).
struct CosetPoint {
  AlgebraVector eta;
};

/// Tangent vector at base, trivialized so its norm is |eta_dot|.
struct CosetTangent {
  CosetPoint base;
  AlgebraVector eta_dot;
};

CosetPoint canonical_point(const CompactGroup& group, const GroupPoint& g);

/// d(p,q) = |eta| with exp(i eta) the polar part of exp(-i p.eta) exp(i q.eta).
double coset_distance(const CompactGroup& group, const CosetPoint& p, const CosetPoint& q);

/// Point at parameter s on the unit-interval geodesic from p to q.
CosetPoint geodesic_point(const CompactGroup& group, const CosetPoint& p, const CosetPoint& q,
                          double s);

/// Covariant derivative of the field eta_path along the curve g_path at
/// sample t_index, by central differences on a uniform grid of step h.
CosetTangent covariant_derivative(const CompactGroup& group, const std::vector<Mat>& g_path,
                                  const std::vector<AlgebraVector>& eta_path, double h,
                                  int t_index);

struct CurvatureResult {
  AlgebraVector op;  // [[eta1, eta2], eta3]
  double sectional;  // K(eta1, eta2), always <= 0
};

CurvatureResult curvature_operator(const CompactGroup& group, const AlgebraVector& eta1,
                                   const AlgebraVector& eta2, const AlgebraVector& eta3);

struct Circumcenter {
  CosetPoint center;
  double radius = 0.0;
  bool certified = false;
};

Circumcenter circumcenter(const CompactGroup& group, const std::vector<CosetPoint>& points,
                          unsigned long long seed = 1);

struct CartanFixedPoint {
  CosetPoint p;
  std::vector<Mat> elements;      // the enumerated finite group
  double max_displacement = 0.0;  // max over K of d(k.p, p)
  double conjugation_residual = 0.0;  // max unitarity defect of exp(-i eta) k exp(i eta)
};

CartanFixedPoint cartan_fixed_point(const CompactGroup& group,
                                    const std::vector<GroupPoint>& generators,
                                    int max_elements = 1000);

}  // namespace gitkit
