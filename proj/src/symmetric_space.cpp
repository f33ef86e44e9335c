#include "gitkit/symmetric_space.hpp"

#include <cmath>
#include <random>

#include "gitkit/torus_geometry.hpp"

namespace gitkit {

namespace {

Mat chart_exp(const AlgebraVector& eta) { return exp_scaled_skew(eta.mat, Cplx(0, 1)); }

/// log_p(q) in the trivialized tangent space: the eta of the unit-time
/// geodesic from p to q.
AlgebraVector log_map(const CompactGroup& group, const CosetPoint& p, const CosetPoint& q) {
  Mat h = chart_exp(p.eta).partialPivLu().solve(chart_exp(q.eta));
  return polar_decompose(group, h).eta;
}

CosetPoint retract(const CompactGroup& group, const CosetPoint& p, const AlgebraVector& v,
                   double t) {
  Mat m = chart_exp(p.eta) * exp_scaled_skew(v.mat, Cplx(0, t));
  return {polar_decompose(group, m).eta};
}

}  // namespace

CosetPoint canonical_point(const CompactGroup& group, const GroupPoint& g) {
  (void)group;
  return {g.eta};
}

double coset_distance(const CompactGroup& group, const CosetPoint& p, const CosetPoint& q) {
  return log_map(group, p, q).norm();
}

CosetPoint geodesic_point(const CompactGroup& group, const CosetPoint& p, const CosetPoint& q,
                          double s) {
  return retract(group, p, log_map(group, p, q), s);
}

CosetTangent covariant_derivative(const CompactGroup& group, const std::vector<Mat>& g_path,
                                  const std::vector<AlgebraVector>& eta_path, double h,
                                  int t_index) {
  const int k = static_cast<int>(g_path.size());
  if (k < 3 || static_cast<int>(eta_path.size()) != k || t_index < 1 || t_index > k - 2)
    throw Error(ErrorCode::InsufficientSamples, "central difference needs interior index of >= 3 samples");
  if (h <= 0.0) throw Error(ErrorCode::ValidationError, "step must be positive");

  Mat eta_dot = (eta_path[t_index + 1].mat - eta_path[t_index - 1].mat) / (2.0 * h);
  Mat a = g_path[t_index].partialPivLu().solve((g_path[t_index + 1] - g_path[t_index - 1]) / (2.0 * h));
  Mat re = 0.5 * (a - a.adjoint());  // g-component of g^{-1} g'
  Mat total = eta_dot + bracket(re, eta_path[t_index].mat);

  CosetTangent out;
  out.base = canonical_point(group, polar_decompose(group, g_path[t_index]));
  out.eta_dot = group.project(total).first;
  return out;
}

CurvatureResult curvature_operator(const CompactGroup& group, const AlgebraVector& eta1,
                                   const AlgebraVector& eta2, const AlgebraVector& eta3) {
  Mat b12 = bracket(eta1.mat, eta2.mat);
  CurvatureResult out;
  out.op = group.project(bracket(b12, eta3.mat)).first;
  double n1 = trace_inner(eta1.mat, eta1.mat);
  double n2 = trace_inner(eta2.mat, eta2.mat);
  double ip = trace_inner(eta1.mat, eta2.mat);
  double denom = n1 * n2 - ip * ip;
  if (denom < 1e-12) throw Error(ErrorCode::DegeneratePlane, "eta1, eta2 span no 2-plane");
  out.sectional = -trace_inner(b12, b12) / denom;
  return out;
}

Circumcenter circumcenter(const CompactGroup& group, const std::vector<CosetPoint>& points,
                          unsigned long long seed) {
  if (points.empty()) throw Error(ErrorCode::ValidationError, "circumcenter of an empty set");
  const int d = group.dim();

  auto max_dist = [&](const CosetPoint& c) {
    double f = 0.0;
    for (const CosetPoint& p : points) f = std::max(f, coset_distance(group, c, p));
    return f;
  };

  Circumcenter out;
  if (points.size() == 1) {
    out.center = points[0];
    out.radius = 0.0;
    out.certified = true;
    return out;
  }

  // chart-average start
  RVec mean = RVec::Zero(d);
  for (const CosetPoint& p : points) mean += p.eta.coords;
  mean /= double(points.size());
  CosetPoint c{group.from_coords(mean)};
  if (points.size() == 2) c = geodesic_point(group, points[0], points[1], 0.5);

  double f = max_dist(c);
  // minimax steepest descent: direction from the min-norm point of the
  // delta-active gradient set, with the active band shrinking on stall
  double delta = 0.25 * std::max(f, 1e-8);
  for (int iter = 0; iter < 20000 && f > 1e-14 && delta > 1e-13; ++iter) {
    std::vector<RVec> logs(points.size());
    std::vector<double> dist(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
      logs[i] = log_map(group, c, points[i]).coords;
      dist[i] = logs[i].norm();
    }
    std::vector<RVec> grads;
    for (size_t i = 0; i < points.size(); ++i)
      if (dist[i] >= f - delta && dist[i] > 1e-14) grads.push_back(RVec(-logs[i] / dist[i]));
    if (grads.empty()) break;
    auto [gstar, gnorm] = nearest_point(grads);
    if (gnorm <= std::max(1e-11, 1e-3 * delta)) {
      delta *= 0.25;
      continue;
    }
    AlgebraVector dir = group.from_coords(RVec(-gstar / gnorm));
    double t = delta;
    bool moved = false;
    while (t > 1e-15) {
      CosetPoint cand = retract(group, c, dir, t);
      double fc = max_dist(cand);
      if (fc <= f - 0.25 * t * gnorm) {
        c = cand;
        f = fc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) delta *= 0.25;
  }

  out.center = c;
  out.radius = f;

  // certificate: short moves along random directions must not beat the max
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  out.certified = true;
  for (int trial = 0; trial < 32; ++trial) {
    RVec v(d);
    for (int a = 0; a < d; ++a) v(a) = gauss(rng);
    if (v.norm() < 1e-14) continue;
    v.normalize();
    CosetPoint cand = retract(group, c, group.from_coords(v), 1e-4);
    if (max_dist(cand) < f - 1e-8) out.certified = false;
  }
  return out;
}

CartanFixedPoint cartan_fixed_point(const CompactGroup& group,
                                    const std::vector<GroupPoint>& generators,
                                    int max_elements) {
  // enumerate the finite group generated by closure under products
  std::vector<Mat> elems;
  elems.push_back(Mat::Identity(group.n, group.n));
  auto known = [&](const Mat& m) {
    for (const Mat& e : elems)
      if ((e - m).norm() <= 1e-8) return true;
    return false;
  };
  for (size_t head = 0; head < elems.size(); ++head) {
    for (const GroupPoint& g : generators) {
      Mat prod = elems[head] * g.mat;
      if (!known(prod)) {
        if (static_cast<int>(elems.size()) >= max_elements)
          throw Error(ErrorCode::NotClosed, "generated group exceeds the enumeration bound");
        elems.push_back(prod);
      }
    }
  }

  std::vector<CosetPoint> orbit;
  for (const Mat& k : elems) orbit.push_back(canonical_point(group, polar_decompose(group, k)));

  CartanFixedPoint out;
  out.elements = elems;
  out.p = circumcenter(group, orbit).center;

  Mat e = chart_exp(out.p.eta);
  Eigen::PartialPivLU<Mat> elu(e);
  for (const Mat& k : elems) {
    CosetPoint kp = canonical_point(group, polar_decompose(group, k * e));
    out.max_displacement = std::max(out.max_displacement, coset_distance(group, kp, out.p));
    Mat conj = elu.solve(k * e);
    out.conjugation_residual =
        std::max(out.conjugation_residual,
                 (conj * conj.adjoint() - Mat::Identity(group.n, group.n)).norm());
  }
  return out;
}

}  // namespace gitkit
