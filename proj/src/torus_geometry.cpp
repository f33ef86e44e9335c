#include "gitkit/torus_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gitkit {

namespace {

std::vector<RVec> dedupe(const std::vector<RVec>& pts, double tol = 1e-12) {
  std::vector<RVec> out;
  for (const RVec& p : pts) {
    bool found = false;
    for (const RVec& q : out)
      if ((p - q).norm() <= tol) {
        found = true;
        break;
      }
    if (!found) out.push_back(p);
  }
  return out;
}

// Enumerates subsets of size r from [0,k) and classifies the origin against
// every supporting hyperplane of conv(pts) inside its own span.
ZeroLocation classify_origin(const std::vector<RVec>& pts, int r, double tol) {
  const int k = static_cast<int>(pts.size());
  if (r == 0) return ZeroLocation::relative_interior;  // hull is the single point 0

  double min_support = 1e300;
  std::vector<int> idx(r);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == r) {
      // hyperplane through pts[idx]: normal orthogonal to the differences
      Eigen::MatrixXd diffs(std::max(1, r - 1), pts[0].size());
      for (int j = 1; j < r; ++j) diffs.row(j - 1) = (pts[idx[j]] - pts[idx[0]]).transpose();
      if (r == 1) diffs.setZero();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeFullV);
      // nullspace within the r-dimensional span must be one-dimensional
      int null_dim = 0;
      for (int j = 0; j < svd.matrixV().cols(); ++j) {
        double s = (j < svd.singularValues().size()) ? svd.singularValues()(j) : 0.0;
        if (s <= tol) ++null_dim;
      }
      if (null_dim != 1 && r > 1) return;
      RVec u = svd.matrixV().col(svd.matrixV().cols() - 1);
      for (int sign = 0; sign < 2; ++sign) {
        RVec uu = (sign == 0) ? u : RVec(-u);
        double h = -1e300;
        for (const RVec& p : pts) h = std::max(h, uu.dot(p));
        min_support = std::min(min_support, h);
      }
      return;
    }
    for (int i = start; i + (r - depth) <= k; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);

  if (min_support < -tol) return ZeroLocation::outside;
  if (min_support > tol) return ZeroLocation::relative_interior;
  return ZeroLocation::boundary;
}

}  // namespace

WeightSystem extract_weights(const CompactGroup& group, const ProjectivePoint& x, double tol_support) {
  if (group.preset != Preset::torus)
    throw Error(ErrorCode::UnsupportedPreset, "weight extraction requires a torus preset");
  const int n = group.n;
  const int d = group.dim();
  WeightSystem ws;
  for (int j = 0; j < n; ++j) {
    RVec lam(d);
    for (int a = 0; a < d; ++a) lam(a) = (Cplx(0, 1) * group.basis[a](j, j)).real();
    ws.lambdas.push_back(lam);
    ws.support.push_back(std::abs(x.v(j)) > tol_support);
  }
  return ws;
}

std::pair<RVec, double> nearest_point(const std::vector<RVec>& points) {
  const int k = static_cast<int>(points.size());
  if (k == 0) throw Error(ErrorCode::EmptySupport, "nearest point of an empty hull");
  RVec t = RVec::Zero(k);
  t(0) = 1.0;
  RVec x = points[0];
  const int d = static_cast<int>(points[0].size());

  for (int iter = 0; iter < 200000; ++iter) {
    int s = 0, a = -1;
    double best = 1e300, worst = -1e300;
    for (int j = 0; j < k; ++j) {
      double dot = x.dot(points[j]);
      if (dot < best) {
        best = dot;
        s = j;
      }
      if (t(j) > 1e-16 && dot > worst) {
        worst = dot;
        a = j;
      }
    }
    double gap = x.squaredNorm() - best;
    if (gap <= 1e-12) break;

    bool fw = (best - x.squaredNorm()) <= (x.squaredNorm() - worst) || a < 0;
    if (fw) {
      RVec dir = points[s] - x;
      double denom = dir.squaredNorm();
      if (denom < 1e-300) break;
      double gamma = std::clamp(-x.dot(dir) / denom, 0.0, 1.0);
      t *= (1.0 - gamma);
      t(s) += gamma;
      x += gamma * dir;
    } else {
      RVec dir = x - points[a];
      double denom = dir.squaredNorm();
      if (denom < 1e-300) break;
      double gamma_max = t(a) / (1.0 - t(a) + 1e-300);
      double gamma = std::clamp(-x.dot(dir) / denom, 0.0, gamma_max);
      t *= (1.0 + gamma);
      t(a) -= gamma;
      x += gamma * dir;
    }
    (void)d;
  }

  // polish: solve the KKT system on the active face; the FW gap tolerance
  // alone floors the distance around 1e-6 when 0 lies inside the hull
  std::vector<int> active;
  for (int j = 0; j < k; ++j)
    if (t(j) > 1e-9) active.push_back(j);
  const int s = static_cast<int>(active.size());
  if (s > 0) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) kkt(a, b) = 2.0 * points[active[a]].dot(points[active[b]]);
    kkt.topRightCorner(s, 1).setOnes();
    kkt.bottomLeftCorner(1, s).setOnes();
    RVec rhs = RVec::Zero(s + 1);
    rhs(s) = 1.0;
    RVec sol = kkt.fullPivLu().solve(rhs);
    if (sol.allFinite()) {
      bool feasible = true;
      for (int a = 0; a < s; ++a)
        if (sol(a) < -1e-12) feasible = false;
      if (feasible) {
        RVec p = RVec::Zero(d);
        for (int a = 0; a < s; ++a) p += sol(a) * points[active[a]];
        if (p.norm() <= x.norm()) x = p;
      }
    }
  }
  return {x, x.norm()};
}

std::pair<RVec, double> nearest_point_exhaustive(const std::vector<RVec>& points) {
  const int k = static_cast<int>(points.size());
  if (k == 0) throw Error(ErrorCode::EmptySupport, "nearest point of an empty hull");
  if (k > 20) throw Error(ErrorCode::ValidationError, "exhaustive search capped at 20 points");
  const int d = static_cast<int>(points[0].size());
  RVec best = points[0];
  double best_norm = points[0].norm();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> sel;
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) sel.push_back(j);
    const int s = static_cast<int>(sel.size());
    Eigen::MatrixXd gram(s, s);
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) gram(a, b) = points[sel[a]].dot(points[sel[b]]);
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
    kkt.topLeftCorner(s, s) = 2.0 * gram;
    kkt.topRightCorner(s, 1).setOnes();
    kkt.bottomLeftCorner(1, s).setOnes();
    RVec rhs = RVec::Zero(s + 1);
    rhs(s) = 1.0;
    RVec sol = kkt.fullPivLu().solve(rhs);
    if (!sol.allFinite()) continue;
    bool feasible = true;
    for (int a = 0; a < s; ++a)
      if (sol(a) < -1e-12) feasible = false;
    if (!feasible) continue;
    RVec p = RVec::Zero(d);
    for (int a = 0; a < s; ++a) p += sol(a) * points[sel[a]];
    if (p.norm() < best_norm) {
      best_norm = p.norm();
      best = p;
    }
  }
  return {best, best_norm};
}

MomentPolytope moment_polytope(const WeightSystem& ws, double hbar) {
  std::vector<RVec> pts;
  for (size_t j = 0; j < ws.lambdas.size(); ++j)
    if (ws.support[j]) pts.push_back(hbar * ws.lambdas[j]);
  if (pts.empty()) throw Error(ErrorCode::EmptySupport, "no supported weights");
  pts = dedupe(pts);

  MomentPolytope poly;
  auto [eta, m] = nearest_point(pts);
  poly.nearest = eta;
  poly.m = m;

  // extreme points: p is a vertex iff it is not in the hull of the others
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts.size() == 1) {
      poly.vertices.push_back(pts[i]);
      break;
    }
    std::vector<RVec> others;
    for (size_t j = 0; j < pts.size(); ++j)
      if (j != i)
        others.push_back(pts[j] - pts[i]);
    if (nearest_point(others).second > 1e-10) poly.vertices.push_back(pts[i]);
  }

  // affine hull of the supported weights
  RVec centroid = RVec::Zero(pts[0].size());
  for (const RVec& p : pts) centroid += p;
  centroid /= double(pts.size());
  Eigen::MatrixXd centered(pts.size(), pts[0].size());
  for (size_t i = 0; i < pts.size(); ++i) centered.row(i) = (pts[i] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  double scale = std::max(1.0, centered.norm());
  int r = 0;
  for (int j = 0; j < svd.singularValues().size(); ++j)
    if (svd.singularValues()(j) > 1e-10 * scale) ++r;
  poly.affine_dim = r;

  if (m > 1e-10) {
    poly.contains_zero = ZeroLocation::outside;
    return poly;
  }
  // 0 is in (or numerically on) the hull; decide boundary vs relint in the span
  Eigen::MatrixXd basis = svd.matrixV().leftCols(r);
  // distance of 0 from the affine hull
  RVec off = -centroid + basis * (basis.transpose() * centroid);
  if (off.norm() > 1e-10) {
    poly.contains_zero = ZeroLocation::boundary;  // m ~ 0 but 0 off the affine hull: grazing
    return poly;
  }
  std::vector<RVec> reduced;
  for (const RVec& p : pts) reduced.push_back(basis.transpose() * p);
  poly.contains_zero = classify_origin(reduced, r, 1e-10);
  return poly;
}

TorusVerdict torus_classify(const CompactGroup& group, const ProjectivePoint& x, double tol_support) {
  WeightSystem ws = extract_weights(group, x, tol_support);
  TorusVerdict verdict;
  verdict.polytope = moment_polytope(ws, x.hbar);
  verdict.m = verdict.polytope.m;
  verdict.eta_star = verdict.polytope.nearest;

  switch (verdict.polytope.contains_zero) {
    case ZeroLocation::outside: {
      verdict.klass = StabilityClass::unstable;
      RVec dir = -verdict.eta_star / verdict.eta_star.norm();
      verdict.xi_unit = group.from_coords(dir);
      break;
    }
    case ZeroLocation::boundary:
      verdict.klass = StabilityClass::semistable;
      verdict.m = 0.0;
      break;
    case ZeroLocation::relative_interior:
      verdict.m = 0.0;
      verdict.klass = (verdict.polytope.affine_dim == group.dim()) ? StabilityClass::stable
                                                                   : StabilityClass::polystable;
      break;
  }
  return verdict;
}

}  // namespace gitkit
