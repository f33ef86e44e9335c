#include "gitkit/flow.hpp"

#include <cmath>

namespace gitkit {

namespace {

struct Rhs {
  const CompactGroup& group;
  double hbar;

  Mat mu_mat(const CVec& v) const {
    double n2 = v.squaredNorm();
    Mat mu = Mat::Zero(group.n, group.n);
    for (int a = 0; a < group.dim(); ++a)
      mu += (hbar * (v.dot(Cplx(0, 1) * (group.basis[a] * v))).real() / n2) * group.basis[a];
    return mu;
  }

  CVec operator()(const CVec& v) const {
    Mat mu = mu_mat(v);
    CVec w = mu * v;
    w -= (v.dot(w) / v.squaredNorm()) * v;
    return -Cplx(0, 1) * w;
  }
};

CVec rk4_step(const Rhs& f, const CVec& v, double h) {
  CVec k1 = f(v);
  CVec k2 = f(v + 0.5 * h * k1);
  CVec k3 = f(v + 0.5 * h * k2);
  CVec k4 = f(v + h * k3);
  return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

FlowTrajectory integrate_flow(const ProjectivePoint& x0, const CompactGroup& group, const FlowOptions& opts) {
  if (opts.t_max <= 0.0 || opts.tol_grad <= 0.0)
    throw Error(ErrorCode::ValidationError, "flow options must be positive");
  const Rhs f{group, x0.hbar};
  const int n = group.n;

  FlowTrajectory traj;
  CVec v = x0.v;
  Mat g = Mat::Identity(n, n);
  double t = 0.0;
  double h = opts.fixed_step > 0 ? opts.fixed_step : 1e-3;
  long stride = 1;
  long step_index = 0;

  auto grad_norm_of = [&](const CVec& vv) {
    Mat mu = f.mu_mat(vv);
    CVec w = mu * vv;
    w -= vv.dot(w) * vv;
    return std::sqrt(2.0 * x0.hbar) * w.norm();
  };
  auto store = [&](double tt, const CVec& vv, const Mat& gg, double grad) {
    ProjectivePoint p = ProjectivePoint::make(vv, x0.hbar);
    traj.times.push_back(tt);
    traj.points.push_back(p);
    traj.mu_norms.push_back(moment_norm(p, group));
    traj.grad_norms.push_back(grad);
    traj.g_path.push_back(gg);
    GroupPoint gp = polar_decompose(group, gg, 1e-4);
    AlgebraVector xi = group.from_coords(-gp.eta.coords);
    traj.xi_path.push_back(xi);
  };
  auto thin = [&]() {
    if (static_cast<int>(traj.times.size()) < opts.max_stored) return;
    auto keep_half = [](auto& vec) {
      size_t w = 0;
      for (size_t i = 0; i < vec.size(); i += 2) vec[w++] = vec[i];
      vec.resize(w);
    };
    keep_half(traj.times);
    keep_half(traj.points);
    keep_half(traj.mu_norms);
    keep_half(traj.grad_norms);
    keep_half(traj.g_path);
    keep_half(traj.xi_path);
    stride *= 2;
  };

  double grad0 = grad_norm_of(v);
  store(0.0, v, g, grad0);
  if (grad0 <= opts.tol_grad) {
    traj.converged = true;
    return traj;
  }

  auto lift_step = [&](const CVec& vv, double hh) {
    // 4th-order Magnus step for g' = g * i mu(x(t)), Gauss nodes
    const double s3 = std::sqrt(3.0);
    double cg1 = 0.5 - s3 / 6.0, cg2 = 0.5 + s3 / 6.0;
    CVec v1 = rk4_step(f, vv, cg1 * hh);
    CVec v2 = rk4_step(f, vv, cg2 * hh);
    Mat a1 = Cplx(0, 1) * f.mu_mat(v1);
    Mat a2 = Cplx(0, 1) * f.mu_mat(v2);
    Mat omega = 0.5 * hh * (a1 + a2) + (s3 / 12.0) * hh * hh * bracket(a2, a1);
    g = g * expm(omega);
  };

  bool lift_capped = false;
  Mat g_prev = g;
  double t_prev = 0.0;
  while (t < opts.t_max) {
    if (++step_index > opts.max_steps) break;
    t_prev = t;
    if (!lift_capped) g_prev = g;
    if (opts.fixed_step > 0) {
      double hh = std::min(opts.fixed_step, opts.t_max - t);
      if (!lift_capped) lift_step(v, hh);
      v = rk4_step(f, v, hh);
      v.normalize();
      t += hh;
    } else {
      double hh = std::min(h, opts.t_max - t);
      CVec k1 = f(v);
      CVec k2 = f(v + hh * (a21 * k1));
      CVec k3 = f(v + hh * (a31 * k1 + a32 * k2));
      CVec k4 = f(v + hh * (a41 * k1 + a42 * k2 + a43 * k3));
      CVec k5 = f(v + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      CVec k6 = f(v + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      CVec vnew = v + hh * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      CVec k7 = f(vnew);
      CVec err_vec = hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double err = 0.0;
      for (int j = 0; j < n; ++j) {
        double sc = opts.atol + opts.rtol * std::max(std::abs(v(j)), std::abs(vnew(j)));
        err += std::norm(err_vec(j)) / (sc * sc);
      }
      err = std::sqrt(err / n);
      if (err <= 1.0) {
        if (!lift_capped) lift_step(v, hh);
        v = vnew;
        v.normalize();
        t += hh;
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h = hh * std::min(5.0, std::max(0.2, fac));
      if (h < 1e-14 * std::max(1.0, t))
        throw Error(ErrorCode::StepSizeUnderflow, "step size underflow in gradient flow");
      if (err > 1.0) continue;
    }

    if (!lift_capped) {
      // the lift's singular values spread like exp(+-m t) on unstable orbits;
      // freeze g while gg* still has its full spectrum inside floating-point
      // range: the eigensolver rescales by the largest eigenvalue, so the
      // spread of gg* must stay far below 1/DBL_MIN
      Eigen::PartialPivLU<Mat> lu(g);
      if (!(g.norm() <= 1e50) || !(lu.inverse().norm() <= 1e50)) {
        lift_capped = true;  // keep the last safely decomposable lift and
        g = g_prev;          // integrate the point alone from here on
        traj.t_lift_cap = t_prev;
      } else {
        // conjugacy x(t) = g(t)^{-1} x0: re-anchor x from g when drift builds up
        CVec anchor = lu.solve(x0.v);
        anchor.normalize();
        double drift = std::acos(std::min(1.0, std::abs(anchor.dot(v / v.norm()))));
        traj.max_conjugacy_drift = std::max(traj.max_conjugacy_drift, drift);
        if (drift > 1e-3) throw Error(ErrorCode::ConsistencyLost, "flow lift lost consistency");
        if (drift > 1e-6) v = anchor;
      }
    }

    double grad = grad_norm_of(v);
    if (step_index % stride == 0 || grad <= opts.tol_grad || t >= opts.t_max) {
      thin();
      store(t, v, g, grad);
    }
    if (grad <= opts.tol_grad) {
      traj.converged = true;
      break;
    }
  }
  if (!traj.converged && traj.times.back() < t) {
    store(t, v, g, grad_norm_of(v));
  }
  return traj;
}

FlowLimit flow_limit(const FlowTrajectory& traj) {
  if (!traj.converged) throw Error(ErrorCode::NotConverged, "flow did not converge");
  return {traj.points.back(), traj.mu_norms.back()};
}

DominantWeight dominant_weight(const FlowTrajectory& traj, const CompactGroup& group, double tol_class) {
  double m = traj.mu_norms.back();
  if (m <= tol_class) throw Error(ErrorCode::NotUnstable, "trajectory is not unstable");
  const size_t count = traj.times.size();
  if (count < 3 || traj.times.back() <= 0.0) {
    // critical start: xi(t) = -t mu(x0) exactly
    AlgebraVector mu = moment_map(traj.points.back(), group);
    if (mu.coords.norm() < 1e-14)
      throw Error(ErrorCode::ExtrapolationDiverged, "no direction at critical start");
    DominantWeight out;
    out.xi_inf = group.from_coords(RVec(-mu.coords));
    out.xi_unit = group.from_coords(RVec(-mu.coords / mu.coords.norm()));
    return out;
  }
  // the lift may be frozen from some time on; only the leading samples
  // carry a live xi(t)
  size_t nvalid = count;
  while (nvalid > 1 && traj.times[nvalid - 1] > traj.t_lift_cap) --nvalid;

  if (traj.converged && nvalid == count) {
    // past convergence xi(t) = xi_inf t + C + eps(t) with |eps'| ~ tol_grad,
    // so the last-segment difference quotient is accurate to the gradient
    // tolerance; the spread-anchor fit below still carries transients
    size_t j3 = count - 1, j2 = count - 2;
    double dt = traj.times[j3] - traj.times[j2];
    if (dt > 1e-12) {
      RVec slope = (traj.xi_path[j3].coords - traj.xi_path[j2].coords) / dt;
      if (slope.allFinite() && slope.norm() > 1e-14) {
        DominantWeight out;
        out.xi_inf = group.from_coords(slope);
        out.xi_unit = group.from_coords(RVec(slope / slope.norm()));
        return out;
      }
    }
  }
  size_t lo = 2 * nvalid / 3;
  if (nvalid - lo < 3) lo = nvalid >= 3 ? nvalid - 3 : 0;

  // Richardson on xi(t)/t with model a0 + a1/t + a2/t^2 at three anchors
  size_t i1 = lo, i2 = (lo + nvalid - 1) / 2, i3 = nvalid - 1;
  if (i2 == i1) i2 = i1 + 1;
  double t1 = traj.times[i1], t2 = traj.times[i2], t3 = traj.times[i3];
  if (t1 <= 0 || t2 <= t1 || t3 <= t2)
    throw Error(ErrorCode::ExtrapolationDiverged, "degenerate extrapolation window");
  Eigen::Matrix3d vdm;
  vdm << 1, 1 / t1, 1 / (t1 * t1), 1, 1 / t2, 1 / (t2 * t2), 1, 1 / t3, 1 / (t3 * t3);
  Eigen::PartialPivLU<Eigen::Matrix3d> lu(vdm);

  const int d = group.dim();
  RVec a0(d);
  for (int a = 0; a < d; ++a) {
    Eigen::Vector3d y(traj.xi_path[i1].coords(a) / t1, traj.xi_path[i2].coords(a) / t2,
                      traj.xi_path[i3].coords(a) / t3);
    a0(a) = lu.solve(y)(0);
  }
  if (!a0.allFinite() || a0.norm() < 1e-14)
    throw Error(ErrorCode::ExtrapolationDiverged, "extrapolation produced no direction");

  DominantWeight out;
  out.xi_inf = group.from_coords(a0);
  out.xi_unit = group.from_coords(a0 / a0.norm());
  return out;
}

FlowTrajectory::RateFit lojasiewicz_fit(const FlowTrajectory& traj) {
  if (!traj.converged) throw Error(ErrorCode::NotConverged, "fit requires a converged trajectory");
  const size_t count = traj.times.size();
  const ProjectivePoint& x_inf = traj.points.back();
  const double scale = std::sqrt(2.0 * x_inf.hbar);

  std::vector<double> ts, ds;
  for (size_t i = count / 2; i + 1 < count; ++i) {
    double d = scale * projective_distance(traj.points[i], x_inf);
    if (d > 1e-13 && traj.times[i] > 0) {
      ts.push_back(traj.times[i]);
      ds.push_back(d);
    }
  }
  FlowTrajectory::RateFit fit;
  if (ts.empty()) {
    fit.degenerate = true;
    return fit;
  }
  if (ts.size() < 50) throw Error(ErrorCode::InsufficientSamples, "need at least 50 tail samples");

  auto linear_fit = [](const std::vector<double>& xs, const std::vector<double>& ys, double* slope,
                       double* intercept) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    *slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    *intercept = (sy - *slope * sx) / n;
    double rss = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      double r = ys[i] - (*slope * xs[i] + *intercept);
      rss += r * r;
    }
    return std::sqrt(rss / n);
  };

  std::vector<double> logd(ds.size());
  for (size_t i = 0; i < ds.size(); ++i) logd[i] = std::log(ds[i]);

  double best_res = 1e300;
  for (double frac : {0.0, 0.25, 0.5, 0.75, 0.9}) {
    double T = frac * ts.front();
    std::vector<double> xs(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) xs[i] = std::log(ts[i] - T);
    double slope, intercept;
    double res = linear_fit(xs, logd, &slope, &intercept);
    if (res < best_res) {
      best_res = res;
      fit.epsilon = -slope;
      fit.c = std::exp(intercept);
      fit.T = T;
      fit.residual = res;
    }
  }
  double slope_e, icpt_e;
  double res_exp = linear_fit(ts, logd, &slope_e, &icpt_e);
  if (res_exp < best_res && slope_e < 0) fit.super_polynomial = true;
  return fit;
}

}  // namespace gitkit
