#include "gitkit/stability.hpp"

#include <algorithm>
#include <cmath>

#include "gitkit/sampling.hpp"
#include "gitkit/toral.hpp"

namespace gitkit {

namespace {

/// Limit of |mu(x(t))| from the stored tail, by fitting a0 + a1/t + a2/t^2
/// at three spread anchors. The flow value at finite t is an upper bound;
/// extrapolation removes the leading polynomial tail.
double extrapolate_mu(const FlowTrajectory& traj) {
  const auto& t = traj.times;
  const auto& mu = traj.mu_norms;
  const int k = static_cast<int>(t.size());
  double last = mu[k - 1];
  if (k < 8 || t[k - 1] < 10.0 || last < 1e-9) return last;

  auto at_time = [&](double target) {
    int best = 0;
    for (int j = 0; j < k; ++j)
      if (std::abs(t[j] - target) < std::abs(t[best] - target)) best = j;
    return best;
  };
  int i2 = k - 1;
  int i1 = at_time(t[i2] / 2.0);
  int i0 = at_time(t[i2] / 4.0);
  if (i0 == i1 || i1 == i2 || t[i0] <= 0.0) return last;

  Eigen::Matrix3d vand;
  Eigen::Vector3d rhs;
  int idx[3] = {i0, i1, i2};
  for (int r = 0; r < 3; ++r) {
    double u = 1.0 / t[idx[r]];
    vand(r, 0) = 1.0;
    vand(r, 1) = u;
    vand(r, 2) = u * u;
    rhs(r) = mu[idx[r]];
  }
  double a0 = vand.fullPivLu().solve(rhs)(0);
  if (!std::isfinite(a0)) return last;
  return std::clamp(a0, 0.0, last);
}

/// The lifted path is Cauchy when xi(t) settles over the trailing half.
bool xi_path_cauchy(const FlowTrajectory& traj, double tol = 1e-4) {
  const auto& t = traj.times;
  const auto& xi = traj.xi_path;
  const int k = static_cast<int>(t.size());
  if (k < 4) return true;
  const RVec& end = xi[k - 1].coords;
  double drift = 0.0;
  for (int j = 0; j < k; ++j)
    if (t[j] >= t[k - 1] / 2.0) drift = std::max(drift, (xi[j].coords - end).norm());
  return drift <= tol;
}

}  // namespace

StabilityVerdict classify(const ProjectivePoint& x0, const CompactGroup& group,
                          const StabilityOptions& opts) {
  FlowOptions fopts;
  fopts.tol_grad = opts.tol_grad;
  fopts.t_max = opts.t_max;
  FlowTrajectory traj = integrate_flow(x0, group, fopts);

  StabilityVerdict verdict;
  const ProjectivePoint& x_inf = traj.points.back();
  verdict.m_estimate = extrapolate_mu(traj);
  if (verdict.m_estimate > 1e-8 && verdict.m_estimate < 1e-4)
    verdict.diagnostics.push_back("near-boundary");

  IsotropyRank iso = isotropy_rank(x_inf, group);
  verdict.sigma_min_isotropy = iso.sigma_min;

  // |mu| along a semistable flow can decay as slowly as t^(-1/2), which
  // floors the extrapolated value around 1e-5; for torus presets the exact
  // hull oracle settles the band the flow cannot resolve
  if (group.preset == Preset::torus && verdict.m_estimate <= 1e-4) {
    TorusVerdict tv = torus_classify(group, x0);
    verdict.klass = tv.klass;
    verdict.m_estimate = tv.m;
    verdict.diagnostics.push_back("torus-exact-polystability");
    if (tv.klass == StabilityClass::unstable)
      verdict.xi_unit = tv.xi_unit;
    else
      verdict.x_zero = x_inf;
    return verdict;
  }

  if (verdict.m_estimate > opts.tol_class) {
    verdict.klass = StabilityClass::unstable;
    try {
      DominantWeight dw = dominant_weight(traj, group, opts.tol_class);
      verdict.xi_unit = dw.xi_unit;
      // near a critical point |mu(x)| - m is second order in the distance,
      // so a small final gradient makes |mu| the sharpest estimate; far from
      // convergence the certificate norm |xi_inf| = m is more reliable
      verdict.m_estimate =
          (traj.grad_norms.back() <= 1e-5) ? traj.mu_norms.back() : dw.xi_inf.norm();
    } catch (const Error&) {
      verdict.diagnostics.push_back("certificate-extraction-failed");
    }
    return verdict;
  }

  verdict.x_zero = x_inf;

  if (xi_path_cauchy(traj)) {
    verdict.klass =
        (iso.ker_real == 0) ? StabilityClass::stable : StabilityClass::polystable;
    verdict.diagnostics.push_back("lifted-path-cauchy");
  } else {
    verdict.klass = StabilityClass::undetermined;
    verdict.diagnostics.push_back("lifted-path-not-cauchy");
  }
  return verdict;
}

MumfordValue mumford_function(const ProjectivePoint& x0, const CompactGroup& group,
                              const StabilityOptions& opts, unsigned long long seed) {
  MumfordValue out;
  if (group.preset == Preset::torus) {
    TorusVerdict tv = torus_classify(group, x0);
    out.method = "torus-exact";
    out.m_mu = tv.m;
    if (tv.klass == StabilityClass::unstable) out.argmax = tv.xi_unit;
    return out;
  }

  FlowOptions fopts;
  fopts.tol_grad = opts.tol_grad;
  fopts.t_max = opts.t_max;
  FlowTrajectory traj = integrate_flow(x0, group, fopts);
  double m = extrapolate_mu(traj);
  if (m > opts.tol_class) {
    out.method = "flow";
    out.m_mu = m;
    out.argmax = dominant_weight(traj, group, opts.tol_class).xi_unit;
    return out;
  }

  // semistable: all weights are >= 0, report the sampled sup of -w/|xi|
  out.method = "sampled";
  double sup = -1e300;
  for (int i = 0; i < 200; ++i) {
    auto rng = sample_rng(seed, i);
    AlgebraVector xi = random_unit_algebra(group, rng);
    ComplexAlgebraVector zeta{xi, group.zero()};
    sup = std::max(sup, -mu_weight(x0, zeta).weight);
  }
  out.m_mu = sup;
  return out;
}

AuditReport moment_weight_audit(const ProjectivePoint& x0, const CompactGroup& group,
                                long n_samples, unsigned long long seed, AuditMode mode) {
  if (n_samples < 1) throw Error(ErrorCode::ValidationError, "n_samples must be >= 1");
  AuditReport report;
  report.samples = n_samples;
  double worst = 1e300;
  long violations = 0;
  const bool par = (mode == AuditMode::parallel);

#pragma omp parallel for schedule(static) if (par) reduction(min : worst) reduction(+ : violations)
  for (long i = 0; i < n_samples; ++i) {
    auto rng = sample_rng(seed, static_cast<std::uint64_t>(i));
    AlgebraVector xi = random_unit_algebra(group, rng);
    GroupPoint g = random_group_element(group, rng, 1.0);
    ComplexAlgebraVector zeta{xi, group.zero()};
    double w = mu_weight(x0, zeta).weight;
    ProjectivePoint gx = ProjectivePoint::make(g.mat * x0.v, x0.hbar);
    double slack = moment_norm(gx, group) + w;  // |mu(gx)| - (-w/|xi|), |xi| = 1

    {
      // restricted inequality needs a toral zeta fixing the base point:
      // zeta = Ad_{g0} xi0 is toral by construction and fixes x = [g0 e]
      // for any eigenvector e of xi0
      AlgebraVector xi0 = random_unit_algebra(group, rng);
      GroupPoint g0 = random_group_element(group, rng, 0.5);
      ComplexAlgebraVector zc =
          adjoint(group, g0.mat, ComplexAlgebraVector{xi0, group.zero()});
      Eigen::SelfAdjointEigenSolver<Mat> es(Cplx(0, 1) * xi0.mat);
      CVec e = es.eigenvectors().col(static_cast<int>(i) % group.n);
      ProjectivePoint xf = ProjectivePoint::make(g0.mat * e, x0.hbar);
      double denom = zc.re.coords.squaredNorm() - zc.im.coords.squaredNorm();
      double pairing = moment_map(xf, group).coords.dot(zc.re.coords);
      ProjectivePoint gxf = ProjectivePoint::make(g.mat * xf.v, xf.hbar);
      double rhs = moment_norm(gxf, group);
      double slack2 = rhs * rhs * denom - pairing * pairing;
      slack = std::min(slack, slack2);
    }

    if (slack < -1e-8) ++violations;
    worst = std::min(worst, slack);
  }
  report.worst_slack = worst;
  report.violations = violations;
  return report;
}

double orbit_distance_G(const ProjectivePoint& x, const ProjectivePoint& y,
                        const CompactGroup& group, unsigned long long seed, int n_starts) {
  const int d = group.dim();
  double best = 0.0;  // best overlap |<u vx, vy>|^2
  for (int s = 0; s < n_starts; ++s) {
    Mat u = Mat::Identity(group.n, group.n);
    if (s > 0) {
      auto rng = sample_rng(seed, static_cast<std::uint64_t>(s));
      std::uniform_real_distribution<double> unif(0.0, 3.14159265358979323846);
      u = exp_scaled_skew(random_unit_algebra(group, rng).mat, Cplx(unif(rng), 0));
    }
    CVec w = u * x.v;
    double c = std::norm(y.v.dot(w));
    for (int iter = 0; iter < 500; ++iter) {
      Cplx overlap = w.dot(y.v);  // <w, vy>
      RVec grad(d);
      for (int a = 0; a < d; ++a)
        grad(a) = 2.0 * (y.v.dot(group.basis[a] * w) * overlap).real();
      double gn = grad.norm();
      if (gn < 1e-12) break;
      AlgebraVector dir = group.from_coords(RVec(grad / gn));
      double t = 1.0;
      bool moved = false;
      while (t > 1e-14) {
        CVec w2 = exp_scaled_skew(dir.mat, Cplx(t, 0)) * w;
        double c2 = std::norm(y.v.dot(w2));
        if (c2 > c + 0.25 * t * gn) {
          w = w2;
          c = c2;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;
    }
    best = std::max(best, c);
  }
  return std::acos(std::min(1.0, std::sqrt(best)));
}

NessReport ness_uniqueness_audit(const ProjectivePoint& x0, const CompactGroup& group,
                                 const std::vector<GroupPoint>& hs, unsigned long long seed,
                                 long kirwan_samples, const StabilityOptions& opts) {
  FlowOptions fopts;
  fopts.tol_grad = opts.tol_grad;
  fopts.t_max = opts.t_max;

  std::vector<ProjectivePoint> limits;
  std::vector<double> mus;
  auto run = [&](const ProjectivePoint& start) {
    FlowTrajectory traj = integrate_flow(start, group, fopts);
    limits.push_back(traj.points.back());
    mus.push_back(moment_norm(traj.points.back(), group));
  };
  run(x0);
  for (const GroupPoint& h : hs)
    run(ProjectivePoint::make(h.mat.partialPivLu().solve(x0.v), x0.hbar));

  NessReport report;
  for (size_t i = 0; i < limits.size(); ++i)
    for (size_t j = i + 1; j < limits.size(); ++j) {
      report.max_orbit_distance = std::max(
          report.max_orbit_distance, orbit_distance_G(limits[i], limits[j], group, seed));
      report.max_mu_gap = std::max(report.max_mu_gap, std::abs(mus[i] - mus[j]));
    }

  double worst = 1e300;
  for (size_t i = 0; i < limits.size(); ++i) {
    for (long s = 0; s < kirwan_samples; ++s) {
      auto rng = sample_rng(seed ^ 0x517cc1b727220a95ull, i * kirwan_samples + s);
      GroupPoint g = random_group_element(group, rng, 1.0);
      ProjectivePoint gx = ProjectivePoint::make(g.mat * limits[i].v, x0.hbar);
      worst = std::min(worst, moment_norm(gx, group) - mus[i]);
    }
  }
  report.worst_kirwan_slack = worst;
  return report;
}

std::vector<double> kempf_ness_ray_profile(const ProjectivePoint& x0, const CompactGroup& group,
                                           const AlgebraVector& xi_unit,
                                           const std::vector<double>& r_list) {
  (void)group;
  Eigen::SelfAdjointEigenSolver<Mat> es(Cplx(0, 1) * xi_unit.mat);
  const RVec& lam = es.eigenvalues();
  CVec c = es.eigenvectors().adjoint() * x0.v;

  double top = -1e300;
  for (int j = 0; j < lam.size(); ++j)
    if (std::abs(c(j)) > 1e-300) top = std::max(top, lam(j));

  std::vector<double> out;
  for (double r : r_list) {
    if (r <= 0.0) throw Error(ErrorCode::ValidationError, "ray parameter must be positive");
    double acc = 0.0;
    for (int j = 0; j < lam.size(); ++j) acc += std::exp(2.0 * r * (lam(j) - top)) * std::norm(c(j));
    out.push_back(x0.hbar * (top + 0.5 * std::log(acc) / r));
  }
  return out;
}

KempfReport kempf_uniqueness_audit(const ProjectivePoint& x0, const CompactGroup& group,
                                   int n_starts, unsigned long long seed,
                                   const StabilityOptions& opts) {
  FlowOptions fopts;
  fopts.tol_grad = opts.tol_grad;
  fopts.t_max = opts.t_max;

  std::vector<RVec> units;
  auto certificate = [&](const ProjectivePoint& start) {
    FlowTrajectory traj = integrate_flow(start, group, fopts);
    if (extrapolate_mu(traj) <= opts.tol_class)
      throw Error(ErrorCode::NotUnstable, "instance is not unstable");
    return dominant_weight(traj, group, opts.tol_class).xi_unit;
  };

  KempfReport report;
  report.starts = n_starts;
  report.xi0 = certificate(x0);
  units.push_back(report.xi0.coords);

  for (int s = 1; s < n_starts; ++s) {
    auto rng = sample_rng(seed, static_cast<std::uint64_t>(s));
    GroupPoint h = random_group_element(group, rng, 0.5);
    ProjectivePoint y = ProjectivePoint::make(h.mat.partialPivLu().solve(x0.v), x0.hbar);
    AlgebraVector xi_y = certificate(y);
    // pull the certificate of y = h^{-1} x0 back to x0 and reduce into g
    ComplexAlgebraVector zeta = adjoint(group, h.mat, ComplexAlgebraVector{xi_y, group.zero()});
    AlgebraVector xi = mumford_reduce(group, zeta).xi;
    units.push_back(RVec(xi.coords / xi.coords.norm()));
  }

  for (size_t i = 0; i < units.size(); ++i)
    for (size_t j = i + 1; j < units.size(); ++j)
      report.max_pairwise = std::max(report.max_pairwise, (units[i] - units[j]).norm());
  return report;
}

}  // namespace gitkit
