#include "gitkit/projective.hpp"

#include <cmath>
#include <numbers>

namespace gitkit {

namespace {

CVec project_out(const CVec& v, const CVec& w) {
  // orthogonal projection of w along v, |v| = 1
  return w - v.dot(w) * v;
}

}  // namespace

ProjectivePoint ProjectivePoint::make(CVec v, double hbar) {
  double nrm = v.norm();
  if (nrm < 1e-300) throw Error(ErrorCode::ValidationError, "zero vector does not define a point");
  if (hbar <= 0.0) throw Error(ErrorCode::ValidationError, "hbar must be positive");
  v /= nrm;
  for (int j = 0; j < v.size(); ++j) {
    if (std::abs(v(j)) > 1e-12) {
      v *= std::conj(v(j)) / std::abs(v(j));
      break;
    }
  }
  ProjectivePoint x;
  x.v = std::move(v);
  x.hbar = hbar;
  return x;
}

double projective_distance(const ProjectivePoint& x, const ProjectivePoint& y) {
  double c = std::min(1.0, std::abs(x.v.dot(y.v)));
  return std::acos(c);
}

AlgebraVector moment_map(const ProjectivePoint& x, const CompactGroup& group) {
  RVec c(group.dim());
  for (int a = 0; a < group.dim(); ++a)
    c(a) = x.hbar * (x.v.dot(Cplx(0, 1) * (group.basis[a] * x.v))).real();
  return group.from_coords(c);
}

double moment_norm(const ProjectivePoint& x, const CompactGroup& group) {
  return moment_map(x, group).coords.norm();
}

TangentVector infinitesimal_action(const ProjectivePoint& x, const Mat& zeta_mat) {
  return {x, project_out(x.v, zeta_mat * x.v)};
}

TangentVector grad_f(const ProjectivePoint& x, const CompactGroup& group) {
  Mat mu = moment_map(x, group).mat;
  return {x, Cplx(0, 1) * project_out(x.v, mu * x.v)};
}

double kempf_ness_value(const ProjectivePoint& x, const Mat& g) {
  Eigen::PartialPivLU<Mat> lu(g);
  if (std::abs(lu.determinant()) < 1e-300) throw Error(ErrorCode::Singular, "g is singular");
  return x.hbar * std::log(lu.solve(x.v).norm());
}

WeightReport mu_weight(const ProjectivePoint& x, const ComplexAlgebraVector& zeta, WeightMode mode,
                       double horizon, double tol_support) {
  auto [toral, dec] = is_toral_generator(zeta);
  if (!toral) throw Error(ErrorCode::NotToral, "mu-weight requires a toral generator");
  const int k = static_cast<int>(dec.eigenvalues.size());

  WeightReport rep;
  rep.support.assign(k, false);
  std::vector<CVec> components(k);
  int top = -1;
  for (int j = 0; j < k; ++j) {
    components[j] = dec.projectors[j] * x.v;
    double nrm = components[j].norm();
    rep.support[j] = nrm > tol_support;
    if (nrm > tol_support && nrm < 10.0 * tol_support) rep.support_ambiguous = true;
    if (rep.support[j]) top = j;
  }
  if (top < 0) throw Error(ErrorCode::ValidationError, "point has empty eigenspace support");
  rep.lambda_max = dec.eigenvalues(top);
  rep.x_plus = ProjectivePoint::make(components[top], x.hbar);

  if (mode == WeightMode::exact) {
    rep.weight = x.hbar * rep.lambda_max;
  } else {
    double gap = 1e300;
    for (int j = 1; j < k; ++j) gap = std::min(gap, dec.eigenvalues(j) - dec.eigenvalues(j - 1));
    double t = horizon > 0 ? horizon : (k > 1 ? 40.0 / gap : 1.0);
    // exp(i t zeta) v, rescaled by exp(-t lambda_top) to avoid overflow
    CVec w = CVec::Zero(x.v.size());
    for (int j = 0; j < k; ++j) w += std::exp(t * (dec.eigenvalues(j) - dec.eigenvalues(top))) * components[j];
    w.normalize();
    rep.weight = x.hbar * (w.dot(Cplx(0, 1) * (zeta.re.mat * w))).real();
  }

  Mat z = zeta.mat();
  if ((expm(z) - Mat::Identity(z.rows(), z.cols())).norm() <= 1e-8) {
    double q = rep.weight / (2.0 * std::numbers::pi * x.hbar);
    rep.quantized = std::lround(q);
  }
  return rep;
}

double hessian_at_critical(const ProjectivePoint& x, const CompactGroup& group, const AlgebraVector& eta) {
  Mat mu = moment_map(x, group).mat;
  double grad = std::sqrt(2.0 * x.hbar) * project_out(x.v, mu * x.v).norm();
  if (grad > 1e-8) throw Error(ErrorCode::NotCritical, "x is not a critical point of |mu|^2/2");

  CVec w = project_out(x.v, eta.mat * x.v);  // L_x eta representative
  RVec lstar(group.dim());
  for (int a = 0; a < group.dim(); ++a) lstar(a) = 2.0 * x.hbar * (group.basis[a] * x.v).dot(w).real();
  double first = lstar.squaredNorm();
  double second = bracket(mu, eta.mat).squaredNorm();
  return first - second;
}

IsotropyRank isotropy_rank(const ProjectivePoint& x, const CompactGroup& group) {
  const int n = group.n;
  const int d = group.dim();
  auto fill = [&](Eigen::MatrixXd& m, int col, const CVec& w) {
    for (int j = 0; j < n; ++j) {
      m(j, col) = w(j).real();
      m(n + j, col) = w(j).imag();
    }
  };
  const double scale = std::sqrt(2.0 * x.hbar);
  Eigen::MatrixXd mr(2 * n, d), mc(2 * n, 2 * d);
  for (int a = 0; a < d; ++a) {
    CVec w = scale * project_out(x.v, group.basis[a] * x.v);
    CVec wi = scale * project_out(x.v, Cplx(0, 1) * (group.basis[a] * x.v));
    fill(mr, a, w);
    fill(mc, a, w);
    fill(mc, d + a, wi);
  }
  auto kernel_dim = [](const Eigen::MatrixXd& m, double* sigma_min) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const RVec& s = svd.singularValues();
    int rank = 0;
    for (int j = 0; j < s.size(); ++j)
      if (s(j) > 1e-8) ++rank;
    if (sigma_min) *sigma_min = s(s.size() - 1);
    return static_cast<int>(m.cols()) - rank;
  };
  IsotropyRank out;
  out.ker_real = kernel_dim(mr, &out.sigma_min);
  out.ker_complex = kernel_dim(mc, nullptr);
  return out;
}

}  // namespace gitkit
