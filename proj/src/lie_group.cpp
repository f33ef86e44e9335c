#include "gitkit/lie_group.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace gitkit {

namespace {

Mat unit_matrix(int n, int j, int k) {
  Mat e = Mat::Zero(n, n);
  e(j, k) = 1.0;
  return e;
}

// Gram-Schmidt under the trace form; drops near-dependent entries.
std::vector<Mat> orthonormalize(const std::vector<Mat>& raw) {
  std::vector<Mat> out;
  for (const Mat& a : raw) {
    Mat r = a;
    for (const Mat& e : out) r -= trace_inner(e, r) * e;
    double nrm = std::sqrt(std::max(0.0, trace_inner(r, r)));
    if (nrm > 1e-12) out.push_back(r / nrm);
  }
  return out;
}

void check_skew(const std::vector<Mat>& basis) {
  for (const Mat& e : basis) {
    if ((e + e.adjoint()).norm() > 1e-12)
      throw Error(ErrorCode::NotSkewHermitian, "basis matrix is not skew-Hermitian");
  }
}

void check_bracket_closure(const std::vector<Mat>& basis) {
  for (size_t a = 0; a < basis.size(); ++a) {
    for (size_t b = a + 1; b < basis.size(); ++b) {
      Mat br = bracket(basis[a], basis[b]);
      Mat r = br;
      for (const Mat& e : basis) r -= trace_inner(e, br) * e;
      if (r.norm() > 1e-10)
        throw Error(ErrorCode::NotClosedUnderBracket, "bracket leaves the algebra span");
    }
  }
}

}  // namespace

Mat exp_scaled_skew(const Mat& s, Cplx z) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Cplx(0, 1) * s);
  const RVec& d = es.eigenvalues();
  CVec phases(d.size());
  for (int j = 0; j < d.size(); ++j) phases(j) = std::exp(-Cplx(0, 1) * z * d(j));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat expm(const Mat& a) { return a.exp(); }

AlgebraVector CompactGroup::from_coords(const RVec& c) const {
  AlgebraVector v;
  v.coords = c;
  v.mat = Mat::Zero(n, n);
  for (int a = 0; a < dim(); ++a) v.mat += c(a) * basis[a];
  return v;
}

std::pair<AlgebraVector, double> CompactGroup::project(const Mat& a) const {
  RVec c(dim());
  for (int k = 0; k < dim(); ++k) c(k) = trace_inner(basis[k], a);
  AlgebraVector v = from_coords(c);
  double residual = (a - v.mat).norm();
  return {v, residual};
}

CompactGroup build_group(const GroupSpec& spec) {
  if (spec.n < 1) throw Error(ErrorCode::ValidationError, "ambient dimension must be >= 1");
  CompactGroup g;
  g.n = spec.n;
  g.preset = spec.preset;
  const int n = spec.n;
  const Cplx I(0, 1);

  switch (spec.preset) {
    case Preset::full_unitary: {
      for (int j = 0; j < n; ++j) g.basis.push_back(I * unit_matrix(n, j, j));
      for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          g.basis.push_back((unit_matrix(n, j, k) - unit_matrix(n, k, j)) / std::sqrt(2.0));
          g.basis.push_back(I * (unit_matrix(n, j, k) + unit_matrix(n, k, j)) / std::sqrt(2.0));
        }
      }
      break;
    }
    case Preset::special_unitary: {
      std::vector<Mat> raw;
      for (int j = 0; j + 1 < n; ++j)
        raw.push_back(I * (unit_matrix(n, j, j) - unit_matrix(n, j + 1, j + 1)));
      g.basis = orthonormalize(raw);
      for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          g.basis.push_back((unit_matrix(n, j, k) - unit_matrix(n, k, j)) / std::sqrt(2.0));
          g.basis.push_back(I * (unit_matrix(n, j, k) + unit_matrix(n, k, j)) / std::sqrt(2.0));
        }
      }
      break;
    }
    case Preset::torus: {
      if (spec.weights.rows() != n || spec.weights.cols() < 1)
        throw Error(ErrorCode::ValidationError, "torus weight matrix must be n x d");
      Eigen::MatrixXd wd = spec.weights.cast<double>();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(wd);
      if (lu.rank() < spec.weights.cols())
        throw Error(ErrorCode::RankDeficientWeights, "torus weight matrix is rank deficient");
      g.weight_matrix = spec.weights;
      std::vector<Mat> raw;
      for (int a = 0; a < spec.weights.cols(); ++a) {
        Mat gen = Mat::Zero(n, n);
        for (int j = 0; j < n; ++j) gen(j, j) = I * double(spec.weights(j, a));
        raw.push_back(gen);
        g.torus_lattice.push_back(2.0 * std::numbers::pi * gen);
      }
      g.basis = orthonormalize(raw);
      break;
    }
    case Preset::custom: {
      if (spec.custom_basis.empty())
        throw Error(ErrorCode::ValidationError, "custom basis must be nonempty");
      check_skew(spec.custom_basis);
      g.basis = orthonormalize(spec.custom_basis);
      break;
    }
  }
  check_skew(g.basis);
  check_bracket_closure(g.basis);
  return g;
}

GroupPoint exp_element(const CompactGroup& group, const ComplexAlgebraVector& zeta, double t) {
  Mat z = zeta.mat();
  Mat g;
  if (zeta.im.norm() < 1e-14 || zeta.re.norm() < 1e-14) {
    // normal argument: eigendecomposition route is exact and cheap
    if (zeta.im.norm() < 1e-14)
      g = exp_scaled_skew(zeta.re.mat, Cplx(t, 0));
    else
      g = exp_scaled_skew(zeta.im.mat, Cplx(0, 1) * t);
  } else {
    g = expm(t * z);
  }
  try {
    return polar_decompose(group, g);
  } catch (const Error&) {
    throw Error(ErrorCode::PolarFailure, "exp result not certified in G^c");
  }
}

GroupPoint polar_decompose(const CompactGroup& group, const Mat& g, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g * g.adjoint());
  const RVec& d = es.eigenvalues();
  if (d.minCoeff() <= 0.0)
    throw Error(ErrorCode::Singular, "matrix is singular (gg* eigs in [" +
                                         std::to_string(d.minCoeff()) + ", " +
                                         std::to_string(d.maxCoeff()) + "], |g| = " +
                                         std::to_string(g.norm()) + ")");
  // i eta = (1/2) log(g g*)
  RVec half_log(d.size());
  for (int j = 0; j < d.size(); ++j) half_log(j) = 0.5 * std::log(d(j));
  Mat h = es.eigenvectors() * half_log.asDiagonal() * es.eigenvectors().adjoint();
  Mat eta_mat = -Cplx(0, 1) * h;

  auto [eta_proj, residual] = group.project(eta_mat);
  if (residual > tol)
    throw Error(ErrorCode::NotInComplexification,
                "polar part leaves the group algebra (residual " + std::to_string(residual) +
                    ", |g| = " + std::to_string(g.norm()) + ")");

  GroupPoint gp;
  gp.mat = g;
  gp.eta.coords = eta_proj.coords;
  gp.eta.mat = eta_mat;
  gp.proj_residual = residual;
  // u = exp(-i eta) g = exp(-h) g
  RVec neg(d.size());
  for (int j = 0; j < d.size(); ++j) neg(j) = std::exp(-half_log(j));
  gp.u = es.eigenvectors() * neg.asDiagonal() * es.eigenvectors().adjoint() * g;
  return gp;
}

GroupPoint group_point(const CompactGroup& group, const Mat& g, double tol) {
  return polar_decompose(group, g, tol);
}

ComplexAlgebraVector adjoint(const CompactGroup& group, const Mat& g, const ComplexAlgebraVector& zeta,
                             double tol) {
  Mat conj = g * zeta.mat() * g.inverse();
  // split into skew-Hermitian real part and i * skew-Hermitian imaginary part
  Mat re = 0.5 * (conj - conj.adjoint());
  Mat im = -Cplx(0, 1) * 0.5 * (conj + conj.adjoint());
  auto [re_v, r1] = group.project(re);
  auto [im_v, r2] = group.project(im);
  if (r1 > tol || r2 > tol)
    throw Error(ErrorCode::NotInComplexification, "adjoint image leaves the complexified algebra");
  re_v.mat = re;
  im_v.mat = im;
  return {re_v, im_v};
}

std::vector<AlgebraVector> lattice_enumerate(const CompactGroup& group, double radius) {
  if (group.preset != Preset::torus)
    throw Error(ErrorCode::UnsupportedPreset, "lattice enumeration requires a torus preset");
  const int d = static_cast<int>(group.torus_lattice.size());
  Eigen::MatrixXd gram(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) gram(a, b) = trace_inner(group.torus_lattice[a], group.torus_lattice[b]);
  Eigen::MatrixXd gram_inv = gram.inverse();

  std::vector<int> bound(d);
  for (int a = 0; a < d; ++a)
    bound[a] = static_cast<int>(std::floor(radius * std::sqrt(std::max(0.0, gram_inv(a, a))) + 1e-9));

  std::vector<AlgebraVector> out;
  std::vector<int> c(d, 0);
  auto emit = [&]() {
    Eigen::VectorXd cv(d);
    for (int a = 0; a < d; ++a) cv(a) = c[a];
    if (cv.isZero()) return;
    double len2 = cv.transpose() * gram * cv;
    if (len2 > radius * radius + 1e-9) return;
    Mat m = Mat::Zero(group.n, group.n);
    for (int a = 0; a < d; ++a) m += double(c[a]) * group.torus_lattice[a];
    if ((exp_scaled_skew(m, 1.0) - Mat::Identity(group.n, group.n)).norm() > 1e-8) return;
    auto [v, res] = group.project(m);
    v.mat = m;
    out.push_back(v);
  };
  // nested integer box walk
  std::function<void(int)> rec = [&](int a) {
    if (a == d) {
      emit();
      return;
    }
    for (c[a] = -bound[a]; c[a] <= bound[a]; ++c[a]) rec(a + 1);
  };
  rec(0);
  return out;
}

}  // namespace gitkit
