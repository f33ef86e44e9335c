#include "gitkit/toral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace gitkit {

namespace {

constexpr double kMergeTol = 1e-8;

struct BlockIndex {
  std::vector<int> offsets;  // start column of each block in the sorted basis
  std::vector<int> sizes;
};

BlockIndex block_index(const std::vector<int>& sizes) {
  BlockIndex bi;
  bi.sizes = sizes;
  int off = 0;
  for (int s : sizes) {
    bi.offsets.push_back(off);
    off += s;
  }
  return bi;
}

}  // namespace

std::pair<bool, ToralDecomposition> is_toral_generator(const ComplexAlgebraVector& zeta) {
  Mat z = zeta.mat();
  if (z.norm() < 1e-14) throw Error(ErrorCode::ZeroInput, "toral test requires zeta != 0");
  const int n = static_cast<int>(z.rows());

  Eigen::ComplexEigenSolver<Mat> es(Cplx(0, 1) * z);
  CVec lam = es.eigenvalues();
  Mat v = es.eigenvectors();

  ToralDecomposition dec;
  dec.imaginary_spectrum = true;
  for (int j = 0; j < n; ++j)
    if (std::abs(lam(j).imag()) > kMergeTol) dec.imaginary_spectrum = false;

  Eigen::JacobiSVD<Mat> svd(v);
  double cond = svd.singularValues()(0) / std::max(svd.singularValues()(n - 1), 1e-300);
  dec.semisimple = cond < 1e8;

  // sort eigenpairs by real part, merge within tolerance
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) { return lam(a).real() < lam(b).real(); });

  Mat vs(n, n);
  for (int j = 0; j < n; ++j) vs.col(j) = v.col(perm[j]);
  std::vector<double> merged;
  std::vector<int> sizes;
  for (int j = 0; j < n; ++j) {
    double l = lam(perm[j]).real();
    if (!merged.empty() && std::abs(l - merged.back() / sizes.back()) < kMergeTol) {
      merged.back() += l;
      sizes.back() += 1;
    } else {
      merged.push_back(l);
      sizes.push_back(1);
    }
  }
  dec.eigenvalues.resize(static_cast<int>(merged.size()));
  for (size_t k = 0; k < merged.size(); ++k) dec.eigenvalues(static_cast<int>(k)) = merged[k] / sizes[k];
  dec.block_sizes = sizes;
  dec.eigvecs = vs;
  dec.eigvecs_inv = vs.inverse();

  BlockIndex bi = block_index(sizes);
  for (size_t k = 0; k < sizes.size(); ++k) {
    Mat sel = Mat::Zero(n, n);
    for (int j = bi.offsets[k]; j < bi.offsets[k] + bi.sizes[k]; ++j) sel(j, j) = 1.0;
    dec.projectors.push_back(vs * sel * dec.eigvecs_inv);
  }
  return {dec.semisimple && dec.imaginary_spectrum, dec};
}

ParabolicLimit parabolic_limit(const ComplexAlgebraVector& zeta, const Mat& p, double tol) {
  auto [ok, dec] = is_toral_generator(zeta);
  if (!ok) throw Error(ErrorCode::NotToral, "zeta is not a toral generator");
  const int n = static_cast<int>(p.rows());
  Mat b = dec.eigvecs_inv * p * dec.eigvecs;
  BlockIndex bi = block_index(dec.block_sizes);
  const int k = static_cast<int>(dec.block_sizes.size());

  ParabolicLimit out;
  out.member = true;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) {
      // lambda_i > lambda_j: this block scales by exp((lambda_i-lambda_j)t)
      double nrm = b.block(bi.offsets[i], bi.offsets[j], bi.sizes[i], bi.sizes[j]).norm();
      if (nrm > tol) out.member = false;
    }
  }
  if (out.member) {
    Mat diag = Mat::Zero(n, n);
    for (int i = 0; i < k; ++i)
      diag.block(bi.offsets[i], bi.offsets[i], bi.sizes[i], bi.sizes[i]) =
          b.block(bi.offsets[i], bi.offsets[i], bi.sizes[i], bi.sizes[i]);
    out.p_plus = dec.eigvecs * diag * dec.eigvecs_inv;
  }
  return out;
}

MumfordReduction mumford_reduce(const CompactGroup& group, const ComplexAlgebraVector& zeta) {
  auto [ok, dec] = is_toral_generator(zeta);
  if (!ok) throw Error(ErrorCode::NotToral, "zeta is not a toral generator");
  const int n = group.n;

  // Orthonormalize the flag V_1, V_1+V_2, ... : QR of the grouped eigenbasis.
  Eigen::HouseholderQR<Mat> qr(dec.eigvecs);
  Mat q = qr.householderQ();
  // Fix column phases so that R has positive diagonal (irrelevant for spans).
  Mat r = q.adjoint() * dec.eigvecs;
  for (int j = 0; j < n; ++j) {
    Cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }

  RVec lam_per_col(n);
  {
    int col = 0;
    for (size_t k = 0; k < dec.block_sizes.size(); ++k)
      for (int s = 0; s < dec.block_sizes[k]; ++s) lam_per_col(col++) = dec.eigenvalues(static_cast<int>(k));
  }
  CVec diag(n);
  for (int j = 0; j < n; ++j) diag(j) = Cplx(0, -1) * lam_per_col(j);
  Mat xi_mat = q * diag.asDiagonal() * q.adjoint();

  auto [xi, residual] = group.project(xi_mat);
  if (residual > 1e-8)
    throw Error(ErrorCode::NotInComplexification, "reduced element leaves the group algebra");
  xi.mat = xi_mat;

  Mat p_mat = q * dec.eigvecs_inv;
  MumfordReduction out;
  out.xi = xi;
  out.p = group_point(group, p_mat);
  return out;
}

BorelDecomposition borel_decompose(const CompactGroup& group, const AlgebraVector& xi, const Mat& g) {
  if (xi.norm() < 1e-14) throw Error(ErrorCode::ZeroInput, "xi must be nonzero");
  const int n = group.n;
  Eigen::SelfAdjointEigenSolver<Mat> es(Cplx(0, 1) * xi.mat);
  Mat q = es.eigenvectors();  // increasing eigenvalue order

  Mat a = q.adjoint() * (g * g.adjoint()) * q;
  if (a.llt().info() != Eigen::Success) throw Error(ErrorCode::Singular, "g g* is not positive definite");

  // upper-triangular factor with positive diagonal: reverse, Cholesky, reverse
  Mat rev = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) rev(j, n - 1 - j) = 1.0;
  Mat ar = rev * a * rev;
  Eigen::LLT<Mat> llt(ar);
  Mat l = llt.matrixL();
  Mat p_tilde = rev * l * rev;  // upper triangular, p p* = a

  Mat p_mat = q * p_tilde * q.adjoint();
  Mat u = p_mat.inverse() * g;

  BorelDecomposition out;
  out.p = group_point(group, p_mat);
  if ((u * u.adjoint() - Mat::Identity(n, n)).norm() > 1e-8)
    throw Error(ErrorCode::NotInComplexification, "unitary factor certification failed");
  out.u = u;
  return out;
}

AppendixConstants beta_constants(int N) {
  if (N < 1) throw Error(ErrorCode::ValidationError, "N must be positive");
  // solve sum_{odd nu < 2N} z_nu exp(k nu pi i / 2N) = i for k = 1,3,...,2N-1
  Mat a(N, N);
  CVec rhs(N);
  const double pi = std::numbers::pi;
  for (int ki = 0; ki < N; ++ki) {
    int k = 2 * ki + 1;
    for (int ni = 0; ni < N; ++ni) {
      int nu = 2 * ni + 1;
      a(ki, ni) = std::exp(Cplx(0, 1) * (k * nu * pi / (2.0 * N)));
    }
    rhs(ki) = Cplx(0, 1);
  }
  CVec z = a.colPivHouseholderQr().solve(rhs);
  AppendixConstants out;
  out.N = N;
  out.values = RVec::Zero(2 * N);
  for (int ni = 0; ni < N; ++ni) {
    if (std::abs(z(ni).imag()) > 1e-10)
      throw Error(ErrorCode::ValidationError, "beta solve produced a non-real value");
    out.values(2 * ni + 1) = z(ni).real();
  }
  return out;
}

AppendixConstants alpha_constants(int N) {
  if (N < 2 || (N & (N - 1)) != 0)
    throw Error(ErrorCode::NotPowerOfTwo, "N must be a power of two >= 2");
  RVec alpha(4);
  alpha << 0.0, 0.5, 0.0, -0.5;
  int cur = 2;
  while (cur < N) {
    RVec beta = beta_constants(cur).values;
    RVec next = RVec::Zero(4 * cur);
    for (int nu = 0; nu < 4 * cur; ++nu) {
      double av = (nu < 2 * cur) ? alpha(nu) : alpha(nu - 2 * cur);
      double bv = (nu < 2 * cur) ? beta(nu) : -beta(nu - 2 * cur);
      next(nu) = 0.5 * (av + bv);
    }
    alpha = next;
    cur *= 2;
  }
  AppendixConstants out;
  out.N = N;
  out.values = alpha;
  return out;
}

ComplexAlgebraVector complete_to_parabolic(const CompactGroup& group, const AlgebraVector& xi,
                                           const AlgebraVector& eta) {
  const int n = group.n;
  if ((exp_scaled_skew(xi.mat, 1.0) - Mat::Identity(n, n)).norm() > 1e-8)
    throw Error(ErrorCode::NotInLattice, "exp(xi) != 1");

  Eigen::SelfAdjointEigenSolver<Mat> es(Cplx(0, 1) * xi.mat);
  const RVec& lam = es.eigenvalues();
  double span = (lam(n - 1) - lam(0)) / (2.0 * std::numbers::pi);
  int N = 2;
  while (N <= span) N *= 2;

  RVec alpha = alpha_constants(N).values;
  Mat zeta_mat = Cplx(0, 1) * eta.mat;
  for (int nu = 0; nu < 2 * N; ++nu) {
    if (alpha(nu) == 0.0) continue;
    Mat c_minus = exp_scaled_skew(xi.mat, -double(nu) / (2.0 * N));
    Mat c_plus = exp_scaled_skew(xi.mat, double(nu) / (2.0 * N));
    zeta_mat -= alpha(nu) * (c_minus * eta.mat * c_plus);
  }

  // certify zeta in p(xi): strictly-lower blocks vanish in the increasing eigenbasis
  {
    Mat b = es.eigenvectors().adjoint() * zeta_mat * es.eigenvectors();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lam(i) > lam(j) + 1e-8 && std::abs(b(i, j)) > 1e-8)
          throw Error(ErrorCode::ValidationError, "completion is not parabolic");
  }
  Mat diff = zeta_mat - Cplx(0, 1) * eta.mat;  // must lie in g
  auto [diff_v, res] = group.project(0.5 * (diff - diff.adjoint()));
  if (res > 1e-8 || (0.5 * (diff + diff.adjoint())).norm() > 1e-8)
    throw Error(ErrorCode::ValidationError, "zeta - i eta is not in g");

  Mat re = 0.5 * (zeta_mat - zeta_mat.adjoint());
  Mat im = -Cplx(0, 1) * 0.5 * (zeta_mat + zeta_mat.adjoint());
  auto [re_v, r1] = group.project(re);
  auto [im_v, r2] = group.project(im);
  re_v.mat = re;
  im_v.mat = im;
  return {re_v, im_v};
}

}  // namespace gitkit
