#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gitkit/error.hpp"

namespace gitkit {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Real part of the trace form, <A,B> = Re tr(A* B).
inline double trace_inner(const Mat& a, const Mat& b) {
  return (a.adjoint() * b).trace().real();
}

inline Mat bracket(const Mat& a, const Mat& b) { return a * b - b * a; }

/// exp(z*s) for skew-Hermitian s, via the Hermitian eigendecomposition of i*s.
Mat exp_scaled_skew(const Mat& s, Cplx z);

/// General matrix exponential (Pade scaling-and-squaring).
Mat expm(const Mat& a);

/// Element of the Lie algebra g, stored both as coordinates in the group
/// basis and as the matrix realization.
struct AlgebraVector {
  RVec coords;
  Mat mat;

  double norm() const { return std::sqrt(std::max(0.0, trace_inner(mat, mat))); }
};

/// zeta = xi + i*eta in the complexified algebra g^c.
struct ComplexAlgebraVector {
  AlgebraVector re;
  AlgebraVector im;

  Mat mat() const { return re.mat + Cplx(0, 1) * im.mat; }
};

/// Element g of G^c with its cached polar data g = exp(i eta) u.
struct GroupPoint {
  Mat mat;
  AlgebraVector eta;
  Mat u;
  double proj_residual = 0.0;
};

enum class Preset { full_unitary, special_unitary, torus, custom };

/// Compact matrix group G in U(n) given by an orthonormal basis of its
/// Lie algebra under the trace form.
class CompactGroup {
 public:
  int n = 0;
  Preset preset = Preset::custom;
  std::vector<Mat> basis;
  Eigen::MatrixXi weight_matrix;      // torus presets: n x d integer weights
  std::vector<Mat> torus_lattice;     // torus presets: generators of Lambda in t

  int dim() const { return static_cast<int>(basis.size()); }

  AlgebraVector from_coords(const RVec& c) const;
  AlgebraVector zero() const { return from_coords(RVec::Zero(dim())); }

  /// Orthogonal projection of an arbitrary matrix onto span(basis).
  /// Returns the projected algebra element and the off-span residual.
  std::pair<AlgebraVector, double> project(const Mat& a) const;
};

struct GroupSpec {
  Preset preset = Preset::full_unitary;
  int n = 0;
  Eigen::MatrixXi weights;        // torus
  std::vector<Mat> custom_basis;  // custom
};

CompactGroup build_group(const GroupSpec& spec);

/// exp(t * (xi + i eta)) with certification that the result lies in G^c.
GroupPoint exp_element(const CompactGroup& group, const ComplexAlgebraVector& zeta, double t = 1.0);

/// g = exp(i eta) u with eta in g, u unitary. Throws NotInComplexification
/// when the polar part does not project into the group algebra.
GroupPoint polar_decompose(const CompactGroup& group, const Mat& g, double tol = 1e-6);

/// Wraps an already-certified matrix (e.g. a product of group points).
GroupPoint group_point(const CompactGroup& group, const Mat& g, double tol = 1e-6);

/// Ad_g zeta = g zeta g^{-1}, projected back into g^c.
ComplexAlgebraVector adjoint(const CompactGroup& group, const Mat& g, const ComplexAlgebraVector& zeta,
                             double tol = 1e-6);

/// All xi in Lambda with |xi| <= radius (torus presets only).
std::vector<AlgebraVector> lattice_enumerate(const CompactGroup& group, double radius);

}  // namespace gitkit
