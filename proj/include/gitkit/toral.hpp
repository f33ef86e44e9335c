#pragma once

#include <optional>

#include "gitkit/lie_group.hpp"

namespace gitkit {

/// Spectral data of i*zeta for a (candidate) toral generator zeta.
/// Eigenvalues are merged within 1e-8 and listed strictly increasing;
/// projectors are the spectral projectors onto the merged eigenspaces
/// (Hermitian exactly when zeta is normal).
struct ToralDecomposition {
  RVec eigenvalues;
  std::vector<Mat> projectors;
  bool semisimple = false;
  bool imaginary_spectrum = false;
  // eigenbasis data: columns of eigvecs grouped by increasing eigenvalue
  Mat eigvecs;
  Mat eigvecs_inv;
  std::vector<int> block_sizes;
};

std::pair<bool, ToralDecomposition> is_toral_generator(const ComplexAlgebraVector& zeta);

/// Membership of p in the parabolic subgroup P(zeta) together with the
/// limit p^+ = lim exp(it zeta) p exp(-it zeta) when it exists.
struct ParabolicLimit {
  bool member = false;
  std::optional<Mat> p_plus;
};

ParabolicLimit parabolic_limit(const ComplexAlgebraVector& zeta, const Mat& p, double tol = 1e-8);

/// The unique element xi of g equivalent to zeta, with the conjugator
/// p in P(zeta) satisfying p zeta p^{-1} = xi.
struct MumfordReduction {
  AlgebraVector xi;
  GroupPoint p;
};

MumfordReduction mumford_reduce(const CompactGroup& group, const ComplexAlgebraVector& zeta);

/// g = p u with p block-upper-triangular in the increasing eigenbasis of
/// i*xi (positive diagonal blocks) and u in G.
struct BorelDecomposition {
  GroupPoint p;
  Mat u;
};

BorelDecomposition borel_decompose(const CompactGroup& group, const AlgebraVector& xi, const Mat& g);

/// The interpolation constants alpha_nu(N), beta_nu(N); values has 2N
/// entries, even indices exactly zero.
struct AppendixConstants {
  int N = 0;
  RVec values;
};

AppendixConstants beta_constants(int N);
AppendixConstants alpha_constants(int N);

/// Given xi in Lambda and eta in g, produce zeta in p(xi) with
/// zeta - i eta in g.
ComplexAlgebraVector complete_to_parabolic(const CompactGroup& group, const AlgebraVector& xi,
                                           const AlgebraVector& eta);

}  // namespace gitkit
