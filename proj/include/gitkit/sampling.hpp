#pragma once

#include <cstdint>
#include <random>

#include "gitkit/lie_group.hpp"
#include "gitkit/projective.hpp"

namespace gitkit {

/// Deterministic per-sample generator: identical streams regardless of how
/// the sample loop is scheduled across threads.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

inline RVec gauss_vec(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RVec v(d);
  for (int a = 0; a < d; ++a) v(a) = gauss(rng);
  return v;
}

inline CVec gauss_cvec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec v(n);
  for (int j = 0; j < n; ++j) v(j) = Cplx(gauss(rng), gauss(rng));
  return v;
}

inline AlgebraVector random_unit_algebra(const CompactGroup& group, std::mt19937_64& rng) {
  RVec c = gauss_vec(rng, group.dim());
  while (c.norm() < 1e-12) c = gauss_vec(rng, group.dim());
  c.normalize();
  return group.from_coords(c);
}

inline ProjectivePoint random_point(const CompactGroup& group, std::mt19937_64& rng,
                                    double hbar = 1.0) {
  CVec v = gauss_cvec(rng, group.n);
  while (v.norm() < 1e-12) v = gauss_cvec(rng, group.n);
  return ProjectivePoint::make(v, hbar);
}

/// g = exp(i eta) exp(xi) with |eta| <= eta_scale: a bounded-polar-part
/// element of G^c.
inline GroupPoint random_group_element(const CompactGroup& group, std::mt19937_64& rng,
                                       double eta_scale = 1.0) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  AlgebraVector eta = random_unit_algebra(group, rng);
  AlgebraVector xi = random_unit_algebra(group, rng);
  double r = eta_scale * unif(rng);
  double s = 3.14159265358979323846 * unif(rng);
  Mat g = exp_scaled_skew(eta.mat, Cplx(0, r)) * exp_scaled_skew(xi.mat, Cplx(s, 0));
  return group_point(group, g);
}

}  // namespace gitkit
