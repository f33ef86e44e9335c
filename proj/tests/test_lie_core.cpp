#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gitkit/lie_group.hpp"
#include "gitkit/sampling.hpp"

using namespace gitkit;

namespace {

CompactGroup full(int n) {
  GroupSpec s;
  s.preset = Preset::full_unitary;
  s.n = n;
  return build_group(s);
}

CompactGroup torus(std::vector<std::vector<int>> w) {
  GroupSpec s;
  s.preset = Preset::torus;
  s.n = static_cast<int>(w.size());
  s.weights.resize(s.n, static_cast<int>(w[0].size()));
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.weights.cols(); ++c) s.weights(r, c) = w[r][c];
  return build_group(s);
}

}  // namespace

TEST_CASE("preset dimensions and orthonormal bases") {
  CompactGroup u2 = full(2);
  CHECK(u2.dim() == 4);
  GroupSpec ss;
  ss.preset = Preset::special_unitary;
  ss.n = 2;
  CompactGroup su2 = build_group(ss);
  CHECK(su2.dim() == 3);
  CompactGroup t = torus({{1}, {2}});
  CHECK(t.dim() == 1);
  for (const CompactGroup* g : {&u2, &su2, &t})
    for (int a = 0; a < g->dim(); ++a) {
      CHECK((g->basis[a] + g->basis[a].adjoint()).norm() == doctest::Approx(0.0).epsilon(1e-12));
      for (int b = 0; b < g->dim(); ++b)
        CHECK(trace_inner(g->basis[a], g->basis[b]) ==
              doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    }
  // su(2) is traceless
  for (const Mat& e : su2.basis) CHECK(std::abs(e.trace()) < 1e-12);
}

TEST_CASE("canonical torus basis is diag(i,2i)/sqrt(5)") {
  CompactGroup t = torus({{1}, {2}});
  const double s = 1.0 / std::sqrt(5.0);
  CHECK(std::abs(t.basis[0](0, 0) - Cplx(0, s)) < 1e-14);
  CHECK(std::abs(t.basis[0](1, 1) - Cplx(0, 2 * s)) < 1e-14);
}

TEST_CASE("exp_scaled_skew matches the Pade exponential") {
  auto rng = sample_rng(3, 0);
  CompactGroup u3 = full(3);
  for (int i = 0; i < 20; ++i) {
    AlgebraVector xi = random_unit_algebra(u3, rng);
    Cplx z(1.2, -0.7);
    CHECK((exp_scaled_skew(xi.mat, z) - expm(Mat(z * xi.mat))).norm() < 1e-11);
  }
}

TEST_CASE("polar decomposition round trip with a frozen example") {
  CompactGroup u2 = full(2);
  Mat eta_mat(2, 2);
  eta_mat << Cplx(0, 0.3), Cplx(0.1, 0.2), Cplx(-0.1, 0.2), Cplx(0, -0.5);
  AlgebraVector eta = u2.project(eta_mat).first;
  Mat u_mat(2, 2);
  u_mat << Cplx(0, 1), 0, 0, Cplx(0.6, 0.8);
  Mat g = exp_scaled_skew(eta.mat, Cplx(0, 1)) * u_mat;
  GroupPoint p = polar_decompose(u2, g);
  CHECK((p.eta.coords - eta.coords).norm() < 1e-10);
  CHECK((p.u - u_mat).norm() < 1e-10);
  CHECK((p.mat - g).norm() < 1e-10);
}

TEST_CASE("polar decomposition rejects matrices outside the complexification") {
  CompactGroup t = torus({{1}, {-1}});
  Mat g(2, 2);
  g << 1, 1, 0, 1;  // off-diagonal: not in the complexified torus
  CHECK_THROWS_AS(polar_decompose(t, g), Error);
}

TEST_CASE("adjoint preserves norms and certifies membership") {
  auto rng = sample_rng(5, 0);
  CompactGroup u3 = full(3);
  for (int i = 0; i < 20; ++i) {
    AlgebraVector xi = random_unit_algebra(u3, rng);
    AlgebraVector eta = random_unit_algebra(u3, rng);
    Mat u = exp_scaled_skew(random_unit_algebra(u3, rng).mat, Cplx(1.0, 0));
    ComplexAlgebraVector az = adjoint(u3, u, ComplexAlgebraVector{xi, eta});
    CHECK(az.re.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(az.im.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("lattice of the {1,-1} torus is generated at norm 2 pi sqrt(2)") {
  CompactGroup t = torus({{1}, {-1}});
  const double gen = 2.0 * std::numbers::pi * std::sqrt(2.0);
  std::vector<AlgebraVector> lat = lattice_enumerate(t, 1.1 * gen);
  int nonzero = 0;
  for (const AlgebraVector& xi : lat) {
    CHECK((exp_scaled_skew(xi.mat, 1.0) - Mat::Identity(2, 2)).norm() < 1e-9);
    if (xi.norm() > 1e-10) {
      ++nonzero;
      CHECK(xi.norm() == doctest::Approx(gen).epsilon(1e-10));
    }
  }
  CHECK(nonzero == 2);
}

TEST_CASE("deterministic per-sample rng") {
  auto a = sample_rng(42, 17);
  auto b = sample_rng(42, 17);
  auto c = sample_rng(42, 18);
  CHECK(a() == b());
  CHECK(a() != c());
}
