#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gitkit/sampling.hpp"
#include "gitkit/symmetric_space.hpp"

using namespace gitkit;

namespace {

CompactGroup full(int n) {
  GroupSpec s;
  s.preset = Preset::full_unitary;
  s.n = n;
  return build_group(s);
}

}  // namespace

TEST_CASE("distance from the base point is the norm of the chart coordinate") {
  CompactGroup u2 = full(2);
  auto rng = sample_rng(61, 0);
  CosetPoint base{u2.zero()};
  for (int i = 0; i < 10; ++i) {
    AlgebraVector eta = random_unit_algebra(u2, rng);
    std::uniform_real_distribution<double> unif(0.1, 3.0);
    double r = unif(rng);
    CosetPoint p{u2.from_coords(RVec(r * eta.coords))};
    CHECK(coset_distance(u2, base, p) == doctest::Approx(r).epsilon(1e-9));
  }
}

TEST_CASE("geodesics through commuting directions are straight lines") {
  CompactGroup u2 = full(2);
  Mat d(2, 2);
  d << Cplx(0, 1), 0, 0, Cplx(0, -2);
  AlgebraVector eta = u2.project(d).first;
  CosetPoint base{u2.zero()}, tip{eta};
  CosetPoint mid = geodesic_point(u2, base, tip, 0.5);
  CHECK((mid.eta.coords - 0.5 * eta.coords).norm() < 1e-9);
  CHECK(coset_distance(u2, base, mid) == doctest::Approx(0.5 * eta.norm()).epsilon(1e-9));
  CHECK(coset_distance(u2, mid, tip) == doctest::Approx(0.5 * eta.norm()).epsilon(1e-9));
}

TEST_CASE("u(2) curvature benchmark: K = -2 on the standard plane") {
  CompactGroup u2 = full(2);
  Mat m1(2, 2), m2(2, 2);
  m1 << 0, Cplx(0, 1), Cplx(0, 1), 0;
  m2 << 0, 1, -1, 0;
  AlgebraVector e1 = u2.project(m1).first;
  AlgebraVector e2 = u2.project(m2).first;
  CurvatureResult cr = curvature_operator(u2, e1, e2, e1);
  CHECK(cr.sectional == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("sectional curvature is nonpositive and vanishes on commuting planes") {
  CompactGroup u3 = full(3);
  auto rng = sample_rng(62, 0);
  for (int i = 0; i < 50; ++i) {
    AlgebraVector a = random_unit_algebra(u3, rng);
    AlgebraVector b = random_unit_algebra(u3, rng);
    if (std::abs(a.coords.dot(b.coords)) > 0.99) continue;
    CHECK(curvature_operator(u3, a, b, a).sectional <= 1e-12);
  }
  Mat d1(3, 3), d2(3, 3);
  d1.setZero();
  d2.setZero();
  d1.diagonal() << Cplx(0, 1), Cplx(0, -1), 0;
  d2.diagonal() << 0, Cplx(0, 1), Cplx(0, -1);
  CHECK(std::abs(curvature_operator(u3, u3.project(d1).first, u3.project(d2).first,
                                    u3.project(d1).first)
                     .sectional) < 1e-12);
}

TEST_CASE("curvature rejects degenerate planes") {
  CompactGroup u2 = full(2);
  auto rng = sample_rng(63, 0);
  AlgebraVector a = random_unit_algebra(u2, rng);
  CHECK_THROWS_AS(curvature_operator(u2, a, a, a), Error);
}

TEST_CASE("covariant derivative vanishes along geodesics") {
  CompactGroup u2 = full(2);
  auto rng = sample_rng(64, 0);
  AlgebraVector eta = random_unit_algebra(u2, rng);
  const double h = 0.01;
  std::vector<Mat> g_path;
  std::vector<AlgebraVector> field;
  for (int k = 0; k <= 40; ++k) {
    g_path.push_back(exp_scaled_skew(eta.mat, Cplx(0, k * h)));
    field.push_back(eta);  // the velocity field of the geodesic
  }
  for (int k = 5; k <= 35; k += 10) {
    CosetTangent cd = covariant_derivative(u2, g_path, field, h, k);
    CHECK(cd.eta_dot.norm() < 1e-7);
  }
}

TEST_CASE("circumcenter of two points is the midpoint") {
  CompactGroup u2 = full(2);
  auto rng = sample_rng(65, 0);
  AlgebraVector a = random_unit_algebra(u2, rng);
  AlgebraVector b = random_unit_algebra(u2, rng);
  CosetPoint p{u2.from_coords(RVec(1.2 * a.coords))};
  CosetPoint q{u2.from_coords(RVec(-0.8 * b.coords))};
  Circumcenter cc = circumcenter(u2, {p, q});
  double d = coset_distance(u2, p, q);
  CHECK(cc.radius == doctest::Approx(0.5 * d).epsilon(1e-8));
  CHECK(coset_distance(u2, cc.center, p) == doctest::Approx(0.5 * d).epsilon(1e-7));
  CHECK(coset_distance(u2, cc.center, q) == doctest::Approx(0.5 * d).epsilon(1e-7));
}

TEST_CASE("circumcenter of a noncommuting triple is certified") {
  CompactGroup u2 = full(2);
  auto rng = sample_rng(66, 0);
  std::vector<CosetPoint> pts;
  for (int k = 0; k < 3; ++k)
    pts.push_back(CosetPoint{u2.from_coords(RVec(0.9 * random_unit_algebra(u2, rng).coords))});
  Circumcenter cc = circumcenter(u2, pts);
  CHECK(cc.certified);
  double maxd = 0.0;
  for (const CosetPoint& p : pts) maxd = std::max(maxd, coset_distance(u2, cc.center, p));
  CHECK(cc.radius == doctest::Approx(maxd).epsilon(1e-7));
}

TEST_CASE("cartan fixed point of a conjugated involution") {
  CompactGroup u2 = full(2);
  Mat h(2, 2), invol(2, 2);
  h << 2, 1, 0, 1;
  invol << 1, 0, 0, -1;
  Mat g0 = h * invol * h.inverse();
  CartanFixedPoint fp = cartan_fixed_point(u2, {polar_decompose(u2, g0)});
  CHECK(fp.elements.size() == 2);  // {1, g0}
  CHECK(fp.max_displacement < 1e-6);
  CHECK(fp.conjugation_residual < 1e-6);
}

TEST_CASE("cartan fixed point of a conjugated rotation subgroup") {
  CompactGroup u2 = full(2);
  double c = std::cos(2 * std::numbers::pi / 3), s = std::sin(2 * std::numbers::pi / 3);
  Mat h(2, 2), rot(2, 2);
  h << 3, 1, 0, 1;
  rot << c, -s, s, c;
  Mat g1 = h * rot * h.inverse();
  CartanFixedPoint fp = cartan_fixed_point(u2, {polar_decompose(u2, g1)});
  CHECK(fp.elements.size() == 3);
  CHECK(fp.max_displacement < 1e-6);
  CHECK(fp.conjugation_residual < 1e-6);
}
