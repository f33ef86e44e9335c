#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gitkit/sampling.hpp"
#include "gitkit/torus_geometry.hpp"

using namespace gitkit;

namespace {

CompactGroup torus(std::vector<std::vector<int>> w) {
  GroupSpec s;
  s.preset = Preset::torus;
  s.n = static_cast<int>(w.size());
  s.weights.resize(s.n, static_cast<int>(w[0].size()));
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.weights.cols(); ++c) s.weights(r, c) = w[r][c];
  return build_group(s);
}

RVec rv(std::initializer_list<double> xs) {
  RVec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("nearest point: frozen small cases") {
  auto [p1, n1] = nearest_point({rv({1, 0}), rv({0, 1})});
  CHECK((p1 - rv({0.5, 0.5})).norm() < 1e-12);
  CHECK(n1 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  auto [p2, n2] = nearest_point({rv({1, 1}), rv({2, 1})});
  CHECK((p2 - rv({1, 1})).norm() < 1e-10);
  CHECK(n2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

  auto [p3, n3] = nearest_point({rv({-1}), rv({2})});
  CHECK(n3 < 1e-10);
  (void)p3;
}

TEST_CASE("nearest point agrees with the exhaustive oracle") {
  for (int trial = 0; trial < 100; ++trial) {
    auto rng = sample_rng(41, trial);
    int k = 2 + static_cast<int>(rng() % 8);
    int d = 1 + static_cast<int>(rng() % 3);
    std::vector<RVec> pts;
    for (int j = 0; j < k; ++j) pts.push_back(gauss_vec(rng, d));
    auto [pa, na] = nearest_point(pts);
    auto [pb, nb] = nearest_point_exhaustive(pts);
    CHECK(std::abs(na - nb) < 1e-9);
    // variational characterization
    for (const RVec& p : pts) CHECK(pa.dot(p - pa) > -1e-9);
    (void)pb;
  }
}

TEST_CASE("canonical instance: outside, m = 1/sqrt5, certificate direction +1") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  TorusVerdict v = torus_classify(t, x);
  CHECK(v.klass == StabilityClass::unstable);
  CHECK(v.m == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(v.polytope.contains_zero == ZeroLocation::outside);
  CHECK(v.eta_star(0) == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-10));
  REQUIRE(v.xi_unit.has_value());
  CHECK(v.xi_unit->coords(0) == doctest::Approx(1.0).epsilon(1e-10));
  // both weights are vertices of the segment
  REQUIRE(v.polytope.vertices.size() == 2);
}

TEST_CASE("full-support {1,-1} instance is stable") {
  CompactGroup t = torus({{1}, {-1}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  TorusVerdict v = torus_classify(t, x);
  CHECK(v.klass == StabilityClass::stable);
  CHECK(v.m == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.polytope.contains_zero == ZeroLocation::relative_interior);
  CHECK(v.polytope.affine_dim == 1);
}

TEST_CASE("zero weight on the hull boundary gives semistable") {
  CompactGroup t = torus({{1}, {0}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  TorusVerdict v = torus_classify(t, x);
  CHECK(v.klass == StabilityClass::semistable);
  CHECK(v.polytope.contains_zero == ZeroLocation::boundary);
  CHECK(v.m == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("restricted support selects a sub-polytope") {
  CompactGroup t = torus({{1}, {-1}});
  // support only the first coordinate: hull is the single weight -1/sqrt2
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 0).finished());
  TorusVerdict v = torus_classify(t, x);
  CHECK(v.klass == StabilityClass::unstable);
  CHECK(v.m == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("lower-dimensional relative interior: polystable but not stable") {
  CompactGroup t = torus({{1, 0}, {-1, 0}, {0, 1}});
  CVec v(3);
  v << 1, 1, 0;  // support spans only the first weight axis
  TorusVerdict verdict = torus_classify(t, ProjectivePoint::make(v));
  CHECK(verdict.klass == StabilityClass::polystable);
  CHECK(verdict.polytope.contains_zero == ZeroLocation::relative_interior);
  CHECK(verdict.polytope.affine_dim < t.dim());
}

TEST_CASE("hbar scales the polytope and m") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished(), 0.5);
  TorusVerdict v = torus_classify(t, x);
  CHECK(v.m == doctest::Approx(0.5 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("torus_classify rejects non-torus presets") {
  GroupSpec s;
  s.preset = Preset::full_unitary;
  s.n = 2;
  CompactGroup u2 = build_group(s);
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  CHECK_THROWS_AS(torus_classify(u2, x), Error);
}
