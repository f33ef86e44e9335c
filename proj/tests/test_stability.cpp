#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gitkit/sampling.hpp"
#include "gitkit/stability.hpp"

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

CompactGroup full(int n) {
  GroupSpec s;
  s.preset = Preset::full_unitary;
  s.n = n;
  return build_group(s);
}

const double kM = 1.0 / std::sqrt(5.0);

}  // namespace

TEST_CASE("classify: canonical unstable instance") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  StabilityVerdict v = classify(x, t);
  CHECK(v.klass == StabilityClass::unstable);
  CHECK(v.m_estimate == doctest::Approx(kM).epsilon(1e-5));
  REQUIRE(v.xi_unit.has_value());
  CHECK(v.xi_unit->coords(0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("classify: stable, semistable, and polystable torus instances") {
  {
    StabilityVerdict v =
        classify(ProjectivePoint::make((CVec(2) << 1, 1).finished()), torus({{1}, {-1}}));
    CHECK(v.klass == StabilityClass::stable);
    CHECK(v.m_estimate < 1e-6);
    REQUIRE(v.x_zero.has_value());
  }
  {
    StabilityVerdict v =
        classify(ProjectivePoint::make((CVec(2) << 1, 1).finished()), torus({{1}, {0}}));
    CHECK(v.klass == StabilityClass::semistable);
    CHECK(v.m_estimate < 1e-5);
  }
  {
    CVec vec(3);
    vec << 1, 1, 0;
    StabilityVerdict v = classify(ProjectivePoint::make(vec), torus({{1, 0}, {-1, 0}, {0, 1}}));
    CHECK(v.klass == StabilityClass::polystable);
  }
}

TEST_CASE("classify is invariant under the complexified action") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  auto rng = sample_rng(51, 0);
  GroupPoint h = random_group_element(t, rng, 0.8);
  StabilityVerdict a = classify(x, t);
  StabilityVerdict b = classify(ProjectivePoint::make(h.mat * x.v, x.hbar), t);
  CHECK(a.klass == b.klass);
  CHECK(a.m_estimate == doctest::Approx(b.m_estimate).epsilon(1e-5));
}

TEST_CASE("mumford_function uses the exact torus oracle") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  MumfordValue mv = mumford_function(x, t);
  CHECK(mv.method == "torus-exact");
  CHECK(mv.m_mu == doctest::Approx(kM).epsilon(1e-10));
  REQUIRE(mv.argmax.has_value());
  double w = mu_weight(x, ComplexAlgebraVector{*mv.argmax, t.zero()}).weight;
  CHECK(w == doctest::Approx(-kM).epsilon(1e-9));
}

TEST_CASE("moment-weight audit: serial and parallel agree bit for bit") {
  CompactGroup u2 = full(2);
  auto rng = sample_rng(52, 0);
  ProjectivePoint x = random_point(u2, rng);
  AuditReport a = moment_weight_audit(x, u2, 400, 9, AuditMode::serial);
  AuditReport b = moment_weight_audit(x, u2, 400, 9, AuditMode::parallel);
  CHECK(a.samples == b.samples);
  CHECK(a.violations == b.violations);
  CHECK(a.worst_slack == b.worst_slack);
  CHECK(a.violations == 0);
  CHECK(a.worst_slack >= -1e-8);
}

TEST_CASE("orbit distance: zero on the same orbit, positive across orbits") {
  CompactGroup u2 = full(2);
  auto rng = sample_rng(53, 0);
  ProjectivePoint x = random_point(u2, rng);
  Mat u = exp_scaled_skew(random_unit_algebra(u2, rng).mat, Cplx(0.9, 0));
  ProjectivePoint y = ProjectivePoint::make(u * x.v, x.hbar);
  CHECK(orbit_distance_G(x, y, u2, 7) < 1e-7);
  // torus orbits of [1,1] and [1,0] in the {1,-1} weights are distinct
  CompactGroup t = torus({{1}, {-1}});
  ProjectivePoint a = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  ProjectivePoint b = ProjectivePoint::make((CVec(2) << 1, 0).finished());
  CHECK(orbit_distance_G(a, b, t, 7) > 0.1);
}

TEST_CASE("ness uniqueness audit on the canonical instance") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  auto rng = sample_rng(54, 0);
  std::vector<GroupPoint> hs;
  for (int k = 0; k < 3; ++k) hs.push_back(random_group_element(t, rng, 0.7));
  NessReport rep = ness_uniqueness_audit(x, t, hs, 3, 50);
  CHECK(rep.max_orbit_distance < 1e-5);
  CHECK(rep.max_mu_gap < 1e-8);
  CHECK(rep.worst_kirwan_slack >= -1e-8);
}

TEST_CASE("kempf uniqueness audit pulls back to one certificate") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  KempfReport rep = kempf_uniqueness_audit(x, t, 4, 5);
  CHECK(rep.starts == 4);
  CHECK(rep.max_pairwise < 1e-4);
  CHECK(rep.xi0.norm() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.xi0.coords(0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("ray profile rises to -m along the dominant direction") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  AlgebraVector xi = t.from_coords((RVec(1) << 1.0).finished());
  std::vector<double> prof = kempf_ness_ray_profile(x, t, xi, {1.0, 10.0, 100.0, 5000.0});
  // the profile is the scaled cumulant generating function of the supported
  // weights: nondecreasing in r with limit the top weight -m
  for (size_t k = 1; k < prof.size(); ++k) CHECK(prof[k] >= prof[k - 1] - 1e-12);
  CHECK(prof.back() == doctest::Approx(-kM).epsilon(1e-3));
}
