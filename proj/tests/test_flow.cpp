#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gitkit/flow.hpp"
#include "gitkit/sampling.hpp"

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

const double kM = 1.0 / std::sqrt(5.0);  // nearest-point distance of the canonical instance

}  // namespace

TEST_CASE("canonical unstable flow: |mu| decreases to m and xi(t)/t converges") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  FlowTrajectory traj = integrate_flow(x, t);
  CHECK(traj.converged);
  for (size_t k = 1; k < traj.mu_norms.size(); ++k)
    CHECK(traj.mu_norms[k] <= traj.mu_norms[k - 1] + 1e-9);
  CHECK(traj.mu_norms.back() == doctest::Approx(kM).epsilon(1e-6));
  CHECK(traj.max_conjugacy_drift < 1e-6);

  DominantWeight dw = dominant_weight(traj, t);
  CHECK(dw.xi_inf.norm() == doctest::Approx(kM).epsilon(1e-4));
  // destabilizing direction: +e in coordinates
  CHECK(dw.xi_unit.coords(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("flow limit on the canonical instance is the fixed point [e1]") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  FlowTrajectory traj = integrate_flow(x, t);
  FlowLimit lim = flow_limit(traj);
  ProjectivePoint f1 = ProjectivePoint::make((CVec(2) << 1, 0).finished());
  CHECK(projective_distance(lim.x_inf, f1) < 1e-5);
  CHECK(lim.m == doctest::Approx(kM).epsilon(1e-5));
}

TEST_CASE("stable instance flows to a zero of mu") {
  CompactGroup t = torus({{1}, {-1}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 2, 1).finished());
  FlowTrajectory traj = integrate_flow(x, t);
  CHECK(traj.converged);
  CHECK(traj.mu_norms.back() < 1e-9);
  // the zero is the balanced configuration |v1| = |v2|
  const CVec& v = traj.points.back().v;
  CHECK(std::abs(v(0)) == doctest::Approx(std::abs(v(1))).epsilon(1e-7));
}

TEST_CASE("critical start: flow stays put and the fallback certificate works") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint f1 = ProjectivePoint::make((CVec(2) << 1, 0).finished());
  FlowTrajectory traj = integrate_flow(f1, t);
  CHECK(traj.converged);
  CHECK(projective_distance(traj.points.back(), f1) < 1e-9);
  DominantWeight dw = dominant_weight(traj, t);
  // xi(t) = -t mu(x0): direction -mu, norm |mu| = 1/sqrt5
  CHECK(dw.xi_inf.norm() == doctest::Approx(kM).epsilon(1e-10));
  CHECK(dw.xi_unit.coords(0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lifted path reproduces the trajectory: x(t) = g(t)^{-1} x0") {
  GroupSpec s;
  s.preset = Preset::full_unitary;
  s.n = 2;
  CompactGroup u2 = build_group(s);
  auto rng = sample_rng(31, 0);
  ProjectivePoint x = random_point(u2, rng);
  FlowOptions fo;
  fo.fixed_step = 0.01;
  fo.t_max = 2.0;
  fo.tol_grad = 1e-14;
  FlowTrajectory traj = integrate_flow(x, u2, fo);
  for (size_t k = 0; k < traj.times.size(); k += 20) {
    ProjectivePoint lifted =
        ProjectivePoint::make(traj.g_path[k].partialPivLu().solve(x.v), x.hbar);
    CHECK(projective_distance(lifted, traj.points[k]) < 1e-6);
  }
}

TEST_CASE("fixed-step sampling and validation") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  FlowOptions fo;
  fo.fixed_step = 0.25;
  fo.t_max = 2.0;
  fo.tol_grad = 1e-14;
  FlowTrajectory traj = integrate_flow(x, t, fo);
  REQUIRE(traj.times.size() >= 9);
  for (size_t k = 1; k <= 8; ++k)
    CHECK(traj.times[k] == doctest::Approx(0.25 * k).epsilon(1e-12));
  FlowOptions bad;
  bad.t_max = -1.0;
  CHECK_THROWS_AS(integrate_flow(x, t, bad), Error);
}

TEST_CASE("lojasiewicz fit reports a sane exponential rate on a stable instance") {
  CompactGroup t = torus({{1}, {-1}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 3, 1).finished());
  FlowOptions fo;
  fo.fixed_step = 0.05;
  fo.t_max = 40.0;
  fo.tol_grad = 1e-13;
  FlowTrajectory traj = integrate_flow(x, t, fo);
  FlowTrajectory::RateFit fit = lojasiewicz_fit(traj);
  CHECK_FALSE(fit.degenerate);
  CHECK(fit.c > 0.0);
}
