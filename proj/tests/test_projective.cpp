#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gitkit/projective.hpp"
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

const double kSqrt5 = std::sqrt(5.0);

}  // namespace

TEST_CASE("point normalization and distance") {
  CVec v(2);
  v << Cplx(0, 2), Cplx(2, 0);
  ProjectivePoint x = ProjectivePoint::make(v);
  CHECK(x.v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x.v(0).imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(x.v(0).real() > 0.0);
  // distance is phase-invariant
  ProjectivePoint y = ProjectivePoint::make(CVec(Cplx(0.3, -0.4) * v));
  CHECK(projective_distance(x, y) < 1e-7);
  CVec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK(projective_distance(ProjectivePoint::make(e1), ProjectivePoint::make(e2)) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("frozen moment values on the canonical weight-{1,2} instance") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  AlgebraVector mu = moment_map(x, t);
  // basis diag(i,2i)/sqrt5: <mu, e> = (-1 - 2)/(2 sqrt5)
  CHECK(mu.coords(0) == doctest::Approx(-3.0 / (2.0 * kSqrt5)).epsilon(1e-12));
  CHECK(moment_norm(x, t) == doctest::Approx(3.0 / (2.0 * kSqrt5)).epsilon(1e-12));
  // fixed point [e1] maps to the weight -1/sqrt5
  ProjectivePoint f1 = ProjectivePoint::make((CVec(2) << 1, 0).finished());
  CHECK(moment_map(f1, t).coords(0) == doctest::Approx(-1.0 / kSqrt5).epsilon(1e-12));
}

TEST_CASE("balanced instance has vanishing moment and gradient") {
  CompactGroup t = torus({{1}, {-1}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  CHECK(moment_norm(x, t) < 1e-14);
  CHECK(grad_f(x, t).rep.norm() < 1e-14);
}

TEST_CASE("moment map scales linearly in hbar") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x1 = ProjectivePoint::make((CVec(2) << 1, 1).finished(), 1.0);
  ProjectivePoint xh = ProjectivePoint::make((CVec(2) << 1, 1).finished(), 0.25);
  CHECK(moment_norm(xh, t) == doctest::Approx(0.25 * moment_norm(x1, t)).epsilon(1e-12));
}

TEST_CASE("kempf_ness_value at the identity and along scalings") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  CHECK(kempf_ness_value(x, Mat::Identity(2, 2)) == doctest::Approx(0.0).epsilon(1e-14));
  // g = diag(2, 2): g^-1 v has norm |v|/2
  CHECK(kempf_ness_value(x, Mat(2.0 * Mat::Identity(2, 2))) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("exact mu-weight on the canonical instance") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  AlgebraVector plus = t.from_coords((RVec(1) << 1.0).finished());
  AlgebraVector minus = t.from_coords((RVec(1) << -1.0).finished());
  // i*e = diag(-1,-2)/sqrt5: top supported eigenvalue is -1/sqrt5
  WeightReport wp = mu_weight(x, ComplexAlgebraVector{plus, t.zero()});
  CHECK(wp.weight == doctest::Approx(-1.0 / kSqrt5).epsilon(1e-12));
  WeightReport wm = mu_weight(x, ComplexAlgebraVector{minus, t.zero()});
  CHECK(wm.weight == doctest::Approx(2.0 / kSqrt5).epsilon(1e-12));
  // x_plus is the fixed point selected by the top supported eigenspace
  ProjectivePoint f1 = ProjectivePoint::make((CVec(2) << 1, 0).finished());
  CHECK(projective_distance(wp.x_plus, f1) < 1e-10);
}

TEST_CASE("simulated weight matches the exact weight") {
  auto rng = sample_rng(21, 0);
  CompactGroup t = torus({{1, 0}, {0, 1}, {-1, 1}});
  for (int i = 0; i < 20; ++i) {
    ProjectivePoint x = random_point(t, rng);
    AlgebraVector xi = random_unit_algebra(t, rng);
    ComplexAlgebraVector zeta{xi, t.zero()};
    double we = mu_weight(x, zeta, WeightMode::exact).weight;
    double ws = mu_weight(x, zeta, WeightMode::simulated).weight;
    CHECK(std::abs(we - ws) < 1e-6);
  }
}

TEST_CASE("finite-difference check of the gradient") {
  auto rng = sample_rng(22, 0);
  GroupSpec s;
  s.preset = Preset::full_unitary;
  s.n = 3;
  CompactGroup u3 = build_group(s);
  for (int i = 0; i < 10; ++i) {
    ProjectivePoint x = random_point(u3, rng);
    CVec hat = gauss_cvec(rng, 3);
    hat -= x.v.dot(hat) * x.v;
    double nh = hat.norm();
    auto f_at = [&](double t) {
      ProjectivePoint y =
          ProjectivePoint::make(std::cos(t * nh) * x.v + std::sin(t * nh) * (hat / nh), x.hbar);
      double m = moment_norm(y, u3);
      return 0.5 * m * m;
    };
    const double h = 1e-5;
    double fd = (f_at(h) - f_at(-h)) / (2 * h);
    double pairing = 2.0 * x.hbar * grad_f(x, u3).rep.dot(hat).real();
    CHECK(std::abs(fd - pairing) < 1e-5 * std::max(1.0, std::abs(pairing)));
  }
}

TEST_CASE("isotropy rank at torus fixed points and generic points") {
  CompactGroup t = torus({{1}, {2}});
  ProjectivePoint f1 = ProjectivePoint::make((CVec(2) << 1, 0).finished());
  IsotropyRank fixed = isotropy_rank(f1, t);
  CHECK(fixed.ker_real == 1);
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 1, 1).finished());
  IsotropyRank generic = isotropy_rank(x, t);
  CHECK(generic.ker_real == 0);
  CHECK(generic.sigma_min > 0.1);
}

TEST_CASE("weight quantization flag on lattice directions") {
  CompactGroup t = torus({{1}, {-1}});
  std::vector<AlgebraVector> lat = lattice_enumerate(t, 1.1 * 2 * std::numbers::pi * std::sqrt(2.0));
  ProjectivePoint x = ProjectivePoint::make((CVec(2) << 2, 1).finished());
  for (const AlgebraVector& xi : lat) {
    if (xi.norm() < 1e-10) continue;
    WeightReport rep = mu_weight(x, ComplexAlgebraVector{xi, t.zero()});
    REQUIRE(rep.quantized.has_value());
    CHECK(std::abs(rep.weight / (2 * std::numbers::pi * x.hbar) -
                   static_cast<double>(*rep.quantized)) < 1e-10);
  }
}
