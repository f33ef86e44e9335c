#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gitkit/sampling.hpp"
#include "gitkit/toral.hpp"

using namespace gitkit;

namespace {

constexpr double kPi = std::numbers::pi;

CompactGroup full(int n) {
  GroupSpec s;
  s.preset = Preset::full_unitary;
  s.n = n;
  return build_group(s);
}

}  // namespace

TEST_CASE("beta constants: frozen small cases") {
  RVec b1 = beta_constants(1).values;
  CHECK(b1.size() == 2);
  CHECK(b1(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(b1(1) == doctest::Approx(1.0).epsilon(1e-12));
  RVec b2 = beta_constants(2).values;
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(b2(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(b2(1) == doctest::Approx(s).epsilon(1e-12));
  CHECK(b2(2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(b2(3) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("beta constants: defining identity for odd k") {
  for (int N : {1, 2, 3, 4, 7, 16}) {
    RVec b = beta_constants(N).values;
    for (int k = 1; k < 4 * N; k += 2) {
      Cplx sum = 0.0;
      for (int nu = 0; nu < 2 * N; ++nu)
        sum += b(nu) * std::exp(Cplx(0, 1) * (k * nu * kPi / (2.0 * N)));
      Cplx target = (k < 2 * N) ? Cplx(0, 1) : Cplx(0, -1);
      CHECK(std::abs(sum - target) < 1e-10);
    }
  }
}

TEST_CASE("alpha constants: N=2 is exactly (0, 1/2, 0, -1/2)") {
  RVec a = alpha_constants(2).values;
  CHECK(a(0) == 0.0);
  CHECK(a(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a(2) == 0.0);
  CHECK(a(3) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("alpha constants: defining identity") {
  for (int N : {2, 4, 8, 32}) {
    RVec a = alpha_constants(N).values;
    for (int k = 0; k < 2 * N; ++k) {
      Cplx sum = 0.0;
      for (int nu = 0; nu < 2 * N; ++nu)
        sum += a(nu) * std::exp(Cplx(0, 1) * (k * nu * kPi / N));
      Cplx target = (k == 0 || k == N) ? Cplx(0, 0) : (k < N ? Cplx(0, 1) : Cplx(0, -1));
      CHECK(std::abs(sum - target) < 1e-10);
    }
  }
}

TEST_CASE("alpha constants reject invalid N") {
  CHECK_THROWS_AS(alpha_constants(3), Error);
  CHECK_THROWS_AS(alpha_constants(0), Error);
}

TEST_CASE("toral generator detection") {
  CompactGroup u2 = full(2);
  Mat xi(2, 2);
  xi << Cplx(0, 1), 0, 0, Cplx(0, -1);
  auto [ok, dec] = is_toral_generator(ComplexAlgebraVector{u2.project(xi).first, u2.zero()});
  CHECK(ok);
  CHECK(dec.semisimple);
  CHECK(dec.imaginary_spectrum);
  CHECK(dec.eigenvalues.size() == 2);
  CHECK(dec.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(dec.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parabolic membership for diag(i,-i)") {
  CompactGroup u2 = full(2);
  Mat xim(2, 2);
  xim << Cplx(0, 1), 0, 0, Cplx(0, -1);
  AlgebraVector xi = u2.project(xim).first;
  ComplexAlgebraVector zeta{xi, u2.zero()};
  // i*zeta = diag(-1, 1): the parabolic is upper triangular
  Mat p(2, 2);
  p << 1, 2, 0, 3;
  ParabolicLimit lim = parabolic_limit(zeta, p);
  CHECK(lim.member);
  REQUIRE(lim.p_plus.has_value());
  CHECK(std::abs((*lim.p_plus)(0, 0) - Cplx(1, 0)) < 1e-10);
  CHECK(std::abs((*lim.p_plus)(1, 1) - Cplx(3, 0)) < 1e-10);
  CHECK(std::abs((*lim.p_plus)(0, 1)) < 1e-10);
  Mat q(2, 2);
  q << 1, 0, 2, 1;
  CHECK_FALSE(parabolic_limit(zeta, q).member);
}

TEST_CASE("mumford_reduce on a frozen triangular conjugate") {
  CompactGroup u2 = full(2);
  const double s = 1.0 / std::sqrt(2.0);
  Mat zmat(2, 2);
  zmat << Cplx(0, s), Cplx(0, -2 * s), 0, Cplx(0, -s);  // p diag(i,-i)/sqrt2 p^-1, p=[[1,1],[0,1]]
  Mat re = 0.5 * (zmat - zmat.adjoint());
  Mat im = -Cplx(0, 1) * 0.5 * (zmat + zmat.adjoint());
  ComplexAlgebraVector zeta{u2.project(re).first, u2.project(im).first};
  MumfordReduction mr = mumford_reduce(u2, zeta);
  Eigen::SelfAdjointEigenSolver<Mat> es(Cplx(0, 1) * mr.xi.mat);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-s).epsilon(1e-10));
  CHECK(es.eigenvalues()(1) == doctest::Approx(s).epsilon(1e-10));
  // the conjugator realizes the reduction and lies in P(zeta)
  Mat back = mr.p.mat * zeta.mat() * mr.p.mat.inverse();
  CHECK((back - mr.xi.mat).norm() < 1e-9);
  CHECK(parabolic_limit(zeta, mr.p.mat).member);
}

TEST_CASE("borel decomposition round trip") {
  CompactGroup u3 = full(3);
  auto rng = sample_rng(11, 0);
  for (int i = 0; i < 10; ++i) {
    AlgebraVector xi = random_unit_algebra(u3, rng);
    GroupPoint g = random_group_element(u3, rng, 1.0);
    BorelDecomposition bd = borel_decompose(u3, xi, g.mat);
    CHECK((bd.p.mat * bd.u - g.mat).norm() < 1e-9 * g.mat.norm());
    CHECK((bd.u * bd.u.adjoint() - Mat::Identity(3, 3)).norm() < 1e-9);
    CHECK(parabolic_limit(ComplexAlgebraVector{xi, u3.zero()}, bd.p.mat).member);
  }
}

TEST_CASE("complete_to_parabolic") {
  CompactGroup u2 = full(2);
  Mat xim(2, 2);
  xim << Cplx(0, 2 * kPi), 0, 0, Cplx(0, -2 * kPi);
  AlgebraVector xi = u2.project(xim).first;
  auto rng = sample_rng(13, 0);
  for (int i = 0; i < 5; ++i) {
    AlgebraVector eta = random_unit_algebra(u2, rng);
    ComplexAlgebraVector zeta = complete_to_parabolic(u2, xi, eta);
    // zeta - i eta lies in g: its imaginary part equals eta
    CHECK((zeta.im.coords - eta.coords).norm() < 1e-9);
    ParabolicLimit lim =
        parabolic_limit(ComplexAlgebraVector{xi, u2.zero()}, expm(zeta.mat()));
    CHECK(lim.member);
  }
}
