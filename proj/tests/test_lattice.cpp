#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "surfstate/errors.hpp"
#include "surfstate/lattice.hpp"

using namespace surfstate;
using oracle::pi;

TEST_CASE("potential: direct substitution at theta = 0") {
  CHECK(potential(LatticeParams(0.1, 0.0, 0), 0.0) == doctest::Approx(0.18).epsilon(1e-15));
}

TEST_CASE("potential: matches independent long double evaluation") {
  const long double eta = 0.3L, delta = 0.2L, x = pi / 2;
  const long double expected = -2 * eta * eta * std::cos(2 * x) +
                               2 * eta * std::sqrt(1.0L + delta * delta) * std::cos(x + std::atan(delta));
  CHECK(std::abs(potential(LatticeParams(0.3, 0.2, 0), pi / 2) - static_cast<double>(expected)) < 1e-15);
}

TEST_CASE("potential: periodicity and parity on random inputs") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const LatticeParams p(0.5 * u(rng), 2.0 * u(rng), i % 5);
    const double x = 20.0 * u(rng);
    CHECK(std::abs(potential(p, x) - potential(p, x + 2 * pi)) < 1e-12);
    CHECK(std::abs(potential(p.mirrored(), -x) - potential(p, x)) < 1e-12);
    CHECK(std::abs(potential(p, x) - oracle::lattice_v(p.eta(), p.delta(), p.order(), x)) < 1e-13);
  }
}

TEST_CASE("family relation holds by construction") {
  const LatticeParams p(0.2, 0.7, 3);
  CHECK(p.n1p() == doctest::Approx(0.08));
  CHECK(p.n2p() * std::cos(p.theta()) == doctest::Approx(std::sqrt(2.0 * p.n1p()) * 4.0));
  CHECK(p.negated() == LatticeParams(-0.2, -0.7, 3));
  CHECK_THROWS_AS(LatticeParams(0.1, 0.1, -1), std::invalid_argument);
  CHECK_THROWS_AS(LatticeParams(NAN, 0.1, 0), std::invalid_argument);
}

TEST_CASE("to_physical: experimental example") {
  const auto phys = to_physical(LatticeParams(0.3, 0.2, 0), 980e-9, 1.518, 8e-6);
  CHECK(std::abs(phys.amp1 / 2.2e-4 - 1.0) < 0.02);
  CHECK(std::abs(phys.amp2 / 7.6e-4 - 1.0) < 0.02);
  CHECK(phys.phase == doctest::Approx(std::atan(0.2)).epsilon(1e-15));
}

TEST_CASE("to_physical: zero amplitude and formula recomputation") {
  const auto zero = to_physical(LatticeParams(0.0, 0.3, 0), 980e-9, 1.518, 8e-6);
  CHECK(zero.amp1 == 0.0);
  CHECK(zero.amp2 == 0.0);

  const long double lam = 980e-9L, ns = 1.518L, L = 8e-6L;
  const long double s = lam * lam / (8 * L * L * ns);
  const long double n1 = 2 * 0.01L * s;
  const long double n2 = 2 * 0.1L * std::sqrt(4.0L + 0.09L) * s;
  const auto phys = to_physical(LatticeParams(0.1, 0.3, 1), 980e-9, 1.518, 8e-6);
  CHECK(std::abs(phys.amp1 / static_cast<double>(n1) - 1.0) < 1e-14);
  CHECK(std::abs(phys.amp2 / static_cast<double>(n2) - 1.0) < 1e-14);
}

TEST_CASE("from_physical: round trip") {
  for (int N = 0; N <= 6; ++N) {
    const LatticeParams p(0.05 + 0.07 * N, 0.03 * N - 0.1, N);
    const auto back = from_physical(to_physical(p, 980e-9, 1.518, 8e-6));
    CHECK(back.order() == N);
    CHECK(std::abs(back.eta() - p.eta()) < 1e-12);
    CHECK(std::abs(back.delta() - p.delta()) < 1e-12);
  }
}

TEST_CASE("from_physical: rejections") {
  auto phys = to_physical(LatticeParams(0.3, 0.2, 0), 980e-9, 1.518, 8e-6);
  auto bumped = phys;
  bumped.amp2 *= 1.1;
  CHECK_THROWS_AS(from_physical(bumped), NotInExactFamily);
  try {
    from_physical(bumped);
  } catch (const NotInExactFamily& e) {
    CHECK(e.residual() > 1e-9);
  }

  auto flat = phys;
  flat.amp2 = 0.0;
  flat.phase = 0.0;
  CHECK_THROWS_AS(from_physical(flat), NotInExactFamily);

  auto bad = phys;
  bad.wavelength = -1.0;
  CHECK_THROWS_AS(from_physical(bad), std::invalid_argument);
  CHECK_THROWS_AS(to_physical(LatticeParams(-0.1, 0.0, 0), 980e-9, 1.518, 8e-6), std::invalid_argument);
}

TEST_CASE("to_scaled") {
  PhysicalParams phys{980e-9, 1.518, 8e-6, 0.0, 0.0, 0.0};
  const auto s = to_scaled(8e-6, 1e-3, phys);
  CHECK(s.x == doctest::Approx(pi));
  CHECK(s.z == doctest::Approx(pi * 980e-9 * 1e-3 / (4.0 * 64e-12 * 1.518)));
}
