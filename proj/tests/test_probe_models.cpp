#include "oracles.hpp"
#include "qprobe/probe_models.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qprobe;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("fock1_state limiting cases") {
  FockParams p{5.0, 1.0, 0, 0.0};
  const DensityMatrix start = fock1_state(p, 0.0);
  CHECK(start(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(start(1, 1)) < 1e-15);

  // resonant half Rabi period: Omega_0 = 2, Omega_0 t = pi
  p.delta = 0.0;
  const DensityMatrix flipped = fock1_state(p, kPi / 2);
  CHECK(std::abs(flipped(0, 0)) < 1e-15);
  CHECK(flipped(1, 1).real() == doctest::Approx(1.0));
}

TEST_CASE("fock1 amplitudes match direct integration of the interaction-picture Schrodinger equation") {
  for (const double alpha : {0.0, kPi / 4, 0.3, kPi / 2}) {
    for (const int n : {0, 2}) {
      const FockParams p{5.0, 1.0, n, alpha};
      const double t = 0.3;
      const auto amp = fock1_amplitudes(p, t);
      const auto ref = oracle::fock1_amplitudes(p.delta, p.lambda, p.n, p.alpha, t);
      CHECK(std::abs(amp.excited - ref(0)) < 1e-8);
      CHECK(std::abs(amp.ground - ref(1)) < 1e-8);
      const DensityMatrix rho = fock1_state(p, t);
      CHECK(std::abs(rho(0, 0) - std::norm(ref(0))) < 1e-8);
      CHECK(std::abs(rho(1, 1) - std::norm(ref(1))) < 1e-8);
    }
  }
}

TEST_CASE("fock1 populations conserve probability on a random grid") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> delta(-20.0, 20.0), lambda(0.05, 5.0), alpha(0.0, kPi / 2), t(0.0, 200.0);
  std::uniform_int_distribution<int> n(0, 10);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const FockParams p{delta(rng), lambda(rng), n(rng), alpha(rng)};
    const auto a = fock1_amplitudes(p, t(rng));
    worst = std::max(worst, std::abs(std::norm(a.excited) + std::norm(a.ground) - 1.0));
    if (k % 100 == 0) {
      const DensityMatrix rho = fock1_state(p, 1.0);
      const double purity = (rho.matrix() * rho.matrix()).trace().real();
      const auto b = fock1_amplitudes(p, 1.0);
      CHECK(purity == doctest::Approx(std::pow(std::norm(b.excited), 2) + std::pow(std::norm(b.ground), 2)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("thermal1_state reference values and steady state") {
  ThermalParams p{0.1, 1.0, kPi / 4, 1.0};
  const DensityMatrix start = thermal1_state(p, 0.0);
  CHECK(max_abs_diff(start.matrix(), CMatrix::Constant(2, 2, 0.5)) < 1e-15);

  const DensityMatrix rho = thermal1_state(p, 1.0);
  CHECK(rho(0, 0).real() == doctest::Approx(0.20883).epsilon(2e-5));
  CHECK(rho(0, 1).real() == doctest::Approx(0.27441).epsilon(2e-5));
  CHECK(max_abs_diff(rho.matrix(), oracle::thermal(0.1, 1.0, kPi / 4, 1.0)) < 1e-15);

  for (const double alpha : {0.0, 0.4, kPi / 4, kPi / 2}) {
    p.alpha = alpha;
    const DensityMatrix late = thermal1_state(p, 50.0);
    CHECK(std::abs(late(0, 0) - 1.0 / 12.0) <= 1e-10);
    CHECK(std::abs(late(1, 1) - 11.0 / 12.0) <= 1e-10);
    CHECK(std::abs(late(0, 1)) <= 1e-10);
  }
}

TEST_CASE("squeezed1_state reference values and steady state") {
  SqueezedParams vac{0.0, 1.0, 0.0, 0.0};
  for (const double t : {0.0, 0.5, 2.0}) {
    const DensityMatrix rho = squeezed1_state(vac, t);
    CHECK(rho(0, 0).real() == doctest::Approx(std::exp(-t)));
    CHECK(std::abs(rho(0, 1)) == 0.0);
  }
  SqueezedParams p{0.1, 1.0, kPi / 4, 0.0};
  CHECK(max_abs_diff(squeezed1_state(p, 1.0).matrix(), oracle::squeezed(0.1, 1.0, kPi / 4, 1.0)) < 1e-15);
  const double M = std::sinh(0.1) * std::sinh(0.1);
  const DensityMatrix late = squeezed1_state(p, 50.0);
  CHECK(std::abs(late(0, 0) - M / (2 * M + 1)) <= 1e-10);
  CHECK(std::abs(late(1, 1) - (M + 1) / (2 * M + 1)) <= 1e-10);
}

TEST_CASE("vacuum limits of the thermal and squeezed solutions coincide") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(0.0, 30.0), alpha(0.0, kPi / 2), gamma(0.1, 3.0);
  for (int k = 0; k < 500; ++k) {
    const double a = alpha(rng), g = gamma(rng), s = t(rng);
    const DensityMatrix th = thermal1_state({0.0, g, a, 1.0}, s);
    const DensityMatrix sq = squeezed1_state({0.0, g, a, 0.0}, s);
    REQUIRE(max_abs_diff(th.matrix(), sq.matrix()) <= 1e-12);
  }
}

TEST_CASE("thermal and squeezed populations agree under m <-> M; coherences differ by exp(-gamma N t)") {
  for (const double r : {0.05, 0.1, 0.5}) {
    for (const double t : {0.3, 1.0, 4.0}) {
      const SqueezedParams sq{r, 1.3, 0.6, 0.0};
      const ThermalParams th{sq.M(), 1.3, 0.6, 1.0};
      const DensityMatrix a = thermal1_state(th, t);
      const DensityMatrix b = squeezed1_state(sq, t);
      CHECK(std::abs(a(0, 0) - b(0, 0)) < 1e-14);
      CHECK(std::abs(a(1, 1) - b(1, 1)) < 1e-14);
      CHECK(b(0, 1).real() == doctest::Approx(a(0, 1).real() * std::exp(-1.3 * sq.N() * t)).epsilon(1e-13));
    }
  }
}

TEST_CASE("fock2_state initial Bell state and full transfer") {
  TwoQubitFockParams p{5.0, 1.0, kPi / 4, 0};
  const DensityMatrix start = fock2_state(p, 0.0);
  CHECK(start(1, 1).real() == doctest::Approx(0.5));
  CHECK(start(2, 2).real() == doctest::Approx(0.5));
  CHECK(start(1, 2).real() == doctest::Approx(0.5));
  CHECK(std::abs(start(3, 3)) < 1e-15);

  p.delta = 0.0;
  const double t = kPi / (2 * std::sqrt(2.0));
  const auto amp = fock2_amplitudes(p, t);
  CHECK(std::norm(amp.gg) == doctest::Approx(1.0).epsilon(1e-12));
  const auto ref = oracle::fock2_amplitudes(0.0, 1.0, kPi / 4, t);
  CHECK(std::abs(amp.eg - ref(0)) < 1e-8);
  CHECK(std::abs(amp.ge - ref(1)) < 1e-8);
  CHECK(std::abs(amp.gg - ref(2)) < 1e-8);
}

TEST_CASE("fock2 amplitudes match the three-level Schrodinger integration") {
  const TwoQubitFockParams p{5.0, 1.0, kPi / 4, 0};
  for (const double t : {0.5, 1.7, 6.0}) {
    const auto amp = fock2_amplitudes(p, t);
    const auto ref = oracle::fock2_amplitudes(p.delta, p.lambda, p.alpha, t, 60000);
    CHECK(std::abs(amp.eg - ref(0)) < 1e-8);
    CHECK(std::abs(amp.ge - ref(1)) < 1e-8);
    CHECK(std::abs(amp.gg - ref(2)) < 1e-8);
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> delta(-20.0, 20.0), lambda(0.05, 5.0), t(0.0, 200.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto a = fock2_amplitudes({delta(rng), lambda(rng), kPi / 4, 0}, t(rng));
    worst = std::max(worst, std::abs(std::norm(a.eg) + std::norm(a.ge) + std::norm(a.gg) - 1.0));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("reduce_A of the two-qubit Fock state") {
  const TwoQubitFockParams p{5.0, 1.0, kPi / 4, 0};
  CHECK(max_abs_diff(reduce_A(fock2_state(p, 0.0)).matrix(), CMatrix::Identity(2, 2) / 2.0) < 1e-15);

  const DensityMatrix rho = fock2_state(p, 0.5);
  const DensityMatrix a = reduce_A(rho);
  CHECK(max_abs_diff(a.matrix(), oracle::partial_trace_B(rho.matrix())) < 1e-15);
  CHECK(std::abs(a(0, 1)) <= 1e-10);
  CHECK(std::abs(a(0, 0) - rho(1, 1)) < 1e-15);
  CHECK(std::abs(a(1, 1) - (rho(2, 2) + rho(3, 3))) < 1e-15);

  CHECK_THROWS_AS(reduce_A(fock1_state({5.0, 1.0, 0, 0.0}, 1.0)), StateError);
}

TEST_CASE("parameter ranges are enforced") {
  CHECK_THROWS_AS(fock1_state({5.0, 0.0, 0, 0.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(fock1_state({5.0, 1.0, -1, 0.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(fock1_state({5.0, 1.0, 0, 2.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(fock1_state({5.0, 1.0, 0, 0.0}, -1.0), ParameterError);
  CHECK_THROWS_AS(thermal1_state({-0.1, 1.0, 0.0, 1.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(thermal1_state({0.1, 0.0, 0.0, 1.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(squeezed1_state({0.1, 1.0, 0.0, 0.2}, 1.0), ParameterError);
  CHECK_THROWS_AS(squeezed1_state({-0.1, 1.0, 0.0, 0.0}, 1.0), ParameterError);
  CHECK_THROWS_AS(fock2_state({5.0, 1.0, kPi / 4, 1}, 1.0), ParameterError);
  CHECK_THROWS_AS(fock2_state({5.0, 1.0, 0.0, 0}, 1.0), ParameterError);
}
