#include "bellfield/phasor_optics.hpp"

#include <cmath>

#include "bellfield/errors.hpp"
#include "bellfield/rng.hpp"
#include "doctest.h"

using namespace bellfield;

namespace {

InterferometerConfig make_config(double alpha, double beta, double theta1,
                                 double theta2) {
  InterferometerConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.theta1 = theta1;
  c.theta2 = theta2;
  return c;
}

}  // namespace

TEST_CASE("beam splitter halves the field and shifts the reflection by pi/2") {
  const BeamSplitterConvention bs;
  const double theta = 0.7;
  const auto split = apply_beam_splitter(Phasor{2.0, theta}, bs);
  CHECK(split.transmitted.amplitude == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(split.transmitted.phase == theta);
  CHECK(split.reflected.amplitude == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(split.reflected.phase ==
        doctest::Approx(theta + std::numbers::pi / 2).epsilon(1e-15));
}

TEST_CASE("beam splitter on a dark input stays dark") {
  const auto split = apply_beam_splitter(Phasor{0.0, 1.3}, {});
  CHECK(split.transmitted.amplitude == 0.0);
  CHECK(split.reflected.amplitude == 0.0);
  CHECK(split.reflected.phase == doctest::Approx(1.3 + std::numbers::pi / 2));
}

TEST_CASE("two splitters along the unknown-source path to D1 give (beta/4, theta+pi/2)") {
  const BeamSplitterConvention bs;
  const double beta = 3.0;
  const double theta = -1.1;
  const auto at_bs3 = apply_beam_splitter(Phasor{beta, theta}, bs);
  const auto at_bs1 = apply_beam_splitter(at_bs3.reflected, bs);
  CHECK(physically_equal(at_bs1.transmitted,
                         Phasor{beta / 4.0, theta + std::numbers::pi / 2}));
}

TEST_CASE("physical equality works mod 2pi") {
  CHECK(physically_equal(Phasor{1.0, 0.25}, Phasor{1.0, 0.25 + 4 * std::numbers::pi}));
  CHECK(physically_equal(Phasor{1.0, -0.25}, Phasor{1.0, -0.25 - 2 * std::numbers::pi}));
  CHECK_FALSE(physically_equal(Phasor{1.0, 0.25}, Phasor{1.0, 0.25 + 1e-6}));
  CHECK_FALSE(physically_equal(Phasor{1.0, 0.25}, Phasor{1.0 + 1e-6, 0.25}));
}

TEST_CASE("propagate delivers the documented contributions per detector") {
  const double alpha = 1.4, beta = 2.2, t1 = 0.3, t2 = -0.9, theta = 1.7;
  const auto fields = propagate(make_config(alpha, beta, t1, t2), theta);
  const double hp = std::numbers::pi / 2;

  CHECK(fields[0].detector == DetectorId::D1);
  CHECK(physically_equal(fields[0].contributions[0], Phasor{beta / 4, theta + hp}));
  CHECK(physically_equal(fields[0].contributions[1], Phasor{alpha / 2, t1 + hp}));

  CHECK(physically_equal(fields[1].contributions[0],
                         Phasor{beta / 4, theta + std::numbers::pi}));
  CHECK(physically_equal(fields[1].contributions[1], Phasor{alpha / 2, t1}));

  CHECK(physically_equal(fields[2].contributions[0], Phasor{beta / 4, theta + hp}));
  CHECK(physically_equal(fields[2].contributions[1], Phasor{alpha / 2, t2}));

  CHECK(physically_equal(fields[3].contributions[0], Phasor{beta / 4, theta}));
  CHECK(physically_equal(fields[3].contributions[1], Phasor{alpha / 2, t2 + hp}));
}

TEST_CASE("dark reference arms leave only the unknown source, amplitude beta/4") {
  const auto fields = propagate(make_config(0.0, 2.0, 0.4, 0.8), 0.2);
  for (const auto& f : fields) {
    CHECK(f.contributions[0].amplitude == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.contributions[1].amplitude == 0.0);
  }
}

TEST_CASE("structural locality: D1/D2 paths never see theta2, D3/D4 never see theta1") {
  const double theta = 0.9;
  const auto base = propagate(make_config(1.0, 2.0, 0.3, 0.7), theta);
  const auto moved2 = propagate(make_config(1.0, 2.0, 0.3, 2.9), theta);
  const auto moved1 = propagate(make_config(1.0, 2.0, -1.8, 0.7), theta);
  for (int d : {0, 1}) {
    for (int k : {0, 1}) {
      CHECK(base[d].contributions[k].amplitude == moved2[d].contributions[k].amplitude);
      CHECK(base[d].contributions[k].phase == moved2[d].contributions[k].phase);
    }
  }
  for (int d : {2, 3}) {
    for (int k : {0, 1}) {
      CHECK(base[d].contributions[k].amplitude == moved1[d].contributions[k].amplitude);
      CHECK(base[d].contributions[k].phase == moved1[d].contributions[k].phase);
    }
  }
}

TEST_CASE("intensity of a single contribution is a^2/2") {
  DetectorField f{DetectorId::D1, {Phasor{2.0, 0.6}, Phasor{0.0, 0.0}}};
  CHECK(intensity(f) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("opposite-phase equal contributions interfere to zero") {
  DetectorField f{DetectorId::D1,
                  {Phasor{1.5, 0.2}, Phasor{1.5, 0.2 + std::numbers::pi}}};
  CHECK(intensity(f) <= 1e-30);
}

TEST_CASE("D1 intensity at theta = theta1, alpha = beta = 2, is 1.125") {
  const auto fields = propagate(make_config(2.0, 2.0, 0.5, 0.5), 0.5);
  CHECK(intensity(fields[0]) == doctest::Approx(1.125).epsilon(1e-14));
}

TEST_CASE("conditional intensities match the interferometer closed forms") {
  // I1 = b^2/32 + (ab/8) cos(theta-theta1) + a^2/8, I2 with -cos,
  // I3 with -sin(theta-theta2), I4 with +sin.
  const double alpha = 1.3, beta = 0.8, t1 = 0.4, t2 = 2.1;
  const auto cfg = make_config(alpha, beta, t1, t2);
  for (double theta : {0.0, 0.37, 1.9, 4.4, 6.1}) {
    const auto in = conditional_intensities(cfg, theta);
    const double base = beta * beta / 32 + alpha * alpha / 8;
    const double fringe = alpha * beta / 8;
    CHECK(in.i1 == doctest::Approx(base + fringe * std::cos(theta - t1)).epsilon(1e-14));
    CHECK(in.i2 == doctest::Approx(base - fringe * std::cos(theta - t1)).epsilon(1e-14));
    CHECK(in.i3 == doctest::Approx(base - fringe * std::sin(theta - t2)).epsilon(1e-14));
    CHECK(in.i4 == doctest::Approx(base + fringe * std::sin(theta - t2)).epsilon(1e-14));
  }
}

TEST_CASE("conditional intensities: worked example at alpha = beta = 2") {
  const auto in = conditional_intensities(make_config(2.0, 2.0, 1.1, 1.1), 1.1);
  CHECK(in.i1 == doctest::Approx(1.125).epsilon(1e-14));
  CHECK(in.i2 == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(in.i3 == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(in.i4 == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("dark source: every detector reads alpha^2/8") {
  const auto in = conditional_intensities(make_config(2.0, 0.0, 0.0, 0.0), 2.2);
  for (double v : {in.i1, in.i2, in.i3, in.i4}) {
    CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("no light at all: every detector reads zero") {
  const auto in = conditional_intensities(make_config(0.0, 0.0, 0.0, 0.0), 1.0);
  CHECK(in.i1 == 0.0);
  CHECK(in.i2 == 0.0);
  CHECK(in.i3 == 0.0);
  CHECK(in.i4 == 0.0);
}

TEST_CASE("time-domain oracle: single source of amplitude 2 averages to 2.0") {
  // beta = 8 puts amplitude beta/4 = 2 on the bare u path at D4.
  const auto in = time_domain_oracle(make_config(0.0, 8.0, 0.0, 0.0), 0.3);
  CHECK(in.i4 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("time-domain oracle: zero fields average to exactly zero") {
  const auto in = time_domain_oracle(make_config(0.0, 0.0, 0.0, 0.0), 0.0);
  CHECK(in.i1 == 0.0);
  CHECK(in.i4 == 0.0);
}

TEST_CASE("time-domain oracle rejects an unresolvable grid") {
  CHECK_THROWS_AS(time_domain_oracle(make_config(1, 2, 0, 0), 0.0, 1, 32),
                  ValidationError);
  CHECK_THROWS_AS(time_domain_oracle(make_config(1, 2, 0, 0), 0.0, 0, 4096),
                  ValidationError);
}

TEST_CASE("property: phasor intensity matches the time-domain oracle to 1e-9") {
  const std::uint64_t seed = 20250810;
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = static_cast<std::uint64_t>(trial) * 6;
    const auto cfg = make_config(10.0 * rng::uniform01(seed, c),
                                 10.0 * rng::uniform01(seed, c + 1),
                                 kTwoPi * rng::uniform01(seed, c + 2),
                                 kTwoPi * rng::uniform01(seed, c + 3));
    const double theta = kTwoPi * rng::uniform01(seed, c + 4);
    const auto exact = conditional_intensities(cfg, theta);
    const auto oracle = time_domain_oracle(cfg, theta, 1, 4096);
    CHECK(std::abs(exact.i1 - oracle.i1) <= 1e-9);
    CHECK(std::abs(exact.i2 - oracle.i2) <= 1e-9);
    CHECK(std::abs(exact.i3 - oracle.i3) <= 1e-9);
    CHECK(std::abs(exact.i4 - oracle.i4) <= 1e-9);
  }
}

TEST_CASE("property: intensities are nonnegative and pair sums are theta-free") {
  const std::uint64_t seed = 77;
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = static_cast<std::uint64_t>(trial) * 6;
    const double alpha = 10.0 * rng::uniform01(seed, c);
    const double beta = 10.0 * rng::uniform01(seed, c + 1);
    const auto cfg = make_config(alpha, beta, kTwoPi * rng::uniform01(seed, c + 2),
                                 kTwoPi * rng::uniform01(seed, c + 3));
    const double expected_sum = beta * beta / 16 + alpha * alpha / 4;
    for (double theta : {0.1, 2.7, 5.3}) {
      const auto in = conditional_intensities(cfg, theta);
      CHECK(in.i1 >= 0.0);
      CHECK(in.i2 >= 0.0);
      CHECK(in.i3 >= 0.0);
      CHECK(in.i4 >= 0.0);
      CHECK(std::abs(in.i1 + in.i2 - expected_sum) <=
            1e-12 * std::max(1.0, expected_sum));
      CHECK(std::abs(in.i3 + in.i4 - expected_sum) <=
            1e-12 * std::max(1.0, expected_sum));
    }
  }
}

TEST_CASE("property: a common phase shift on theta, theta1, theta2 changes nothing") {
  const std::uint64_t seed = 99;
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = static_cast<std::uint64_t>(trial) * 6;
    const double alpha = 5.0 * rng::uniform01(seed, c);
    const double beta = 5.0 * rng::uniform01(seed, c + 1);
    const double t1 = kTwoPi * rng::uniform01(seed, c + 2);
    const double t2 = kTwoPi * rng::uniform01(seed, c + 3);
    const double theta = kTwoPi * rng::uniform01(seed, c + 4);
    const double shift = kTwoPi * rng::uniform01(seed, c + 5);
    const auto a = conditional_intensities(make_config(alpha, beta, t1, t2), theta);
    const auto b = conditional_intensities(
        make_config(alpha, beta, t1 + shift, t2 + shift), theta + shift);
    CHECK(a.i1 == doctest::Approx(b.i1).epsilon(1e-12));
    CHECK(a.i2 == doctest::Approx(b.i2).epsilon(1e-12));
    CHECK(a.i3 == doctest::Approx(b.i3).epsilon(1e-12));
    CHECK(a.i4 == doctest::Approx(b.i4).epsilon(1e-12));
  }
}

TEST_CASE("all three sources share one angular frequency") {
  InterferometerConfig cfg;
  cfg.angular_frequency = 3.5;
  const auto s = sources(cfg, 0.9);
  CHECK(s[0].angular_frequency == 3.5);
  CHECK(s[1].angular_frequency == 3.5);
  CHECK(s[2].angular_frequency == 3.5);
  CHECK(s[0].amplitude == cfg.beta);
  CHECK(s[1].amplitude == cfg.alpha);
}

TEST_CASE("energy-conserving convention scales amplitudes by 1/sqrt(2)") {
  const auto bs = energy_conserving_convention();
  const auto split = apply_beam_splitter(Phasor{1.0, 0.0}, bs);
  CHECK(split.transmitted.amplitude == doctest::Approx(1.0 / std::sqrt(2.0)));
  // Energy in = energy out for this variant.
  const double e_out = split.transmitted.amplitude * split.transmitted.amplitude +
                       split.reflected.amplitude * split.reflected.amplitude;
  CHECK(e_out == doctest::Approx(1.0).epsilon(1e-14));
}
