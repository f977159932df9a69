#include "bellfield/phasor_optics.hpp"

#include <cmath>
#include <complex>

#include "bellfield/errors.hpp"

namespace bellfield {

namespace {

// Signed distance of x from the nearest multiple of 2pi.
double phase_residual(double x) {
  const double r = std::remainder(x, kTwoPi);
  return r;
}

}  // namespace

bool physically_equal(const Phasor& a, const Phasor& b, double tol) {
  if (std::abs(a.amplitude - b.amplitude) > tol) return false;
  return std::abs(phase_residual(a.phase - b.phase)) <= tol;
}

BeamSplitterConvention amplitude_halving_convention() {
  return BeamSplitterConvention{};
}

BeamSplitterConvention energy_conserving_convention() {
  const double r = 1.0 / std::numbers::sqrt2;
  return BeamSplitterConvention{r, r, std::numbers::pi / 2.0};
}

SplitField apply_beam_splitter(const Phasor& input,
                               const BeamSplitterConvention& convention) {
  return SplitField{
      Phasor{input.amplitude * convention.transmission_factor, input.phase},
      Phasor{input.amplitude * convention.reflection_factor,
             input.phase + convention.reflection_phase_shift}};
}

std::array<FieldSource, 3> sources(const InterferometerConfig& config,
                                   double theta) {
  const double w = config.angular_frequency;
  return {FieldSource{config.beta, theta, w},
          FieldSource{config.alpha, config.theta1, w},
          FieldSource{config.alpha, config.theta2, w}};
}

DetectorFields propagate(const InterferometerConfig& config, double theta) {
  const auto& bs = config.convention;
  const Phasor u{config.beta, theta};
  const Phasor ref1{config.alpha, config.theta1};
  const Phasor ref2{config.alpha, config.theta2};

  // u splits once: the reflected half heads to the (D1,D2) splitter, the
  // transmitted half to the (D3,D4) splitter.
  const SplitField u_split = apply_beam_splitter(u, bs);
  const SplitField u_at_12 = apply_beam_splitter(u_split.reflected, bs);
  const SplitField u_at_34 = apply_beam_splitter(u_split.transmitted, bs);
  const SplitField ref1_at_12 = apply_beam_splitter(ref1, bs);
  const SplitField ref2_at_34 = apply_beam_splitter(ref2, bs);

  // D1 lies on u's continuation, so u transmits into it and the reference
  // reflects onto it; D2 is the mirror image. At the (D3,D4) splitter the
  // geometry is flipped: u reflects into D3 and transmits into D4.
  return DetectorFields{
      DetectorField{DetectorId::D1, {u_at_12.transmitted, ref1_at_12.reflected}},
      DetectorField{DetectorId::D2, {u_at_12.reflected, ref1_at_12.transmitted}},
      DetectorField{DetectorId::D3, {u_at_34.reflected, ref2_at_34.transmitted}},
      DetectorField{DetectorId::D4, {u_at_34.transmitted, ref2_at_34.reflected}}};
}

double intensity(const DetectorField& field) {
  std::complex<double> total{0.0, 0.0};
  for (const Phasor& p : field.contributions) {
    total += std::polar(p.amplitude, p.phase);
  }
  return 0.5 * std::norm(total);
}

DetectorIntensities conditional_intensities(const InterferometerConfig& config,
                                            double theta) {
  const DetectorFields fields = propagate(config, theta);
  return DetectorIntensities{intensity(fields[0]), intensity(fields[1]),
                             intensity(fields[2]), intensity(fields[3])};
}

DetectorIntensities time_domain_oracle(const InterferometerConfig& config,
                                       double theta, int periods,
                                       int steps_per_period) {
  if (steps_per_period < 64) {
    throw ValidationError(
        "time_domain_oracle: steps_per_period < 64 cannot resolve the "
        "squared carrier");
  }
  if (periods < 1) {
    throw ValidationError("time_domain_oracle: periods must be >= 1");
  }

  const DetectorFields fields = propagate(config, theta);
  const double omega = config.angular_frequency;
  const double dt = kTwoPi / omega / steps_per_period;
  const long steps = static_cast<long>(periods) * steps_per_period;

  DetectorIntensities out{};
  double* const slots[4] = {&out.i1, &out.i2, &out.i3, &out.i4};
  for (int d = 0; d < 4; ++d) {
    double sum = 0.0;
    double carry = 0.0;
    for (long j = 0; j < steps; ++j) {
      const double t = (static_cast<double>(j) + 0.5) * dt;
      double f = 0.0;
      for (const Phasor& p : fields[d].contributions) {
        f += p.amplitude * std::cos(omega * t + p.phase);
      }
      const double y = f * f - carry;
      const double s = sum + y;
      carry = (s - sum) - y;
      sum = s;
    }
    *slots[d] = sum / static_cast<double>(steps);
  }
  return out;
}

}  // namespace bellfield
