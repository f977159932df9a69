#pragma once

#include <cstdint>

#include "bellfield/phasor_optics.hpp"

namespace bellfield {

enum class HomodyneSide { homodyne12, homodyne34 };

// A scalar moment tagged with how it was obtained. standard_error is
// nonzero only for Monte Carlo estimates.
struct MomentEstimate {
  enum class Method { closed_form, quadrature, monte_carlo };
  double value = 0.0;
  double standard_error = 0.0;
  Method method = Method::closed_form;
  std::uint64_t count = 0;  // quadrature points or Monte Carlo samples
  std::uint64_t seed = 0;   // Monte Carlo stream seed
};

// Monte Carlo standard errors use equal batches of the sample stream.
inline constexpr int kMcBatches = 100;

// rho(theta1, theta2) = -sin(theta1 - theta2); the first argument is the
// (D1,D2) reference phase, the second the (D3,D4) one.
double intensity_correlation_closed_form(double theta1, double theta2);

// Detector intensities with the hidden phase averaged out: every detector
// reads beta^2/32 + alpha^2/8. Computed by quadrature over theta and
// cross-checked against that closed form; requires the uniform model.
DetectorIntensities unconditional_intensities(const InterferometerConfig& config);

// Cov(I1 - I2, I3 - I4) over uniform theta, by quadrature on the defining
// integrals; checked against -(1/32) alpha^2 beta^2 sin(theta1 - theta2).
double covariance_of_differences(const InterferometerConfig& config);

// Var(I1 - I2) or Var(I3 - I4) over uniform theta; both equal
// alpha^2 beta^2 / 32.
double variance_of_difference(const InterferometerConfig& config,
                              HomodyneSide side);

// Correlation of the two homodyne differences: -sin(theta1 - theta2),
// independent of the amplitudes. Throws ZeroVarianceError when
// alpha*beta == 0 or the hidden phase is fixed.
double intensity_correlation(const InterferometerConfig& config);

// Monte Carlo estimate of the same correlation from `samples` hidden-phase
// draws. Sample i consumes counter 3*i of the seed's stream (the count
// sampler owns 3*i+1 and 3*i+2), so tables and estimators built from the
// same seed see the same phases. Deterministic in (seed, samples).
MomentEstimate mc_estimate_correlation(const InterferometerConfig& config,
                                       std::uint64_t samples,
                                       std::uint64_t seed);

}  // namespace bellfield
