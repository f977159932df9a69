#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellfield/phase_statistics.hpp"
#include "bellfield/phasor_optics.hpp"

namespace bellfield {

// The +-1 count variable of one homodyne pair: X = +1 on a D1 click and
// -1 on a D2 click; Y likewise for D3/D4.
struct CountRV {
  HomodyneSide side = HomodyneSide::homodyne12;
  int value = +1;  // -1 or +1
};

// Interference contrast of either homodyne pair:
// V = 4*alpha*beta / (beta^2 + 4*alpha^2), in [0,1]; V = 1 exactly when
// beta = 2*alpha.
double visibility(const InterferometerConfig& config);

struct CountModelParams {
  InterferometerConfig config;
  double expected_counts_per_side = 1.0;  // N, shared by both pairs
};

struct ConditionalExpectations {
  double ex = 0.0;  // E(X | theta) = (I1-I2)/(I1+I2) = V cos(theta - theta1)
  double ey = 0.0;  // E(Y | theta) = (I3-I4)/(I3+I4) = -V sin(theta - theta2)
};

// Conditional count expectations from the intensity ratios. The sign of ey
// follows the implemented intensities, so it carries the minus sign.
ConditionalExpectations conditional_expectations(const CountModelParams& params,
                                                 double theta);

// One Monte Carlo draw: hidden phase plus both +-1 counts, with x and y
// conditionally independent given theta.
struct CountSample {
  double theta = 0.0;
  int x = +1;
  int y = +1;
};

// Per sample i: theta from counter 3*i, the x draw from 3*i+1, the y draw
// from 3*i+2. P(x=+1|theta) = (1+Ex)/2, the unique +-1 law with that mean.
std::vector<CountSample> sample_counts(const CountModelParams& params,
                                       std::int64_t n_samples,
                                       std::uint64_t seed);

struct CountCorrelationAnalysis {
  double value = 0.0;        // (1/2pi) Int Ex(theta) Ey(theta) dtheta
  double closed_form = 0.0;  // -(V^2/2) sin(theta1 - theta2)
  // Correlation of the continuous intensity differences at the same
  // settings, -sin(theta1 - theta2): twice the count value at V = 1.
  double intensity_correlation = 0.0;
  std::vector<std::string> notes;
};

// Count correlation by quadrature over the hidden phase. For zero-mean +-1
// variables this is simultaneously the covariance and the correlation.
// The notes record two facts about this model that are easy to get wrong:
// the sign of E(Y|theta) and the factor 1/2 against the intensity
// correlation, which keeps every count-based CHSH sum within +-sqrt(2).
CountCorrelationAnalysis analytic_count_correlation(
    const CountModelParams& params);

// Mean of x*y with a batch-means standard error. Raw product mean: for
// +-1 variables with zero means this equals both Cov(X,Y) and rho(X,Y).
MomentEstimate estimate_count_correlation(
    const std::vector<CountSample>& samples);

}  // namespace bellfield
