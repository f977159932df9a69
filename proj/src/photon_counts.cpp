#include "bellfield/photon_counts.hpp"

#include <cmath>

#include "bellfield/errors.hpp"
#include "bellfield/quadrature.hpp"
#include "bellfield/rng.hpp"

namespace bellfield {

double visibility(const InterferometerConfig& config) {
  // Fringe contrast (Imax - Imin)/(Imax + Imin) at D1, from the two path
  // amplitudes the network delivers there: 2 u a / (u^2 + a^2). With the
  // default factors this is 4*alpha*beta / (beta^2 + 4*alpha^2).
  const auto d1 = propagate(config, 0.0)[0];
  const double u = d1.contributions[0].amplitude;
  const double a = d1.contributions[1].amplitude;
  const double denom = u * u + a * a;
  if (denom == 0.0) return 0.0;
  return 2.0 * u * a / denom;
}

ConditionalExpectations conditional_expectations(const CountModelParams& params,
                                                 double theta) {
  const auto in = conditional_intensities(params.config, theta);
  const double sum12 = in.i1 + in.i2;
  const double sum34 = in.i3 + in.i4;
  if (sum12 == 0.0 || sum34 == 0.0) {
    throw DegenerateIntensities(
        "conditional_expectations: a homodyne pair receives no light");
  }
  return ConditionalExpectations{(in.i1 - in.i2) / sum12,
                                 (in.i3 - in.i4) / sum34};
}

std::vector<CountSample> sample_counts(const CountModelParams& params,
                                       std::int64_t n_samples,
                                       std::uint64_t seed) {
  if (n_samples < 1) {
    throw ValidationError("sample_counts: n_samples must be >= 1");
  }
  if (params.config.hidden_phase.kind != HiddenPhaseModel::Kind::uniform) {
    throw ValidationError(
        "sample_counts: requires the uniform hidden-phase model");
  }

  std::vector<CountSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const auto c = static_cast<std::uint64_t>(i);
    CountSample s;
    s.theta = kTwoPi * rng::uniform01(seed, 3 * c);
    const auto e = conditional_expectations(params, s.theta);
    s.x = rng::uniform01(seed, 3 * c + 1) < 0.5 * (1.0 + e.ex) ? +1 : -1;
    s.y = rng::uniform01(seed, 3 * c + 2) < 0.5 * (1.0 + e.ey) ? +1 : -1;
    out.push_back(s);
  }
  return out;
}

CountCorrelationAnalysis analytic_count_correlation(
    const CountModelParams& params) {
  if (params.config.hidden_phase.kind != HiddenPhaseModel::Kind::uniform) {
    throw ValidationError(
        "analytic_count_correlation: requires the uniform hidden-phase model");
  }

  CountCorrelationAnalysis out;
  out.value = periodic_mean([&](double th) {
    const auto e = conditional_expectations(params, th);
    return e.ex * e.ey;
  });

  const double v = visibility(params.config);
  const double dtheta = params.config.theta1 - params.config.theta2;
  out.closed_form = -0.5 * v * v * std::sin(dtheta);
  out.intensity_correlation = -std::sin(dtheta);
  out.notes = {
      "count model: E(Y|theta) = -V sin(theta - theta2), the sign of the "
      "intensity ratio (I3-I4)/(I3+I4); a +sin convention swaps D3 and D4",
      "count model: rho(X,Y) = -(V^2/2) sin(theta1 - theta2), half the "
      "intensity-difference correlation at V = 1; CHSH sums built from "
      "counts stay within +-sqrt(2) and cannot violate the bound 2"};
  return out;
}

MomentEstimate estimate_count_correlation(
    const std::vector<CountSample>& samples) {
  const auto n = static_cast<std::int64_t>(samples.size());
  if (n < 1000) {
    throw ValidationError("estimate_count_correlation: needs >= 1000 samples");
  }

  std::vector<double> batch_sum(kMcBatches, 0.0);
  std::vector<std::int64_t> batch_n(kMcBatches, 0);
  double total = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double xy = static_cast<double>(samples[static_cast<std::size_t>(i)].x *
                                          samples[static_cast<std::size_t>(i)].y);
    total += xy;
    const auto b = static_cast<std::size_t>(i * kMcBatches / n);
    batch_sum[b] += xy;
    batch_n[b] += 1;
  }

  double mean_b = 0.0;
  int used = 0;
  for (int b = 0; b < kMcBatches; ++b) {
    if (batch_n[static_cast<std::size_t>(b)] > 0) {
      mean_b += batch_sum[static_cast<std::size_t>(b)] /
                static_cast<double>(batch_n[static_cast<std::size_t>(b)]);
      ++used;
    }
  }
  mean_b /= used;
  double var_b = 0.0;
  for (int b = 0; b < kMcBatches; ++b) {
    if (batch_n[static_cast<std::size_t>(b)] > 0) {
      const double d = batch_sum[static_cast<std::size_t>(b)] /
                           static_cast<double>(batch_n[static_cast<std::size_t>(b)]) -
                       mean_b;
      var_b += d * d;
    }
  }
  var_b /= (used - 1);

  MomentEstimate est;
  est.value = total / static_cast<double>(n);
  est.standard_error = std::sqrt(var_b / used);
  est.method = MomentEstimate::Method::monte_carlo;
  est.count = static_cast<std::uint64_t>(n);
  return est;
}

}  // namespace bellfield
