#include "bellfield/phase_statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bellfield/errors.hpp"
#include "bellfield/quadrature.hpp"
#include "bellfield/rng.hpp"

namespace bellfield {

namespace {

void require_uniform(const InterferometerConfig& config, const char* what) {
  if (config.hidden_phase.kind != HiddenPhaseModel::Kind::uniform) {
    throw ValidationError(std::string(what) +
                          ": requires the uniform hidden-phase model");
  }
}

// Tolerance for the built-in quadrature-vs-closed-form consistency checks:
// absolute 1e-12 at unit scale, relative beyond it.
double identity_tol(double reference) {
  return 1e-12 * std::max(1.0, std::abs(reference));
}

// The sinusoidal closed forms below hold for any splitter factors as long
// as reflection shifts the phase by pi/2; for an exotic shift the
// quadrature value is still returned, but there is no closed form to
// check it against.
bool standard_reflection_phase(const InterferometerConfig& config) {
  return std::abs(config.convention.reflection_phase_shift -
                  std::numbers::pi / 2.0) <= 1e-12;
}

struct DifferenceMoments {
  double mean_x = 0.0;   // <I1 - I2>
  double mean_y = 0.0;   // <I3 - I4>
  double mean_xy = 0.0;  // <(I1 - I2)(I3 - I4)>
  double mean_xx = 0.0;
  double mean_yy = 0.0;
};

// One quadrature pass for all five moments, so covariance, variances and
// the correlation are mutually consistent.
DifferenceMoments difference_moments(const InterferometerConfig& config) {
  DifferenceMoments m;
  m.mean_x = periodic_mean([&](double th) {
    const auto i = conditional_intensities(config, th);
    return i.i1 - i.i2;
  });
  m.mean_y = periodic_mean([&](double th) {
    const auto i = conditional_intensities(config, th);
    return i.i3 - i.i4;
  });
  m.mean_xy = periodic_mean([&](double th) {
    const auto i = conditional_intensities(config, th);
    return (i.i1 - i.i2) * (i.i3 - i.i4);
  });
  m.mean_xx = periodic_mean([&](double th) {
    const auto i = conditional_intensities(config, th);
    return (i.i1 - i.i2) * (i.i1 - i.i2);
  });
  m.mean_yy = periodic_mean([&](double th) {
    const auto i = conditional_intensities(config, th);
    return (i.i3 - i.i4) * (i.i3 - i.i4);
  });
  return m;
}

}  // namespace

double intensity_correlation_closed_form(double theta1, double theta2) {
  return -std::sin(theta1 - theta2);
}

DetectorIntensities unconditional_intensities(
    const InterferometerConfig& config) {
  require_uniform(config, "unconditional_intensities");

  DetectorIntensities out;
  out.i1 = periodic_mean(
      [&](double th) { return conditional_intensities(config, th).i1; });
  out.i2 = periodic_mean(
      [&](double th) { return conditional_intensities(config, th).i2; });
  out.i3 = periodic_mean(
      [&](double th) { return conditional_intensities(config, th).i3; });
  out.i4 = periodic_mean(
      [&](double th) { return conditional_intensities(config, th).i4; });

  // Averaging kills every cross term, so per detector only the two path
  // powers remain. With the default factors all four reduce to
  // beta^2/32 + alpha^2/8.
  const double t = config.convention.transmission_factor;
  const double r = config.convention.reflection_factor;
  const double a = config.alpha;
  const double b = config.beta;
  const double u12 = b * r * t, u34 = b * t * r;
  const double closed[4] = {
      (u12 * u12 + a * r * a * r) / 2.0,
      (b * r * r * b * r * r + a * t * a * t) / 2.0,
      (u34 * u34 + a * t * a * t) / 2.0,
      (b * t * t * b * t * t + a * r * a * r) / 2.0};
  const double values[4] = {out.i1, out.i2, out.i3, out.i4};
  for (int k = 0; k < 4; ++k) {
    if (std::abs(values[k] - closed[k]) > identity_tol(closed[k])) {
      throw std::logic_error(
          "unconditional_intensities: quadrature disagrees with the closed "
          "form");
    }
  }
  return out;
}

double covariance_of_differences(const InterferometerConfig& config) {
  require_uniform(config, "covariance_of_differences");
  const DifferenceMoments m = difference_moments(config);
  const double cov = m.mean_xy - m.mean_x * m.mean_y;

  if (standard_reflection_phase(config)) {
    const double a = config.alpha;
    const double b = config.beta;
    const double t = config.convention.transmission_factor;
    const double r = config.convention.reflection_factor;
    // -(1/32) a^2 b^2 sin(theta1 - theta2) under the default factors.
    const double closed = -2.0 * a * a * b * b * (r * r * r) * (t * t * t) *
                          std::sin(config.theta1 - config.theta2);
    if (std::abs(cov - closed) > identity_tol(closed)) {
      throw std::logic_error(
          "covariance_of_differences: quadrature disagrees with the closed "
          "form");
    }
  }
  return cov;
}

double variance_of_difference(const InterferometerConfig& config,
                              HomodyneSide side) {
  require_uniform(config, "variance_of_difference");
  const DifferenceMoments m = difference_moments(config);
  const double var = side == HomodyneSide::homodyne12
                         ? m.mean_xx - m.mean_x * m.mean_x
                         : m.mean_yy - m.mean_y * m.mean_y;

  if (standard_reflection_phase(config)) {
    const double a = config.alpha;
    const double b = config.beta;
    const double t = config.convention.transmission_factor;
    const double r = config.convention.reflection_factor;
    // a^2 b^2 / 32 for either side under the default factors.
    const double closed = side == HomodyneSide::homodyne12
                              ? 2.0 * a * a * b * b * (r * r * r * r) * (t * t)
                              : 2.0 * a * a * b * b * (r * r) * (t * t * t * t);
    if (std::abs(var - closed) > identity_tol(closed)) {
      throw std::logic_error(
          "variance_of_difference: quadrature disagrees with the closed form");
    }
  }
  return var;
}

double intensity_correlation(const InterferometerConfig& config) {
  if (config.hidden_phase.kind == HiddenPhaseModel::Kind::fixed) {
    throw ZeroVarianceError(
        "intensity_correlation: fixed hidden phase leaves the homodyne "
        "differences without variance");
  }
  if (config.alpha * config.beta == 0.0) {
    throw ZeroVarianceError(
        "intensity_correlation: alpha*beta == 0 leaves the homodyne "
        "differences without variance");
  }

  const DifferenceMoments m = difference_moments(config);
  const double cov = m.mean_xy - m.mean_x * m.mean_y;
  const double vx = m.mean_xx - m.mean_x * m.mean_x;
  const double vy = m.mean_yy - m.mean_y * m.mean_y;
  if (vx <= 0.0 || vy <= 0.0) {
    throw ZeroVarianceError(
        "intensity_correlation: a homodyne difference has no variance under "
        "this convention");
  }
  const double rho = cov / std::sqrt(vx * vy);

  if (standard_reflection_phase(config)) {
    const double closed =
        intensity_correlation_closed_form(config.theta1, config.theta2);
    if (std::abs(rho - closed) > 1e-12) {
      throw std::logic_error(
          "intensity_correlation: quadrature disagrees with -sin(theta1 - "
          "theta2)");
    }
  }
  return rho;
}

MomentEstimate mc_estimate_correlation(const InterferometerConfig& config,
                                       std::uint64_t samples,
                                       std::uint64_t seed) {
  if (config.hidden_phase.kind == HiddenPhaseModel::Kind::fixed) {
    throw ZeroVarianceError(
        "mc_estimate_correlation: fixed hidden phase leaves the homodyne "
        "differences without variance");
  }
  if (config.alpha * config.beta == 0.0) {
    throw ZeroVarianceError(
        "mc_estimate_correlation: alpha*beta == 0 leaves the homodyne "
        "differences without variance");
  }
  if (samples < 1000) {
    throw ValidationError("mc_estimate_correlation: needs >= 1000 samples");
  }

  struct Sums {
    double x = 0, y = 0, xy = 0, xx = 0, yy = 0;
    std::uint64_t n = 0;
    void add(double dx, double dy) {
      x += dx;
      y += dy;
      xy += dx * dy;
      xx += dx * dx;
      yy += dy * dy;
      ++n;
    }
    double correlation() const {
      const double inv = 1.0 / static_cast<double>(n);
      const double cov = xy * inv - (x * inv) * (y * inv);
      const double vx = xx * inv - (x * inv) * (x * inv);
      const double vy = yy * inv - (y * inv) * (y * inv);
      return cov / std::sqrt(vx * vy);
    }
  };

  std::vector<Sums> batches(kMcBatches);
  Sums total;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double theta = kTwoPi * rng::uniform01(seed, 3 * i);
    const auto in = conditional_intensities(config, theta);
    const double dx = in.i1 - in.i2;
    const double dy = in.i3 - in.i4;
    total.add(dx, dy);
    batches[static_cast<std::size_t>(i * kMcBatches / samples)].add(dx, dy);
  }

  // Batch-means standard error over the per-batch correlations.
  double mean_b = 0.0;
  int used = 0;
  for (const Sums& b : batches) {
    if (b.n >= 2) {
      mean_b += b.correlation();
      ++used;
    }
  }
  mean_b /= used;
  double var_b = 0.0;
  for (const Sums& b : batches) {
    if (b.n >= 2) {
      const double d = b.correlation() - mean_b;
      var_b += d * d;
    }
  }
  var_b /= (used - 1);

  MomentEstimate est;
  est.value = total.correlation();
  est.standard_error = std::sqrt(var_b / used);
  est.method = MomentEstimate::Method::monte_carlo;
  est.count = samples;
  est.seed = seed;
  return est;
}

}  // namespace bellfield
