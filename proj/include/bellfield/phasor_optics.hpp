#pragma once

#include <array>
#include <cstdint>
#include <numbers>

#include "bellfield/quadrature.hpp"

namespace bellfield {

// A monochromatic real field a*cos(omega*t + phi), carried as (a, phi).
// The phase is stored unreduced; physical comparisons work mod 2pi.
struct Phasor {
  double amplitude = 0.0;  // >= 0, arbitrary field units
  double phase = 0.0;      // radians
};

// Equal amplitude and phases congruent mod 2pi, within tol.
bool physically_equal(const Phasor& a, const Phasor& b, double tol = 1e-12);

// Splitter factors apply to the field amplitude, not the energy: the
// default reflects and transmits half of the *field* and adds pi/2 on
// reflection. An energy-conserving 1/sqrt(2) variant is available for
// exploratory use; the normalized correlations are identical either way.
struct BeamSplitterConvention {
  double transmission_factor = 0.5;
  double reflection_factor = 0.5;
  double reflection_phase_shift = std::numbers::pi / 2.0;
};

BeamSplitterConvention amplitude_halving_convention();
BeamSplitterConvention energy_conserving_convention();

struct SplitField {
  Phasor transmitted;
  Phasor reflected;
};

SplitField apply_beam_splitter(const Phasor& input,
                               const BeamSplitterConvention& convention);

enum class DetectorId { D1, D2, D3, D4 };

// Per-path field bookkeeping at one detector. Every detector in this
// network receives exactly two paths: the unknown source first, the
// local reference second.
struct DetectorField {
  DetectorId detector = DetectorId::D1;
  std::array<Phasor, 2> contributions{};
};

using DetectorFields = std::array<DetectorField, 4>;

// One of the three physical inputs to the network.
struct FieldSource {
  double amplitude = 0.0;
  double phase = 0.0;                // radians
  double angular_frequency = kTwoPi;  // rad per unit time
};

// Phase of the unknown source: drawn uniformly on [0, 2pi) per run, or
// pinned to a fixed value (which kills every correlation downstream).
struct HiddenPhaseModel {
  enum class Kind { uniform, fixed };
  Kind kind = Kind::uniform;
  double fixed_theta = 0.0;  // radians, meaningful when kind == fixed
  std::uint64_t seed = 42;   // Monte Carlo stream seed

  static HiddenPhaseModel uniform_phase(std::uint64_t seed = 42) {
    return {Kind::uniform, 0.0, seed};
  }
  static HiddenPhaseModel fixed_phase(double theta) {
    return {Kind::fixed, theta, 0};
  }
};

// Parameters of the fixed two-homodyne network: an unknown source u of
// amplitude beta split toward both homodynes, and one reference arm of
// amplitude alpha per homodyne with phases theta1 (D1,D2) and theta2
// (D3,D4). All phases in radians; all three sources share one frequency.
struct InterferometerConfig {
  double alpha = 1.0;
  double beta = 2.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  HiddenPhaseModel hidden_phase{};
  BeamSplitterConvention convention{};
  double angular_frequency = kTwoPi;
};

// The three concrete sources (u, reference 1, reference 2) for a given
// hidden phase theta.
std::array<FieldSource, 3> sources(const InterferometerConfig& config,
                                   double theta);

// Walks the splitter network and returns the per-path contributions at
// each detector. The unknown source reflects at the first splitter toward
// the (D1,D2) homodyne and transmits toward the (D3,D4) homodyne; each
// reference beam meets its homodyne's splitter once.
DetectorFields propagate(const InterferometerConfig& config, double theta);

// Time-averaged intensity of the summed paths: (1/2)|sum_k a_k e^{i phi_k}|^2,
// the exact mean of (sum_k a_k cos(omega t + phi_k))^2 over a period.
double intensity(const DetectorField& field);

struct DetectorIntensities {
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double i4 = 0.0;
};

// Intensities at all four detectors conditional on the hidden phase,
// computed through propagate() + intensity().
DetectorIntensities conditional_intensities(const InterferometerConfig& config,
                                            double theta);

// Independent check of intensity(): numerically averages the squared
// instantaneous total field over an integer number of periods (composite
// midpoint rule). steps_per_period must be >= 64.
DetectorIntensities time_domain_oracle(const InterferometerConfig& config,
                                       double theta, int periods = 1,
                                       int steps_per_period = 4096);

}  // namespace bellfield
