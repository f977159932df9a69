#include "bellfield/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "bellfield/discrete_joint.hpp"
#include "bellfield/errors.hpp"
#include "bellfield/linalg.hpp"
#include "bellfield/quadrature.hpp"
#include "bellfield/rng.hpp"

namespace bellfield {

namespace {

using json = nlohmann::ordered_json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

// The built-in analysis settings, in degrees: the CHSH quadruple
// (theta1, theta2, theta1', theta2') and the two three-variable sets.
constexpr std::array<double, 4> kChshAnglesDeg{60.0, 0.0, 90.0, 30.0};
const std::vector<double> kBell3AnglesDeg{0.0, 45.0, 90.0};
const std::vector<double> kCounterexampleAnglesDeg{0.0, 30.0, 45.0};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

}  // namespace

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::continuous:
      return "continuous";
    case RunMode::counts:
      return "counts";
    case RunMode::inequalities:
      return "inequalities";
    case RunMode::locality:
      return "locality";
    case RunMode::full:
      return "full";
  }
  return "full";
}

RunMode run_mode_from_string(const std::string& name) {
  if (name == "continuous") return RunMode::continuous;
  if (name == "counts") return RunMode::counts;
  if (name == "inequalities") return RunMode::inequalities;
  if (name == "locality") return RunMode::locality;
  if (name == "full") return RunMode::full;
  throw ValidationError("unknown mode \"" + name +
                        "\" (continuous|counts|inequalities|locality|full)");
}

InterferometerConfig ExperimentConfig::interferometer() const {
  InterferometerConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.theta1 = theta1_deg * kDegToRad;
  c.theta2 = theta2_deg * kDegToRad;
  c.hidden_phase = hidden_uniform
                       ? HiddenPhaseModel::uniform_phase(seed)
                       : HiddenPhaseModel::fixed_phase(hidden_fixed_deg * kDegToRad);
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) {
    throw ParseError("config: top level must be a JSON object");
  }

  static const std::vector<std::string> known{
      "alpha", "beta",    "theta1_deg", "theta2_deg",
      "hidden_phase", "samples", "seed",       "mode"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError("config: unknown key \"" + key + "\"");
    }
  }
  for (const char* required : {"alpha", "beta", "theta1_deg", "theta2_deg"}) {
    if (!j.contains(required)) {
      throw ValidationError(std::string("config: missing key \"") + required +
                            "\"");
    }
  }

  auto number = [&](const char* key) {
    if (!j[key].is_number()) {
      throw ValidationError(std::string("config: \"") + key +
                            "\" must be a number");
    }
    return j[key].get<double>();
  };

  ExperimentConfig c;
  c.alpha = number("alpha");
  c.beta = number("beta");
  c.theta1_deg = number("theta1_deg");
  c.theta2_deg = number("theta2_deg");
  if (!std::isfinite(c.alpha) || c.alpha < 0.0) {
    throw ValidationError("config: alpha must be finite and >= 0");
  }
  if (!std::isfinite(c.beta) || c.beta < 0.0) {
    throw ValidationError("config: beta must be finite and >= 0");
  }
  if (!std::isfinite(c.theta1_deg) || !std::isfinite(c.theta2_deg)) {
    throw ValidationError("config: angles must be finite");
  }

  if (j.contains("hidden_phase")) {
    const auto& h = j["hidden_phase"];
    if (h.is_string() && h.get<std::string>() == "uniform") {
      c.hidden_uniform = true;
    } else if (h.is_object() && h.size() == 1 && h.contains("fixed_deg") &&
               h["fixed_deg"].is_number()) {
      c.hidden_uniform = false;
      c.hidden_fixed_deg = h["fixed_deg"].get<double>();
      if (!std::isfinite(c.hidden_fixed_deg)) {
        throw ValidationError("config: hidden_phase.fixed_deg must be finite");
      }
    } else {
      throw ValidationError(
          "config: hidden_phase must be \"uniform\" or {\"fixed_deg\": x}");
    }
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_unsigned()) {
      throw ValidationError("config: samples must be a nonnegative integer");
    }
    c.samples = j["samples"].get<std::uint64_t>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw ValidationError("config: seed must be a nonnegative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) {
      throw ValidationError("config: mode must be a string");
    }
    c.mode = run_mode_from_string(j["mode"].get<std::string>());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

// ---------------------------------------------------------------------------
// Data table

static const char* kTableHeader = "run,theta_rad,I1,I2,I3,I4,x,y";

namespace {

void render_row(std::string& out, const DataRow& r) {
  out += std::to_string(r.run);
  out += ',';
  out += fmt17(r.theta_rad);
  for (double v : {r.i1, r.i2, r.i3, r.i4}) {
    out += ',';
    out += fmt17(v);
  }
  out += ',';
  if (r.x) out += std::to_string(*r.x);
  out += ',';
  if (r.y) out += std::to_string(*r.y);
  out += '\n';
}

double parse_double_field(const std::string& field, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw ParseError("table row " + std::to_string(row) +
                     ": bad numeric field \"" + field + "\"");
  }
  return v;
}

std::optional<int> parse_count_field(const std::string& field,
                                     std::size_t row) {
  if (field.empty()) return std::nullopt;
  if (field == "1" || field == "+1") return 1;
  if (field == "-1") return -1;
  throw ParseError("table row " + std::to_string(row) +
                   ": count fields must be empty, 1 or -1, got \"" + field +
                   "\"");
}

}  // namespace

std::string render_table_csv(const DataTable& table) {
  std::string out(kTableHeader);
  out += '\n';
  for (const DataRow& r : table.rows) render_row(out, r);
  return out;
}

DataTable parse_table_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader) {
    throw ParseError("table: missing or wrong header (expected \"" +
                     std::string(kTableHeader) + "\")");
  }
  DataTable table;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) {
      throw ParseError("table row " + std::to_string(row_no) + ": empty line");
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 8) {
      throw ParseError("table row " + std::to_string(row_no) + ": expected 8 "
                       "fields, got " + std::to_string(fields.size()));
    }
    DataRow r;
    try {
      std::size_t pos = 0;
      r.run = std::stoll(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument(fields[0]);
    } catch (const std::exception&) {
      throw ParseError("table row " + std::to_string(row_no) +
                       ": bad run id \"" + fields[0] + "\"");
    }
    r.theta_rad = parse_double_field(fields[1], row_no);
    r.i1 = parse_double_field(fields[2], row_no);
    r.i2 = parse_double_field(fields[3], row_no);
    r.i3 = parse_double_field(fields[4], row_no);
    r.i4 = parse_double_field(fields[5], row_no);
    r.x = parse_count_field(fields[6], row_no);
    r.y = parse_count_field(fields[7], row_no);
    if (!table.rows.empty() && r.run <= table.rows.back().run) {
      throw ParseError("table row " + std::to_string(row_no) +
                       ": run ids must increase");
    }
    table.rows.push_back(r);
  }
  return table;
}

void write_table(const DataTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open table file for writing: " + path.string());
  }
  out << kTableHeader << '\n';
  std::string buf;
  for (const DataRow& r : table.rows) {
    buf.clear();
    render_row(buf, r);
    out << buf;
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

DataTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open table file: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_table_csv(text.str());
}

CorrelationMatrix parse_correlation_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string token;
    while (ls >> token) {
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) {
        throw ParseError("matrix line " + std::to_string(line_no) +
                         ": bad entry \"" + token + "\"");
      }
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix: no rows");
  const std::size_t n = rows.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) {
      throw ParseError("matrix: row " + std::to_string(r + 1) + " has " +
                       std::to_string(rows[r].size()) + " entries, expected " +
                       std::to_string(n));
    }
  }

  CorrelationMatrix m;
  m.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      m.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
  for (std::size_t i = 0; i < n; ++i) {
    m.labels.push_back("theta" + std::to_string(i + 1));
  }

  if (!linalg::is_symmetric(m.entries)) {
    throw NonSymmetricError("matrix: not symmetric within 1e-12");
  }
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    if (std::abs(m.entries(i, i) - 1.0) > 1e-12) {
      throw ValidationError("matrix: diagonal must be 1 within 1e-12");
    }
    m.entries(i, i) = 1.0;
  }
  // Collapse <= 1e-12 asymmetry so downstream sees an exactly symmetric matrix.
  m.entries = ((m.entries + m.entries.transpose()) / 2.0).eval();
  validate(m);
  return m;
}

CorrelationMatrix read_correlation_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open matrix file: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_correlation_matrix(text.str());
}

// ---------------------------------------------------------------------------
// Locality

LocalityCheckResult locality_check_network(const InterferometerConfig& config,
                                           const NetworkFn& network,
                                           int distant_grid_points,
                                           int theta_grid_points) {
  if (distant_grid_points < 2 || theta_grid_points < 1) {
    throw ValidationError("locality_check: grids need >= 2 / >= 1 points");
  }
  if (config.alpha * config.beta == 0.0) {
    return LocalityCheckResult{
        0.0, true,
        "alpha*beta == 0: both homodyne expectations vanish identically; the "
        "check passes vacuously"};
  }

  auto expectation = [&](const InterferometerConfig& c, double theta,
                         HomodyneSide side) {
    const DetectorFields f = network(c, theta);
    const double a = intensity(f[side == HomodyneSide::homodyne12 ? 0 : 2]);
    const double b = intensity(f[side == HomodyneSide::homodyne12 ? 1 : 3]);
    const double sum = a + b;
    return sum == 0.0 ? 0.0 : (a - b) / sum;
  };

  double max_residual = 0.0;
  for (int k = 0; k < theta_grid_points; ++k) {
    const double theta = kTwoPi * k / theta_grid_points;

    // E(X | theta1, theta2, theta) must not move when theta2 does.
    const double ex_ref = expectation(config, theta, HomodyneSide::homodyne12);
    for (int g = 0; g < distant_grid_points; ++g) {
      InterferometerConfig c = config;
      c.theta2 = kTwoPi * g / distant_grid_points;
      const double ex = expectation(c, theta, HomodyneSide::homodyne12);
      max_residual = std::max(max_residual, std::abs(ex - ex_ref));
    }
    // Mirrored check: E(Y | ...) against theta1.
    const double ey_ref = expectation(config, theta, HomodyneSide::homodyne34);
    for (int g = 0; g < distant_grid_points; ++g) {
      InterferometerConfig c = config;
      c.theta1 = kTwoPi * g / distant_grid_points;
      const double ey = expectation(c, theta, HomodyneSide::homodyne34);
      max_residual = std::max(max_residual, std::abs(ey - ey_ref));
    }
  }
  return LocalityCheckResult{max_residual, false, ""};
}

LocalityCheckResult locality_check(const ExperimentConfig& config,
                                   int theta2_grid_points) {
  return locality_check_network(
      config.interferometer(),
      [](const InterferometerConfig& c, double th) { return propagate(c, th); },
      theta2_grid_points);
}

// ---------------------------------------------------------------------------
// Monte Carlo CHSH

MomentEstimate mc_estimate_chsh(const InterferometerConfig& base,
                                const std::array<double, 4>& angles,
                                std::uint64_t samples, std::uint64_t seed) {
  if (base.hidden_phase.kind != HiddenPhaseModel::Kind::uniform) {
    throw ZeroVarianceError("mc_estimate_chsh: fixed hidden phase");
  }
  if (base.alpha * base.beta == 0.0) {
    throw ZeroVarianceError("mc_estimate_chsh: alpha*beta == 0");
  }
  if (samples < 1000) {
    throw ValidationError("mc_estimate_chsh: needs >= 1000 samples");
  }

  const double t1 = angles[0], t2 = angles[1], t1p = angles[2], t2p = angles[3];
  InterferometerConfig cx1 = base, cx2 = base, cy1 = base, cy2 = base;
  cx1.theta1 = t1;
  cx2.theta1 = t1p;
  cy1.theta2 = t2;
  cy2.theta2 = t2p;

  // Per batch: first and second moments of both X-side differences, both
  // Y-side differences, and the four cross products.
  struct Sums {
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    double x1x1 = 0, x2x2 = 0, y1y1 = 0, y2y2 = 0;
    double x1y1 = 0, x1y2 = 0, x2y1 = 0, x2y2 = 0;
    std::uint64_t n = 0;
    double chsh() const {
      const double inv = 1.0 / static_cast<double>(n);
      const double mx1 = x1 * inv, mx2 = x2 * inv;
      const double my1 = y1 * inv, my2 = y2 * inv;
      const double sx1 = std::sqrt(x1x1 * inv - mx1 * mx1);
      const double sx2 = std::sqrt(x2x2 * inv - mx2 * mx2);
      const double sy1 = std::sqrt(y1y1 * inv - my1 * my1);
      const double sy2 = std::sqrt(y2y2 * inv - my2 * my2);
      const double r11 = (x1y1 * inv - mx1 * my1) / (sx1 * sy1);
      const double r12 = (x1y2 * inv - mx1 * my2) / (sx1 * sy2);
      const double r21 = (x2y1 * inv - mx2 * my1) / (sx2 * sy1);
      const double r22 = (x2y2 * inv - mx2 * my2) / (sx2 * sy2);
      return r11 - r12 + r21 + r22;
    }
    void add(double dx1, double dx2, double dy1, double dy2) {
      x1 += dx1;
      x2 += dx2;
      y1 += dy1;
      y2 += dy2;
      x1x1 += dx1 * dx1;
      x2x2 += dx2 * dx2;
      y1y1 += dy1 * dy1;
      y2y2 += dy2 * dy2;
      x1y1 += dx1 * dy1;
      x1y2 += dx1 * dy2;
      x2y1 += dx2 * dy1;
      x2y2 += dx2 * dy2;
      ++n;
    }
  };

  std::vector<Sums> batches(kMcBatches);
  Sums total;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double theta = kTwoPi * rng::uniform01(seed, 3 * i);
    const auto ix1 = conditional_intensities(cx1, theta);
    const auto ix2 = conditional_intensities(cx2, theta);
    const auto iy1 = conditional_intensities(cy1, theta);
    const auto iy2 = conditional_intensities(cy2, theta);
    const double dx1 = ix1.i1 - ix1.i2;
    const double dx2 = ix2.i1 - ix2.i2;
    const double dy1 = iy1.i3 - iy1.i4;
    const double dy2 = iy2.i3 - iy2.i4;
    total.add(dx1, dx2, dy1, dy2);
    batches[static_cast<std::size_t>(i * kMcBatches / samples)].add(dx1, dx2,
                                                                    dy1, dy2);
  }

  double mean_b = 0.0;
  int used = 0;
  for (const Sums& b : batches) {
    if (b.n >= 2) {
      mean_b += b.chsh();
      ++used;
    }
  }
  mean_b /= used;
  double var_b = 0.0;
  for (const Sums& b : batches) {
    if (b.n >= 2) {
      const double d = b.chsh() - mean_b;
      var_b += d * d;
    }
  }
  var_b /= (used - 1);

  MomentEstimate est;
  est.value = total.chsh();
  est.standard_error = std::sqrt(var_b / used);
  est.method = MomentEstimate::Method::monte_carlo;
  est.count = samples;
  est.seed = seed;
  return est;
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

MatrixSection make_matrix_section(const std::vector<double>& angles_deg,
                                  bool with_discrete) {
  AngleSet set;
  for (double d : angles_deg) set.angles.push_back(d * kDegToRad);
  set.convention = SignConvention::second_minus_first;
  const CorrelationMatrix cm = build_correlation_matrix(set);

  MatrixSection sec;
  sec.angles_deg = angles_deg;
  sec.matrix = cm.entries;
  const Bell3Result b3 =
      bell3_sum(cm.entries(0, 1), cm.entries(0, 2), cm.entries(1, 2));
  sec.bell3 = b3.value;
  sec.bell3_satisfied = b3.satisfied;
  const ContinuousJointResult joint = joint_exists_continuous(cm);
  sec.eigenvalues = joint.eigenvalues;
  sec.joint_exists = joint.exists;
  sec.psd_tolerance = joint.tolerance;
  sec.determinant = linalg::determinant_cofactor(cm.entries);
  if (with_discrete) {
    const std::vector<PairTarget> targets{{0, 1, cm.entries(0, 1)},
                                          {0, 2, cm.entries(0, 2)},
                                          {1, 2, cm.entries(1, 2)}};
    const auto lp = joint_exists_discrete(3, {0.0, 0.0, 0.0}, targets);
    sec.discrete_feasible = lp.feasible;
    sec.lp_tolerance = lp.tolerance;
  }
  return sec;
}

ChshSection make_chsh_section() {
  ChshSection sec;
  sec.angles_deg = kChshAnglesDeg;
  const double t1 = kChshAnglesDeg[0] * kDegToRad;
  const double t2 = kChshAnglesDeg[1] * kDegToRad;
  const double t1p = kChshAnglesDeg[2] * kDegToRad;
  const double t2p = kChshAnglesDeg[3] * kDegToRad;
  sec.rho_12 = intensity_correlation_closed_form(t1, t2);
  sec.rho_12p = intensity_correlation_closed_form(t1, t2p);
  sec.rho_1p2 = intensity_correlation_closed_form(t1p, t2);
  sec.rho_1p2p = intensity_correlation_closed_form(t1p, t2p);
  const ChshResult s =
      chsh_value(intensity_correlation_closed_form, t1, t2, t1p, t2p);
  sec.s_value = s.value;
  sec.violated = s.violated;
  sec.completion = complete_chsh_matrix(
      ChshCorrelations{sec.rho_12, sec.rho_12p, sec.rho_1p2, sec.rho_1p2p});
  return sec;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& config) {
  if (config.alpha < 0.0 || config.beta < 0.0) {
    throw ValidationError("run_experiment: amplitudes must be >= 0");
  }

  const InterferometerConfig icfg = config.interferometer();
  const bool uniform = config.hidden_uniform;
  const bool zero_variance = config.alpha * config.beta == 0.0;
  const bool dark = config.alpha == 0.0 && config.beta == 0.0;
  const RunMode mode = config.mode;

  const bool want_table = mode == RunMode::continuous ||
                          mode == RunMode::counts || mode == RunMode::full;
  const bool want_correlation =
      mode == RunMode::continuous || mode == RunMode::full;
  const bool want_counts = mode == RunMode::counts || mode == RunMode::full;
  const bool want_inequalities =
      mode == RunMode::inequalities || mode == RunMode::full;
  const bool want_locality = mode == RunMode::locality || mode == RunMode::full;
  const bool mc_possible = uniform && config.samples >= 1000;

  RunOutput out;
  out.report.config = config;
  auto& notes = out.report.notes;

  if (!uniform) {
    notes.push_back(
        "hidden phase fixed at " + fmt(config.hidden_fixed_deg) +
        " deg: the intensity differences carry no variance, correlations are "
        "undefined and no violation is claimed");
  }
  if (zero_variance && !dark) {
    notes.push_back(
        "alpha*beta == 0: one arm is dark, the homodyne differences have zero "
        "variance and correlations are undefined");
  }
  if (uniform && config.samples > 0 && config.samples < 1000) {
    notes.push_back(
        "samples < 1000: Monte Carlo estimates skipped (analytic and "
        "quadrature results only)");
  }

  // -- data table ----------------------------------------------------------
  if (want_table && config.samples > 0) {
    const bool fill_counts =
        (mode == RunMode::counts || mode == RunMode::full) && uniform && !dark;
    out.table.rows.reserve(static_cast<std::size_t>(config.samples));
    if (fill_counts) {
      const CountModelParams params{icfg, 1.0};
      const auto samples = sample_counts(
          params, static_cast<std::int64_t>(config.samples), config.seed);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto in = conditional_intensities(icfg, samples[i].theta);
        DataRow r;
        r.run = static_cast<std::int64_t>(i);
        r.theta_rad = samples[i].theta;
        r.i1 = in.i1;
        r.i2 = in.i2;
        r.i3 = in.i3;
        r.i4 = in.i4;
        r.x = samples[i].x;
        r.y = samples[i].y;
        out.table.rows.push_back(r);
      }
    } else {
      for (std::uint64_t i = 0; i < config.samples; ++i) {
        const double theta =
            uniform ? kTwoPi * rng::uniform01(config.seed, 3 * i)
                    : icfg.hidden_phase.fixed_theta;
        const auto in = conditional_intensities(icfg, theta);
        DataRow r;
        r.run = static_cast<std::int64_t>(i);
        r.theta_rad = theta;
        r.i1 = in.i1;
        r.i2 = in.i2;
        r.i3 = in.i3;
        r.i4 = in.i4;
        out.table.rows.push_back(r);
      }
      if ((mode == RunMode::counts || mode == RunMode::full) && !uniform) {
        notes.push_back(
            "counts not sampled: the count model needs the uniform "
            "hidden-phase model");
      }
      if ((mode == RunMode::counts || mode == RunMode::full) && dark) {
        notes.push_back("counts not sampled: no light reaches the detectors");
      }
    }
  }

  // -- continuous correlation ----------------------------------------------
  if (want_correlation && uniform && !zero_variance) {
    CorrelationSection sec;
    sec.analytic = intensity_correlation_closed_form(icfg.theta1, icfg.theta2);
    sec.quadrature = intensity_correlation(icfg);
    if (mc_possible) {
      sec.mc = mc_estimate_correlation(icfg, config.samples, config.seed);
    }
    out.report.correlation = sec;
  }

  // -- inequalities ----------------------------------------------------------
  if (want_inequalities) {
    ChshSection chsh = make_chsh_section();
    if (mode == RunMode::full && mc_possible && !zero_variance) {
      std::array<double, 4> rad{};
      for (std::size_t i = 0; i < 4; ++i) rad[i] = kChshAnglesDeg[i] * kDegToRad;
      chsh.mc_s = mc_estimate_chsh(icfg, rad, config.samples, config.seed);
    }
    out.report.chsh = chsh;
    out.report.bell3_matrix = make_matrix_section(kBell3AnglesDeg, true);
    out.report.counterexample = make_matrix_section(kCounterexampleAnglesDeg, true);
  }

  // -- counts -----------------------------------------------------------------
  if (want_counts && uniform && !dark) {
    const CountModelParams params{icfg, 1.0};
    CountsSection sec;
    sec.visibility = visibility(icfg);
    const auto analytic = analytic_count_correlation(params);
    sec.analytic_value = analytic.value;
    sec.closed_form = analytic.closed_form;
    for (const std::string& n : analytic.notes) notes.push_back(n);
    if (mc_possible) {
      std::vector<CountSample> samples;
      samples.reserve(out.table.rows.size());
      if (!out.table.rows.empty() && out.table.rows.front().x) {
        for (const DataRow& r : out.table.rows) {
          samples.push_back(CountSample{r.theta_rad, *r.x, *r.y});
        }
      } else {
        samples = sample_counts(
            params, static_cast<std::int64_t>(config.samples), config.seed);
      }
      sec.mc = estimate_count_correlation(samples);
    }
    out.report.counts = sec;
  }

  // -- locality -----------------------------------------------------------------
  if (want_locality) {
    const LocalityCheckResult r = locality_check(config);
    LocalitySection sec;
    sec.max_residual = r.max_residual;
    sec.threshold = 1e-12;
    sec.vacuous = r.vacuous;
    sec.pass = r.vacuous || r.max_residual <= sec.threshold;
    sec.note = r.note;
    out.report.locality = sec;
  }

  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string fmt_estimate(const MomentEstimate& e) {
  std::string s = fmt(e.value);
  s += " +/- ";
  s += fmt(e.standard_error);
  s += " (n=" + std::to_string(e.count) + ", seed=" + std::to_string(e.seed) +
       ")";
  return s;
}

std::string join_eigenvalues(const std::vector<double>& vals) {
  std::string s;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) s += ", ";
    s += fmt(vals[i]);
  }
  return s;
}

std::string render_text(const RunReport& r) {
  std::ostringstream o;
  const auto& c = r.config;
  o << "bellfield report\n";
  o << "mode: " << to_string(c.mode) << "\n";
  o << "config: alpha=" << fmt(c.alpha) << " beta=" << fmt(c.beta)
    << " theta1=" << fmt(c.theta1_deg) << " deg theta2=" << fmt(c.theta2_deg)
    << " deg hidden="
    << (c.hidden_uniform ? std::string("uniform")
                         : "fixed(" + fmt(c.hidden_fixed_deg) + " deg)")
    << " samples=" << c.samples << " seed=" << c.seed << "\n";

  o << "\n[intensity correlation]\n";
  if (r.correlation) {
    o << "analytic rho = " << fmt(r.correlation->analytic) << "\n";
    o << "quadrature rho = " << fmt(r.correlation->quadrature) << "\n";
    if (r.correlation->mc) {
      o << "monte carlo rho = " << fmt_estimate(*r.correlation->mc) << "\n";
    } else {
      o << "monte carlo rho = not run\n";
    }
  } else {
    o << "not run\n";
  }

  o << "\n[chsh]\n";
  if (r.chsh) {
    const auto& s = *r.chsh;
    o << "angles (deg): theta1=" << fmt(s.angles_deg[0])
      << " theta2=" << fmt(s.angles_deg[1]) << " theta1'=" << fmt(s.angles_deg[2])
      << " theta2'=" << fmt(s.angles_deg[3]) << "\n";
    o << "rho(t1,t2)=" << fmt(s.rho_12) << " rho(t1,t2')=" << fmt(s.rho_12p)
      << " rho(t1',t2)=" << fmt(s.rho_1p2) << " rho(t1',t2')="
      << fmt(s.rho_1p2p) << "\n";
    o << "CHSH S = " << fmt(s.s_value)
      << (s.violated ? " VIOLATED (|S| > 2)" : " satisfied (|S| <= 2)") << "\n";
    if (s.mc_s) {
      o << "monte carlo S = " << fmt_estimate(*s.mc_s) << "\n";
    } else {
      o << "monte carlo S = not run\n";
    }
    o << "completion: best missing pair (rho11', rho22') = ("
      << fmt(s.completion.rho_11p) << ", " << fmt(s.completion.rho_22p)
      << "), min eigenvalue " << fmt(s.completion.min_eigenvalue)
      << ", PSD completion "
      << (s.completion.any_psd_completion ? "exists" : "does not exist") << "\n";
  } else {
    o << "not run\n";
  }

  auto matrix_block = [&](const char* title,
                          const std::optional<MatrixSection>& sec) {
    o << "\n[" << title << "]\n";
    if (!sec) {
      o << "not run\n";
      return;
    }
    o << "settings (deg):";
    for (double d : sec->angles_deg) o << " " << fmt(d);
    o << "\n";
    o << "bell3 sum = " << fmt(sec->bell3)
      << (sec->bell3_satisfied ? " satisfied (>= -1)" : " VIOLATED (< -1)")
      << "\n";
    o << "eigenvalues: " << join_eigenvalues(sec->eigenvalues) << "\n";
    o << "determinant = " << fmt(sec->determinant) << "\n";
    o << "joint distribution (continuous): "
      << (sec->joint_exists ? "exists" : "does not exist")
      << " (min eigenvalue >= -" << fmt(sec->psd_tolerance)
      << " * max(1, max eigenvalue): " << (sec->joint_exists ? "yes" : "no")
      << ")\n";
    if (sec->discrete_feasible) {
      o << "joint distribution (discrete +-1): "
        << (*sec->discrete_feasible ? "feasible" : "infeasible") << " (LP tol "
        << fmt(sec->lp_tolerance) << ")\n";
    }
  };
  matrix_block("three-variable matrix, settings 0/45/90", r.bell3_matrix);
  matrix_block("three-variable matrix, settings 0/30/45", r.counterexample);

  o << "\n[counts]\n";
  if (r.counts) {
    o << "visibility = " << fmt(r.counts->visibility) << "\n";
    o << "analytic rho(X,Y) = " << fmt(r.counts->analytic_value)
      << " (closed form " << fmt(r.counts->closed_form) << ")\n";
    if (r.counts->mc) {
      o << "monte carlo rho(X,Y) = " << fmt_estimate(*r.counts->mc) << "\n";
    } else {
      o << "monte carlo rho(X,Y) = not run\n";
    }
  } else {
    o << "not run\n";
  }

  o << "\n[locality]\n";
  if (r.locality) {
    o << "max residual = " << fmt(r.locality->max_residual)
      << " threshold = " << fmt(r.locality->threshold) << " "
      << (r.locality->pass ? "PASS" : "FAIL")
      << (r.locality->vacuous ? " (vacuous)" : "") << "\n";
    if (!r.locality->note.empty()) o << "note: " << r.locality->note << "\n";
  } else {
    o << "not run\n";
  }

  o << "\nnotes:\n";
  if (r.notes.empty()) {
    o << "(none)\n";
  } else {
    for (const std::string& n : r.notes) o << "- " << n << "\n";
  }
  return o.str();
}

json estimate_json(const MomentEstimate& e) {
  json j;
  j["value"] = e.value;
  j["standard_error"] = e.standard_error;
  j["samples"] = e.count;
  j["seed"] = e.seed;
  return j;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json render_json(const RunReport& r) {
  const auto& c = r.config;
  json j;
  j["mode"] = to_string(c.mode);
  json cfg;
  cfg["alpha"] = c.alpha;
  cfg["beta"] = c.beta;
  cfg["theta1_deg"] = c.theta1_deg;
  cfg["theta2_deg"] = c.theta2_deg;
  if (c.hidden_uniform) {
    cfg["hidden_phase"] = "uniform";
  } else {
    cfg["hidden_phase"] = json{{"fixed_deg", c.hidden_fixed_deg}};
  }
  cfg["samples"] = c.samples;
  cfg["seed"] = c.seed;
  cfg["mode"] = to_string(c.mode);
  j["config"] = cfg;

  if (r.correlation) {
    json s;
    s["analytic"] = r.correlation->analytic;
    s["quadrature"] = r.correlation->quadrature;
    s["monte_carlo"] =
        r.correlation->mc ? estimate_json(*r.correlation->mc) : json(nullptr);
    j["intensity_correlation"] = s;
  } else {
    j["intensity_correlation"] = nullptr;
  }

  if (r.chsh) {
    const auto& sec = *r.chsh;
    json s;
    s["angles_deg"] = sec.angles_deg;
    s["rho_12"] = sec.rho_12;
    s["rho_12p"] = sec.rho_12p;
    s["rho_1p2"] = sec.rho_1p2;
    s["rho_1p2p"] = sec.rho_1p2p;
    s["s_value"] = sec.s_value;
    s["violated"] = sec.violated;
    s["monte_carlo_s"] = sec.mc_s ? estimate_json(*sec.mc_s) : json(nullptr);
    json comp;
    comp["rho_11p"] = sec.completion.rho_11p;
    comp["rho_22p"] = sec.completion.rho_22p;
    comp["min_eigenvalue"] = sec.completion.min_eigenvalue;
    comp["any_psd_completion"] = sec.completion.any_psd_completion;
    comp["psd_tolerance"] = kPsdTolerance;
    s["completion"] = comp;
    j["chsh"] = s;
  } else {
    j["chsh"] = nullptr;
  }

  auto matrix_section_json = [&](const std::optional<MatrixSection>& sec) {
    if (!sec) return json(nullptr);
    json s;
    s["settings_deg"] = sec->angles_deg;
    s["matrix"] = matrix_json(sec->matrix);
    s["bell3_sum"] = sec->bell3;
    s["bell3_satisfied"] = sec->bell3_satisfied;
    s["eigenvalues"] = sec->eigenvalues;
    s["determinant"] = sec->determinant;
    s["joint_exists_continuous"] = sec->joint_exists;
    s["psd_tolerance"] = sec->psd_tolerance;
    if (sec->discrete_feasible) {
      s["joint_exists_discrete"] = *sec->discrete_feasible;
      s["lp_tolerance"] = sec->lp_tolerance;
    } else {
      s["joint_exists_discrete"] = nullptr;
    }
    return s;
  };
  j["bell3_matrix"] = matrix_section_json(r.bell3_matrix);
  j["counterexample_matrix"] = matrix_section_json(r.counterexample);

  if (r.counts) {
    json s;
    s["visibility"] = r.counts->visibility;
    s["analytic"] = r.counts->analytic_value;
    s["closed_form"] = r.counts->closed_form;
    s["monte_carlo"] = r.counts->mc ? estimate_json(*r.counts->mc) : json(nullptr);
    j["counts"] = s;
  } else {
    j["counts"] = nullptr;
  }

  if (r.locality) {
    json s;
    s["max_residual"] = r.locality->max_residual;
    s["threshold"] = r.locality->threshold;
    s["pass"] = r.locality->pass;
    s["vacuous"] = r.locality->vacuous;
    s["note"] = r.locality->note;
    j["locality"] = s;
  } else {
    j["locality"] = nullptr;
  }

  j["notes"] = r.notes;
  return j;
}

}  // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::text) {
    return render_text(report);
  }
  return render_json(report).dump(2) + "\n";
}

}  // namespace bellfield
