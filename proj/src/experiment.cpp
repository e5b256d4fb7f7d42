#include "freqbin/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "freqbin/philox.hpp"
#include "freqbin/polarization.hpp"
#include "json.hpp"

namespace freqbin {

namespace {

constexpr double kPi = std::numbers::pi;

double radians(double degrees) { return degrees * kPi / 180.0; }

BiphotonWaveform waveform_for(const ExperimentConfig& config) {
  return BiphotonWaveform::from_bandwidth_mhz(
      config.gamma_equivalent_bandwidth_mhz);
}

double delta_for(const ExperimentConfig& config) {
  return 2.0 * kPi * config.delta_mhz * 1e6;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (beta_deg.has_value() == theta_over_pi.has_value())
    throw std::invalid_argument(
        "config: exactly one of beta-deg / theta-over-pi must be set");
  if (phi_deg < 0.0 || phi_deg > 90.0)
    throw std::invalid_argument("config: phi-deg must lie in [0, 90]");
  if (delta_mhz <= 0.0)
    throw std::invalid_argument("config: delta-mhz must be positive");
  if (gamma_equivalent_bandwidth_mhz <= 0.0)
    throw std::invalid_argument(
        "config: gamma-equivalent-bandwidth-mhz must be positive");
  if (bin_ns <= 0.0)
    throw std::invalid_argument("config: bin-ns must be positive");
  if (window_min_ns >= window_max_ns)
    throw std::invalid_argument("config: window-ns must satisfy min < max");
  if (n_coincidences < 0.0)
    throw std::invalid_argument("config: n-coincidences must be >= 0");
  if (background_per_bin < 0.0)
    throw std::invalid_argument("config: background-per-bin must be >= 0");
}

double resolved_theta(const ExperimentConfig& config) {
  config.validate();
  if (config.beta_deg.has_value())
    return phase_of_t3(radians(*config.beta_deg));
  return wrap_two_pi(*config.theta_over_pi * kPi);
}

BeatParameters pipeline_beat_parameters(double theta, double phi,
                                        double delta, double path_phase) {
  const TwoPhotonState projected = apply_projection(
      apply_beamsplitter(source_state(path_phase)), {theta, phi});
  const auto [c1, c2] = branch_amplitudes(projected);
  return {delta, c1, c2};
}

AcquisitionConfig acquisition_for(const ExperimentConfig& config,
                                  std::uint64_t stream) {
  AcquisitionConfig acq;
  acq.bin_width = config.bin_ns * 1e-9;
  acq.window_min = config.window_min_ns * 1e-9;
  acq.window_max = config.window_max_ns * 1e-9;
  acq.total_coincidences = config.n_coincidences;
  acq.background_per_bin = config.background_per_bin;
  acq.seed = splitmix64(config.seed ^
                        (0x9E3779B97F4A7C15ull * (stream + 1)));
  return acq;
}

SimulateFitResult run_simulate_fit(const ExperimentConfig& config) {
  config.validate();

  SimulateFitResult result;
  result.theta_true = resolved_theta(config);
  const double phi = radians(config.phi_deg);
  result.v_true = visibility(phi);

  const BiphotonWaveform waveform = waveform_for(config);
  const double delta = delta_for(config);
  const BeatParameters beat = pipeline_beat_parameters(
      result.theta_true, phi, delta, radians(config.path_phase_deg));

  result.beating = simulate_histogram(
      [&](double tau) { return beating_g2(waveform, beat, tau); },
      acquisition_for(config, 0));
  result.reference =
      simulate_reference(waveform, acquisition_for(config, 1));

  const NormalizedBeating normalized =
      normalize(result.beating, result.reference);
  result.fit = fit_beating(normalized, delta);
  return result;
}

std::vector<SweepRow> sweep_beta(const std::vector<double>& betas_deg,
                                 const ExperimentConfig& config) {
  std::vector<SweepRow> rows;
  rows.reserve(betas_deg.size());
  for (std::size_t k = 0; k < betas_deg.size(); ++k) {
    ExperimentConfig run = config;
    run.beta_deg = betas_deg[k];
    run.theta_over_pi.reset();
    run.seed = config.seed + k;
    SweepRow row;
    row.beta_deg = betas_deg[k];
    try {
      const SimulateFitResult result = run_simulate_fit(run);
      row.theta_hat = result.fit.theta_hat;
      row.theta_sigma = result.fit.theta_sigma;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

LineFit fit_phase_law(const std::vector<SweepRow>& rows) {
  std::vector<double> betas;
  std::vector<double> phases;
  for (const SweepRow& row : rows) {
    if (!row.ok) continue;
    betas.push_back(radians(row.beta_deg));
    phases.push_back(row.theta_hat);
  }
  const std::vector<double> unwrapped = unwrap_phases(phases);
  return fit_line(betas, unwrapped);
}

std::pair<double, double> write_analytic_csv(const ExperimentConfig& config,
                                             const std::string& path) {
  config.validate();
  const double theta = resolved_theta(config);
  const double phi = radians(config.phi_deg);
  const double v = visibility(phi);

  const BiphotonWaveform waveform = waveform_for(config);
  const double delta = delta_for(config);
  const BeatParameters beat = pipeline_beat_parameters(
      theta, phi, delta, radians(config.path_phase_deg));

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "tau_ns,g0,g56\n";
  const double bin_s = config.bin_ns * 1e-9;
  const double lo = config.window_min_ns * 1e-9;
  const double hi = config.window_max_ns * 1e-9;
  const auto n = static_cast<std::size_t>(
      std::max<long long>(1, std::llround((hi - lo) / bin_s)));
  char line[96];
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = lo + (static_cast<double>(i) + 0.5) * bin_s;
    std::snprintf(line, sizeof(line), "%.6f,%.12g,%.12g\n", tau * 1e9,
                  envelope_g2(waveform, std::abs(tau)),
                  beating_g2(waveform, beat, tau));
    out << line;
  }
  return {theta, v};
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "beta_deg,theta_hat_over_pi,theta_sigma_over_pi\n";
  char line[96];
  for (const SweepRow& row : rows) {
    if (row.ok)
      std::snprintf(line, sizeof(line), "%.6f,%.12g,%.12g\n", row.beta_deg,
                    row.theta_hat / kPi, row.theta_sigma / kPi);
    else
      std::snprintf(line, sizeof(line), "%.6f,nan,nan\n", row.beta_deg);
    out << line;
  }
}

std::string resolved_config_json(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  if (config.beta_deg.has_value()) j["beta-deg"] = *config.beta_deg;
  if (config.theta_over_pi.has_value())
    j["theta-over-pi"] = *config.theta_over_pi;
  j["phi-deg"] = config.phi_deg;
  j["delta-mhz"] = config.delta_mhz;
  j["gamma-equivalent-bandwidth-mhz"] =
      config.gamma_equivalent_bandwidth_mhz;
  j["bin-ns"] = config.bin_ns;
  j["window-ns"] = {config.window_min_ns, config.window_max_ns};
  j["n-coincidences"] = config.n_coincidences;
  j["background-per-bin"] = config.background_per_bin;
  j["seed"] = config.seed;
  j["path-phase-deg"] = config.path_phase_deg;
  return j.dump(2) + "\n";
}

void write_resolved_config(const ExperimentConfig& config,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << resolved_config_json(config);
}

}  // namespace freqbin
