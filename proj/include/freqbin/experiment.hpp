// Configuration-driven experiment runner: analytic curves, synthetic
// acquisition plus fitting, and the beta sweep that traces the phase law
// theta = 4 beta - pi/2.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freqbin/estimator.hpp"
#include "freqbin/twophoton.hpp"

namespace freqbin {

/// One run of the simulated experiment.  Exactly one of beta_deg /
/// theta_over_pi selects the projection phase; everything else carries the
/// bench defaults (100 MHz shift, 1 ns bins, +-500 ns window, 20 MHz
/// envelope bandwidth).
struct ExperimentConfig {
  std::optional<double> beta_deg;
  std::optional<double> theta_over_pi;
  double phi_deg = 45.0;
  double delta_mhz = 100.0;
  double gamma_equivalent_bandwidth_mhz = 20.0;
  double bin_ns = 1.0;
  double window_min_ns = -500.0;
  double window_max_ns = 500.0;
  double n_coincidences = 1e5;
  double background_per_bin = 0.0;
  std::uint64_t seed = 0;
  double path_phase_deg = 0.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Projection phase in radians, from beta via the phase law or directly
/// from theta_over_pi.
double resolved_theta(const ExperimentConfig& config);

/// Branch amplitudes of the full optical pipeline
/// (source -> beam splitter -> projection) packed for the beating law.
BeatParameters pipeline_beat_parameters(double theta, double phi,
                                        double delta,
                                        double path_phase = 0.0);

struct SimulateFitResult {
  double theta_true = 0.0;
  double v_true = 0.0;
  CoincidenceHistogram reference;
  CoincidenceHistogram beating;
  BeatFit fit;
};

/// Simulate the reference and beating histograms, normalize, and fit.
/// The two histograms use independent streams derived from config.seed.
SimulateFitResult run_simulate_fit(const ExperimentConfig& config);

struct SweepRow {
  double beta_deg = 0.0;
  double theta_hat = 0.0;   // radians
  double theta_sigma = 0.0; // radians
  bool ok = false;
  std::string error;
};

/// Full simulate -> normalize -> fit run per beta.  Run k uses seed
/// config.seed + k, so a single-entry sweep reproduces run_simulate_fit
/// exactly.  Per-row failures are recorded and the sweep continues.
std::vector<SweepRow> sweep_beta(const std::vector<double>& betas_deg,
                                 const ExperimentConfig& config);

/// Slope/intercept of unwrapped fitted phases against beta (radians).
LineFit fit_phase_law(const std::vector<SweepRow>& rows);

/// CSV of (tau_ns, g0, g56) over the configured window grid.  Returns
/// (theta, visibility) for reporting.
std::pair<double, double> write_analytic_csv(const ExperimentConfig& config,
                                             const std::string& path);

/// CSV with columns beta_deg,theta_hat_over_pi,theta_sigma_over_pi; failed
/// rows carry nan.
void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path);

/// Flat key-value JSON of the resolved configuration; reloadable as a
/// config file for bitwise-reproducible reruns.
std::string resolved_config_json(const ExperimentConfig& config);
void write_resolved_config(const ExperimentConfig& config,
                           const std::string& path);

/// Acquisition settings for the beating (stream 0) and reference
/// (stream 1) measurements of a run.
AcquisitionConfig acquisition_for(const ExperimentConfig& config,
                                  std::uint64_t stream);

}  // namespace freqbin
