// Synthetic coincidence-count histograms: per-bin expected counts from an
// analytic delay density, independent Poisson draws per bin, deterministic
// under a fixed seed.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "freqbin/correlation.hpp"

namespace freqbin {

struct AcquisitionConfig {
  double bin_width = 1e-9;      // seconds
  double window_min = -500e-9;  // seconds
  double window_max = 500e-9;   // seconds
  double total_coincidences = 1e5;
  double background_per_bin = 0.0;  // expected accidentals per bin
  std::uint64_t seed = 0;
};

struct CoincidenceHistogram {
  std::vector<double> bin_edges;  // size() + 1 entries, seconds
  std::vector<std::uint64_t> counts;
  AcquisitionConfig config;

  std::size_t size() const { return counts.size(); }
  double midpoint(std::size_t i) const {
    return 0.5 * (bin_edges[i] + bin_edges[i + 1]);
  }
};

using DensityFn = std::function<double(double)>;

/// Draw a histogram whose bin means are
///   mu_i = total * (integral of density over bin_i) / (integral over the
///   window) + background_per_bin,
/// with the bin integrals evaluated by 5-point Gauss-Legendre quadrature.
/// Each bin's counts come from an independent Philox substream keyed by
/// (seed, bin index), so identical configs give bitwise-identical output
/// in any evaluation order.  Throws if the density is negative, non-finite,
/// or identically zero over the window.
CoincidenceHistogram simulate_histogram(const DensityFn& density,
                                        const AcquisitionConfig& config);

/// Histogram of the bare envelope, density G0(|tau|); serves as the
/// normalization reference for the beating measurement.
CoincidenceHistogram simulate_reference(const BiphotonWaveform& waveform,
                                        const AcquisitionConfig& config);

/// CSV with header "tau_ns,count", one row per bin midpoint.
void write_histogram_csv(const CoincidenceHistogram& histogram,
                         const std::string& path);

/// JSON sidecar carrying the full acquisition configuration.
void write_acquisition_json(const AcquisitionConfig& config,
                            const std::string& path);
AcquisitionConfig read_acquisition_json(const std::string& path);

}  // namespace freqbin
