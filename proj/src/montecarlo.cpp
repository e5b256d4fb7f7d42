#include "freqbin/montecarlo.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "freqbin/philox.hpp"
#include "json.hpp"

namespace freqbin {

namespace {

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
constexpr std::array<double, 5> kWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

double bin_mass(const DensityFn& density, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double value = density(center + half * kNodes[k]);
    if (!std::isfinite(value) || value < 0.0)
      throw std::invalid_argument(
          "simulate_histogram: density must be finite and non-negative");
    sum += kWeights[k] * value;
  }
  return sum * half;
}

void validate(const AcquisitionConfig& config) {
  if (config.bin_width <= 0.0)
    throw std::invalid_argument("bin_width must be positive");
  if (config.window_min >= config.window_max)
    throw std::invalid_argument("window must satisfy min < max");
  if (config.total_coincidences < 0.0)
    throw std::invalid_argument("total_coincidences must be non-negative");
  if (config.background_per_bin < 0.0)
    throw std::invalid_argument("background_per_bin must be non-negative");
}

}  // namespace

CoincidenceHistogram simulate_histogram(const DensityFn& density,
                                        const AcquisitionConfig& config) {
  validate(config);

  const double span = config.window_max - config.window_min;
  const auto n_bins = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(span / config.bin_width)));

  CoincidenceHistogram histogram;
  histogram.config = config;
  histogram.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    histogram.bin_edges[i] =
        config.window_min + static_cast<double>(i) * config.bin_width;

  std::vector<double> masses(n_bins);
  double total_mass = 0.0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    masses[i] =
        bin_mass(density, histogram.bin_edges[i], histogram.bin_edges[i + 1]);
    total_mass += masses[i];
  }
  if (total_mass <= 0.0 && config.total_coincidences > 0.0)
    throw std::invalid_argument(
        "simulate_histogram: density vanishes over the whole window");

  histogram.counts.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) {
    const double mu =
        (total_mass > 0.0
             ? config.total_coincidences * masses[i] / total_mass
             : 0.0) +
        config.background_per_bin;
    PhiloxStream stream(config.seed, static_cast<std::uint64_t>(i));
    histogram.counts[i] = poisson_draw(mu, stream);
  }
  return histogram;
}

CoincidenceHistogram simulate_reference(const BiphotonWaveform& waveform,
                                        const AcquisitionConfig& config) {
  return simulate_histogram(
      [&waveform](double tau) { return envelope_g2(waveform, std::abs(tau)); },
      config);
}

void write_histogram_csv(const CoincidenceHistogram& histogram,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "tau_ns,count\n";
  char line[64];
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.6f,%llu\n",
                  histogram.midpoint(i) * 1e9,
                  static_cast<unsigned long long>(histogram.counts[i]));
    out << line;
  }
}

void write_acquisition_json(const AcquisitionConfig& config,
                            const std::string& path) {
  nlohmann::ordered_json j;
  j["bin_width_s"] = config.bin_width;
  j["window_min_s"] = config.window_min;
  j["window_max_s"] = config.window_max;
  j["total_coincidences"] = config.total_coincidences;
  j["background_per_bin"] = config.background_per_bin;
  j["seed"] = config.seed;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

AcquisitionConfig read_acquisition_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  AcquisitionConfig config;
  config.bin_width = j.at("bin_width_s").get<double>();
  config.window_min = j.at("window_min_s").get<double>();
  config.window_max = j.at("window_max_s").get<double>();
  config.total_coincidences = j.at("total_coincidences").get<double>();
  config.background_per_bin = j.at("background_per_bin").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

}  // namespace freqbin
