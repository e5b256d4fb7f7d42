#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "freqbin/experiment.hpp"
#include "freqbin/montecarlo.hpp"
#include "freqbin/philox.hpp"
#include "support/stats.hpp"

using namespace freqbin;

namespace {

constexpr double kPi = std::numbers::pi;

// Exact per-bin mass of exp(-gamma |tau|): the independent oracle for the
// sampling tests.
double envelope_mass(double gamma, double lo, double hi) {
  auto one_sided = [gamma](double a, double b) {  // 0 <= a <= b
    return (std::exp(-gamma * a) - std::exp(-gamma * b)) / gamma;
  };
  if (lo >= 0.0) return one_sided(lo, hi);
  if (hi <= 0.0) return one_sided(-hi, -lo);
  return one_sided(0.0, -lo) + one_sided(0.0, hi);
}

AcquisitionConfig default_config(double n, std::uint64_t seed) {
  AcquisitionConfig cfg;
  cfg.total_coincidences = n;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("philox streams are deterministic and independent") {
  PhiloxStream a(123, 7);
  PhiloxStream b(123, 7);
  PhiloxStream c(123, 8);
  PhiloxStream d(124, 7);
  bool all_equal_c = true;
  bool all_equal_d = true;
  for (int i = 0; i < 256; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    all_equal_c &= va == c.next_u64();
    all_equal_d &= va == d.next_u64();
  }
  CHECK(!all_equal_c);
  CHECK(!all_equal_d);
}

TEST_CASE("philox uniforms have the right first two moments") {
  PhiloxStream s(2024, 0);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  // 5 sigma bands: sd(mean) = 1/sqrt(12 n).
  CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(var - 1.0 / 12.0) < 5.0 * 0.0745 / std::sqrt(n));
}

TEST_CASE("poisson draws match the pmf at small mean") {
  const double mu = 3.5;
  const int n = 100000;
  std::vector<std::uint64_t> tally(30, 0);
  for (int i = 0; i < n; ++i) {
    PhiloxStream s(99, static_cast<std::uint64_t>(i));
    const std::uint64_t k = poisson_draw(mu, s);
    ++tally[std::min<std::uint64_t>(k, tally.size() - 1)];
  }
  // Pearson chi-square against the pmf, tail pooled.
  double chi2 = 0.0;
  int dof = 0;
  double p = std::exp(-mu);
  double tail = static_cast<double>(n);
  for (std::size_t k = 0; k + 1 < tally.size(); ++k) {
    const double expected = n * p;
    tail -= expected;
    if (expected >= 10.0) {
      const double d = tally[k] - expected;
      chi2 += d * d / expected;
      ++dof;
    }
    p *= mu / static_cast<double>(k + 1);
  }
  CHECK(teststats::chi2_sf(chi2, dof) > 0.001);
}

TEST_CASE("poisson mean and variance at large mean") {
  const double mu = 400.0;
  const int n = 20000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream s(5, static_cast<std::uint64_t>(i));
    const double k = static_cast<double>(poisson_draw(mu, s));
    sum += k;
    sum_sq += k * k;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean - mu) < 5.0 * std::sqrt(mu / n));
  CHECK(std::abs(var - mu) < 5.0 * mu * std::sqrt(2.0 / n));
}

TEST_CASE("poisson edge cases") {
  PhiloxStream s(1, 1);
  CHECK(poisson_draw(0.0, s) == 0);
  CHECK_THROWS_AS(poisson_draw(-1.0, s), std::invalid_argument);
}

TEST_CASE("simulation is bitwise deterministic under a fixed seed") {
  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  const auto cfg = default_config(5e4, 77);
  const CoincidenceHistogram a = simulate_reference(w, cfg);
  const CoincidenceHistogram b = simulate_reference(w, cfg);
  CHECK(a.counts == b.counts);

  auto cfg2 = cfg;
  cfg2.seed = 78;
  CHECK(simulate_reference(w, cfg2).counts != a.counts);
}

TEST_CASE("zero requested counts and zero background give empty bins") {
  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  const CoincidenceHistogram h = simulate_reference(w, default_config(0, 1));
  for (const auto c : h.counts) CHECK(c == 0);
}

TEST_CASE("an identically zero density is rejected") {
  CHECK_THROWS_AS(
      simulate_histogram([](double) { return 0.0; }, default_config(10, 1)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      simulate_histogram([](double) { return -1.0; }, default_config(10, 1)),
      std::invalid_argument);
}

TEST_CASE("total counts stay within Poisson fluctuation of the request") {
  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  const double n = 1e6;
  const CoincidenceHistogram h =
      simulate_reference(w, default_config(n, 31415));
  double total = 0.0;
  for (const auto c : h.counts) total += static_cast<double>(c);
  CHECK(std::abs(total - n) < 5.0 * std::sqrt(n));
}

TEST_CASE("flat background adds the expected floor") {
  auto cfg = default_config(0, 9);
  cfg.background_per_bin = 50.0;
  const CoincidenceHistogram h =
      simulate_histogram([](double) { return 1.0; }, cfg);
  double total = 0.0;
  for (const auto c : h.counts) total += static_cast<double>(c);
  const double expected = 50.0 * static_cast<double>(h.size());
  CHECK(std::abs(total - expected) < 5.0 * std::sqrt(expected));
}

TEST_CASE("vanishing-contrast beating reduces to the envelope shape") {
  // With phi = 0 a single branch survives and the density is plain G0.
  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  const double delta = 2.0 * kPi * 100e6;
  const BeatParameters beat = pipeline_beat_parameters(0.7, 0.0, delta);
  const double n = 1e6;
  const CoincidenceHistogram h = simulate_histogram(
      [&](double tau) { return beating_g2(w, beat, tau); },
      default_config(n, 271828));

  double window_mass = 0.0;
  std::vector<double> masses(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    masses[i] = envelope_mass(w.gamma, h.bin_edges[i], h.bin_edges[i + 1]);
    window_mass += masses[i];
  }
  double chi2 = 0.0;
  int dof = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double mu = n * masses[i] / window_mass;
    if (mu < 10.0) continue;
    const double d = static_cast<double>(h.counts[i]) - mu;
    chi2 += d * d / mu;
    ++dof;
  }
  CHECK(dof > 100);
  CHECK(teststats::chi2_sf(chi2, dof) > 0.001);
}

TEST_CASE("reference histogram matches the envelope on the tau > 0 side") {
  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  const double n = 1e6;
  const CoincidenceHistogram h =
      simulate_reference(w, default_config(n, 161803));

  double window_mass = 0.0;
  std::vector<double> masses(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    masses[i] = envelope_mass(w.gamma, h.bin_edges[i], h.bin_edges[i + 1]);
    window_mass += masses[i];
  }
  double chi2 = 0.0;
  int dof = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.midpoint(i) <= 0.0) continue;
    const double mu = n * masses[i] / window_mass;
    if (mu < 10.0) continue;
    const double d = static_cast<double>(h.counts[i]) - mu;
    chi2 += d * d / mu;
    ++dof;
  }
  CHECK(dof > 50);
  CHECK(teststats::chi2_sf(chi2, dof) > 0.001);
}

TEST_CASE("reference histogram is statistically even in tau") {
  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  const CoincidenceHistogram h =
      simulate_reference(w, default_config(1e6, 141421));
  const std::size_t n = h.size();
  double chi2 = 0.0;
  int dof = 0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double left = static_cast<double>(h.counts[i]);
    const double right = static_cast<double>(h.counts[n - 1 - i]);
    if (left + right < 20.0) continue;
    const double d = left - right;
    chi2 += d * d / (left + right);
    ++dof;
  }
  CHECK(dof > 30);
  CHECK(teststats::chi2_sf(chi2, dof) > 0.001);
}

TEST_CASE("bin quadrature is exact to far better than 0.1% per bin") {
  // Worst case for the bin integral: full-contrast beating, ten bins per
  // beat period.  Compare the 5-point rule against a 64-panel refinement.
  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  const double delta = 2.0 * kPi * 100e6;
  const BeatParameters beat =
      pipeline_beat_parameters(1.25 * kPi, kPi / 4.0, delta);
  const DensityFn density = [&](double tau) {
    return beating_g2(w, beat, tau);
  };

  auto refined_mass = [&](double lo, double hi) {
    // Composite midpoint over 4096 panels; independent of the quadrature
    // under test and below 1e-8 relative on these densities.
    const int panels = 4096;
    const double step = (hi - lo) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k)
      sum += density(lo + (k + 0.5) * step);
    return sum * step;
  };

  auto cfg = default_config(1.0, 3);
  cfg.window_min = -30e-9;
  cfg.window_max = 30e-9;
  const CoincidenceHistogram h = simulate_histogram(density, cfg);

  // Recover the masses the simulator used by reconstructing them the same
  // public way: a second run with a huge N and no noise isn't observable,
  // so instead compare quadratures directly on each bin.
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double lo = h.bin_edges[i];
    const double hi = h.bin_edges[i + 1];
    const double exact = refined_mass(lo, hi);
    // 5-point Gauss-Legendre, as used by the simulator.
    const double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                             0.5384693101056831, 0.9061798459386640};
    const double weights[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
    const double c = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double gl = 0.0;
    for (int k = 0; k < 5; ++k) gl += weights[k] * density(c + half * nodes[k]);
    gl *= half;
    CHECK(std::abs(gl - exact) < 1e-3 * exact + 1e-18);
  }
}

TEST_CASE("histogram csv and acquisition sidecar round-trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "freqbin_mc_test";
  fs::create_directories(dir);

  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  auto cfg = default_config(1e4, 42);
  cfg.background_per_bin = 0.25;
  const CoincidenceHistogram h = simulate_reference(w, cfg);

  const std::string csv = (dir / "hist.csv").string();
  const std::string meta = (dir / "hist.meta.json").string();
  write_histogram_csv(h, csv);
  write_acquisition_json(cfg, meta);

  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "tau_ns,count");
  std::string first;
  std::getline(in, first);
  CHECK(first == "-499.500000," + std::to_string(h.counts[0]));

  const AcquisitionConfig back = read_acquisition_json(meta);
  CHECK(back.bin_width == cfg.bin_width);
  CHECK(back.window_min == cfg.window_min);
  CHECK(back.window_max == cfg.window_max);
  CHECK(back.total_coincidences == cfg.total_coincidences);
  CHECK(back.background_per_bin == cfg.background_per_bin);
  CHECK(back.seed == cfg.seed);

  fs::remove_all(dir);
}

TEST_CASE("acquisition validation") {
  const BiphotonWaveform w = BiphotonWaveform::from_bandwidth_mhz(20.0);
  AcquisitionConfig cfg;
  cfg.bin_width = 0.0;
  CHECK_THROWS_AS(simulate_reference(w, cfg), std::invalid_argument);
  cfg = {};
  cfg.window_min = 1e-9;
  cfg.window_max = -1e-9;
  CHECK_THROWS_AS(simulate_reference(w, cfg), std::invalid_argument);
  cfg = {};
  cfg.total_coincidences = -5.0;
  CHECK_THROWS_AS(simulate_reference(w, cfg), std::invalid_argument);
}
