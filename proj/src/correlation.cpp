#include "freqbin/correlation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freqbin {

BiphotonWaveform BiphotonWaveform::from_bandwidth_mhz(double fwhm_mhz,
                                                      double amplitude) {
  if (fwhm_mhz <= 0.0)
    throw std::invalid_argument("bandwidth must be positive");
  return {2.0 * std::numbers::pi * fwhm_mhz * 1e6, amplitude,
          WaveformShape::kExponentialDecay};
}

double envelope_g2(const BiphotonWaveform& waveform, double tau) {
  if (waveform.gamma <= 0.0)
    throw std::invalid_argument("waveform gamma must be positive");
  if (tau < 0.0) return 0.0;
  return waveform.amplitude * waveform.amplitude *
         std::exp(-waveform.gamma * tau);
}

double beating_g2(const BiphotonWaveform& waveform, const BeatParameters& beat,
                  double tau) {
  if (beat.delta <= 0.0)
    throw std::invalid_argument("beat delta must be positive");
  if (beat.c1 == std::complex<double>(0) && beat.c2 == std::complex<double>(0))
    throw std::invalid_argument("branch amplitudes must not both vanish");
  const double abs_tau = std::abs(tau);
  const std::complex<double> sum =
      beat.c1 + beat.c2 * std::polar(1.0, -beat.delta * abs_tau);
  return envelope_g2(waveform, abs_tau) * std::norm(sum);
}

double visibility(double phi) { return std::abs(std::sin(2.0 * phi)); }

bool exceeds_bell_threshold(double v) { return v > 1.0 / std::sqrt(2.0); }

}  // namespace freqbin
