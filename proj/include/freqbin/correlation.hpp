// Parametric biphoton envelope and the analytic Glauber correlation
// functions: the bare envelope G0 and the beating coincidence rate G56.
#pragma once

#include <complex>

namespace freqbin {

enum class WaveformShape { kExponentialDecay };

/// Temporal envelope of the photon pair, psi0(tau).  Causal: zero for
/// tau < 0.  The exponential-decay model has |psi0(tau)|^2 proportional to
/// exp(-gamma tau); its spectrum is a Lorentzian of FWHM gamma (rad/s).
struct BiphotonWaveform {
  double gamma = 0.0;  // envelope decay rate, rad/s
  double amplitude = 1.0;
  WaveformShape shape = WaveformShape::kExponentialDecay;

  /// Waveform whose Lorentzian spectral FWHM is `fwhm_mhz` megahertz.
  static BiphotonWaveform from_bandwidth_mhz(double fwhm_mhz,
                                             double amplitude = 1.0);
};

/// Inputs of the two-branch beating law: the shift frequency delta (rad/s)
/// and the branch amplitudes c1 (shifted photon at the early detector) and
/// c2 (shifted photon at the late detector).
struct BeatParameters {
  double delta = 0.0;
  std::complex<double> c1;
  std::complex<double> c2;
};

/// G0(tau) = |psi0(tau)|^2, the coincidence envelope measured before the
/// beam splitter.  Zero for tau < 0.
double envelope_g2(const BiphotonWaveform& waveform, double tau);

/// Beating coincidence rate G0(|tau|) * |c1 + c2 e^{-i delta |tau|}|^2.
/// Even in tau by construction.  For branch amplitudes
/// (cos(phi), sin(phi) e^{i theta}) / (2 sqrt(2)) this reduces to
/// (1/8) G0(|tau|) [1 + sin(2 phi) cos(delta |tau| - theta)].
double beating_g2(const BiphotonWaveform& waveform, const BeatParameters& beat,
                  double tau);

/// Beating contrast of the balanced/unbalanced projection: |sin(2 phi)|.
double visibility(double phi);

/// True when a visibility is strictly above the 1/sqrt(2) Bell bound.
bool exceeds_bell_threshold(double v);

}  // namespace freqbin
