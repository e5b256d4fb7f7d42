// Normalize a beating histogram against the envelope reference and fit the
// beating law A [1 + V cos(delta |tau| - theta)] by exact linearization.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "freqbin/montecarlo.hpp"

namespace freqbin {

/// Ratio of beating to reference counts, with per-point standard errors
/// from Poisson propagation.  Bins whose reference count falls below the
/// configured floor are dropped.
struct NormalizedBeating {
  std::vector<double> tau;    // bin midpoints, seconds
  std::vector<double> ratio;
  std::vector<double> sigma;  // 1-sigma standard error of each ratio
};

struct BeatFit {
  double theta_hat = 0.0;    // radians, in [0, 2 pi)
  double v_hat = 0.0;        // unclamped; noise may push it past 1
  double a_hat = 0.0;        // envelope scale of the ratio
  double theta_sigma = 0.0;  // radians
  double v_sigma = 0.0;
  double a_sigma = 0.0;
  double chi2_reduced = 0.0;
  std::size_t n_points = 0;
  bool degenerate = false;  // no resolvable contrast; theta_sigma spans pi
};

/// Bin-by-bin ratio beat/ref over bins with ref >= min_ref_count.
/// sigma_i follows the first-order Poisson delta method,
/// sqrt(max(b,1) + b^2/r) / r.  Throws on mismatched binning or when every
/// bin is excluded.
NormalizedBeating normalize(const CoincidenceHistogram& beat,
                            const CoincidenceHistogram& ref,
                            std::uint64_t min_ref_count = 10);

/// Weighted least squares of ratio against
///   A [1 + V cos(delta |tau| - theta)]
/// via the exact linearization A + B cos(delta |tau|) + C sin(delta |tau|),
/// with V = sqrt(B^2 + C^2)/A and theta = atan2(C, B).  delta is a known
/// input, never fitted.  Uncertainties come from the linear-model
/// covariance propagated through the reparameterization.  Throws on
/// singular normal equations (e.g. fewer than 3 usable points or a window
/// shorter than one beat period) and on a non-positive fitted A.
BeatFit fit_beating(const NormalizedBeating& data, double delta);

/// Unwrap a phase sequence by nearest-multiple continuation: each value is
/// shifted by the multiple of 2 pi closest to its predecessor.
std::vector<double> unwrap_phases(const std::vector<double>& wrapped);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Plain least-squares line through (x, y).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fit report fields: theta_hat_rad, theta_hat_over_pi, theta_sigma, v_hat,
/// v_sigma, a_hat, chi2_reduced, n_points, bell_violation, degenerate.
std::string fit_report_json(const BeatFit& fit);
void write_fit_report(const BeatFit& fit, const std::string& path);

}  // namespace freqbin
