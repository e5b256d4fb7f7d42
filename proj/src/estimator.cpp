#include "freqbin/estimator.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "freqbin/correlation.hpp"
#include "freqbin/polarization.hpp"
#include "json.hpp"

namespace freqbin {

namespace {

constexpr double kPi = std::numbers::pi;

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// Solve M x = b and invert M (3x3, Gaussian elimination with partial
// pivoting).  Returns false when M is numerically singular.
bool solve_and_invert(Mat3 m, Vec3 b, Vec3& x, Mat3& inverse) {
  Mat3 aug_inv = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-300) return false;
    std::swap(m[col], m[pivot]);
    std::swap(aug_inv[col], aug_inv[pivot]);
    std::swap(b[col], b[pivot]);

    const double inv_p = 1.0 / m[col][col];
    for (int c = 0; c < 3; ++c) {
      m[col][c] *= inv_p;
      aug_inv[col][c] *= inv_p;
    }
    b[col] *= inv_p;
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        m[r][c] -= f * m[col][c];
        aug_inv[r][c] -= f * aug_inv[col][c];
      }
      b[r] -= f * b[col];
    }
  }
  x = b;
  inverse = aug_inv;
  return true;
}

}  // namespace

NormalizedBeating normalize(const CoincidenceHistogram& beat,
                            const CoincidenceHistogram& ref,
                            std::uint64_t min_ref_count) {
  if (beat.bin_edges != ref.bin_edges)
    throw std::invalid_argument(
        "normalize: histograms must share identical binning");

  NormalizedBeating out;
  for (std::size_t i = 0; i < beat.size(); ++i) {
    const double r = static_cast<double>(ref.counts[i]);
    if (ref.counts[i] < min_ref_count) continue;
    const double b = static_cast<double>(beat.counts[i]);
    out.tau.push_back(beat.midpoint(i));
    out.ratio.push_back(b / r);
    // Delta method for b/r with independent Poisson counts; the max(b, 1)
    // floor keeps empty beating bins from claiming zero variance.
    out.sigma.push_back(std::sqrt(std::max(b, 1.0) + b * b / r) / r);
  }
  if (out.tau.empty())
    throw std::invalid_argument(
        "normalize: every bin fell below the reference-count floor");
  return out;
}

BeatFit fit_beating(const NormalizedBeating& data, double delta) {
  const std::size_t n = data.tau.size();
  if (data.ratio.size() != n || data.sigma.size() != n)
    throw std::invalid_argument("fit_beating: ragged input");
  if (n < 3)
    throw std::invalid_argument("fit_beating: need at least 3 points");
  if (delta <= 0.0)
    throw std::invalid_argument("fit_beating: delta must be positive");

  double u_min = std::abs(data.tau[0]);
  double u_max = u_min;
  Mat3 normal = {};
  Vec3 rhs = {};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::abs(data.tau[i]);
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
    const double s = data.sigma[i];
    if (!(s > 0.0))
      throw std::invalid_argument("fit_beating: sigma must be positive");
    const double w = 1.0 / (s * s);
    const Vec3 row = {1.0, std::cos(delta * u), std::sin(delta * u)};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) normal[r][c] += w * row[r] * row[c];
      rhs[r] += w * row[r] * data.ratio[i];
    }
  }
  if (u_max - u_min < 2.0 * kPi / delta)
    throw std::invalid_argument(
        "fit_beating: window spans less than one beat period");

  Vec3 coeffs;
  Mat3 cov;
  if (!solve_and_invert(normal, rhs, coeffs, cov))
    throw std::invalid_argument("fit_beating: singular normal equations");

  const double a = coeffs[0];
  const double b = coeffs[1];
  const double c = coeffs[2];
  if (a <= 0.0)
    throw std::invalid_argument("fit_beating: non-positive envelope scale");

  BeatFit fit;
  fit.n_points = n;
  fit.a_hat = a;
  fit.a_sigma = std::sqrt(cov[0][0]);
  const double amp_sq = b * b + c * c;
  const double amp = std::sqrt(amp_sq);
  fit.v_hat = amp / a;
  fit.theta_hat = wrap_two_pi(std::atan2(c, b));

  // No resolvable contrast: the phase is unidentified, so its uncertainty
  // spans the full circle.
  fit.degenerate = amp_sq <= 4.0 * (cov[1][1] + cov[2][2]);

  if (amp_sq > 0.0) {
    const Vec3 jv = {-fit.v_hat / a, b / (a * amp), c / (a * amp)};
    const Vec3 jt = {0.0, -c / amp_sq, b / amp_sq};
    double var_v = 0.0;
    double var_t = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) {
        var_v += jv[r] * cov[r][col] * jv[col];
        var_t += jt[r] * cov[r][col] * jt[col];
      }
    fit.v_sigma = std::sqrt(std::max(0.0, var_v));
    fit.theta_sigma = std::sqrt(std::max(0.0, var_t));
  } else {
    fit.v_sigma = std::sqrt(cov[1][1] + cov[2][2]) / a;
    fit.theta_sigma = kPi;
  }
  if (fit.degenerate) fit.theta_sigma = kPi;

  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::abs(data.tau[i]);
    const double model =
        a + b * std::cos(delta * u) + c * std::sin(delta * u);
    const double z = (data.ratio[i] - model) / data.sigma[i];
    chi2 += z * z;
  }
  fit.chi2_reduced = n > 3 ? chi2 / static_cast<double>(n - 3) : 0.0;
  return fit;
}

std::vector<double> unwrap_phases(const std::vector<double>& wrapped) {
  std::vector<double> out;
  out.reserve(wrapped.size());
  for (const double value : wrapped) {
    if (out.empty()) {
      out.push_back(value);
      continue;
    }
    const double turns = std::round((out.back() - value) / (2.0 * kPi));
    out.push_back(value + 2.0 * kPi * turns);
  }
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need matching inputs, n >= 2");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300)
    throw std::invalid_argument("fit_line: degenerate abscissa");
  return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

std::string fit_report_json(const BeatFit& fit) {
  nlohmann::ordered_json j;
  j["theta_hat_rad"] = fit.theta_hat;
  j["theta_hat_over_pi"] = fit.theta_hat / kPi;
  j["theta_sigma"] = fit.theta_sigma;
  j["v_hat"] = fit.v_hat;
  j["v_sigma"] = fit.v_sigma;
  j["a_hat"] = fit.a_hat;
  j["chi2_reduced"] = fit.chi2_reduced;
  j["n_points"] = fit.n_points;
  j["bell_violation"] = exceeds_bell_threshold(fit.v_hat);
  j["degenerate"] = fit.degenerate;
  return j.dump(2) + "\n";
}

void write_fit_report(const BeatFit& fit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << fit_report_json(fit);
}

}  // namespace freqbin
