// Jones calculus for the polarization optics used in the beating pipeline:
// waveplates, projective polarizers, Poincare-sphere coordinates, and the
// inverse solver mapping a target projection phase to waveplate angles.
#pragma once

#include <array>
#include <complex>

namespace freqbin {

using Complex = std::complex<double>;

/// 2x2 complex operator acting on Jones vectors in the {H, V} basis.
/// Row/column 0 is H, row/column 1 is V.
class JonesOperator {
 public:
  JonesOperator() : m_{Complex(1), Complex(0), Complex(0), Complex(1)} {}
  JonesOperator(Complex hh, Complex hv, Complex vh, Complex vv)
      : m_{hh, hv, vh, vv} {}

  Complex operator()(int row, int col) const { return m_[2 * row + col]; }

  JonesOperator operator*(const JonesOperator& rhs) const;
  JonesOperator adjoint() const;

  /// Largest elementwise |difference| between two operators.
  double max_abs_diff(const JonesOperator& rhs) const;

  /// True when M†M = I within `tol` (elementwise).
  bool is_unitary(double tol = 1e-12) const;

 private:
  std::array<Complex, 4> m_;
};

/// Normalized pure polarization state c_H|H> + c_V|V>.
/// The constructor rescales to unit norm; a near-zero vector is rejected.
class PolarizationState {
 public:
  PolarizationState(Complex h, Complex v);

  static PolarizationState horizontal() { return {1.0, 0.0}; }
  static PolarizationState vertical() { return {0.0, 1.0}; }
  static PolarizationState diagonal() { return {1.0, 1.0}; }
  static PolarizationState antidiagonal() { return {1.0, -1.0}; }
  static PolarizationState right_circular() { return {1.0, Complex(0, 1)}; }
  static PolarizationState left_circular() { return {1.0, Complex(0, -1)}; }

  /// (|H> + e^{-i theta}|V>)/sqrt(2): the relative-phase family that the
  /// two-step waveplate rotation projects onto |H>.
  static PolarizationState from_phase(double theta);

  /// Linear polarization at `angle` radians from the H axis.
  static PolarizationState linear(double angle);

  Complex h() const { return h_; }
  Complex v() const { return v_; }

  /// Physical equality: |<a|b>| = 1 within tol (global phase ignored).
  bool equals_up_to_phase(const PolarizationState& other,
                          double tol = 1e-10) const;

 private:
  Complex h_, v_;
};

/// Stokes coordinates (S1, S2, S3) of a pure state; unit norm.
struct PoincarePoint {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

/// Fast-axis angles (radians from H) realizing a projective polarizer as
/// QWP followed by HWP in front of an H-passing splitter.
struct WaveplateSetting {
  double qwp_angle = 0.0;
  double hwp_angle = 0.0;
};

/// Half-wave plate with fast axis at `eta` radians from H.
JonesOperator hwp(double eta);

/// Quarter-wave plate with fast axis at `eta` radians from H.
JonesOperator qwp(double eta);

/// Rank-1 projector |H><p|: passes the |p> component and emits it as |H>.
JonesOperator projector(const PolarizationState& p);

PoincarePoint to_poincare(const PolarizationState& p);

/// Inverse of to_poincare (up to global phase); `point` must be unit norm.
PolarizationState from_poincare(const PoincarePoint& point);

/// Waveplate angles whose composite <H| hwp(beta) qwp(pi/4) projects onto
/// (<H| + e^{i theta}<V|)/sqrt(2).  Two-step rotation on the Poincare
/// sphere: the QWP at pi/4 maps the phase circle to the equator, the HWP at
/// beta = theta/4 + pi/8 brings the intermediate state to S1.
WaveplateSetting solve_waveplates(double theta);

/// Projection phase realized by a HWP at `beta` behind a QWP at pi/4:
/// theta = 4*beta - pi/2, reduced to [0, 2*pi).
double phase_of_t3(double beta);

/// Reduce an angle to [0, 2*pi).
double wrap_two_pi(double angle);

/// Reduce an angle to [0, pi).
double wrap_pi(double angle);

}  // namespace freqbin
