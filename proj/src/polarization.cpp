#include "freqbin/polarization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freqbin {

namespace {

constexpr double kPi = std::numbers::pi;

// Frame rotation by eta: lab components -> waveplate eigenbasis.
JonesOperator frame_rotation(double eta) {
  const double c = std::cos(eta);
  const double s = std::sin(eta);
  return {Complex(c), Complex(s), Complex(-s), Complex(c)};
}

// Retarder with fast axis at eta: the slow axis picks up e^{i retardance}.
JonesOperator retarder(double eta, double retardance) {
  const JonesOperator phase(Complex(1), Complex(0), Complex(0),
                            std::polar(1.0, retardance));
  return frame_rotation(-eta) * phase * frame_rotation(eta);
}

}  // namespace

JonesOperator JonesOperator::operator*(const JonesOperator& rhs) const {
  JonesOperator out(0, 0, 0, 0);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      out.m_[2 * r + c] =
          m_[2 * r] * rhs.m_[c] + m_[2 * r + 1] * rhs.m_[2 + c];
  return out;
}

JonesOperator JonesOperator::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]),
          std::conj(m_[3])};
}

double JonesOperator::max_abs_diff(const JonesOperator& rhs) const {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    worst = std::max(worst, std::abs(m_[i] - rhs.m_[i]));
  return worst;
}

bool JonesOperator::is_unitary(double tol) const {
  return (adjoint() * *this).max_abs_diff(JonesOperator()) < tol;
}

PolarizationState::PolarizationState(Complex h, Complex v) : h_(h), v_(v) {
  const double norm = std::sqrt(std::norm(h_) + std::norm(v_));
  if (norm < 1e-12)
    throw std::invalid_argument("polarization state must be nonzero");
  h_ /= norm;
  v_ /= norm;
}

PolarizationState PolarizationState::from_phase(double theta) {
  return {Complex(1.0), std::polar(1.0, -theta)};
}

PolarizationState PolarizationState::linear(double angle) {
  return {Complex(std::cos(angle)), Complex(std::sin(angle))};
}

bool PolarizationState::equals_up_to_phase(const PolarizationState& other,
                                           double tol) const {
  const Complex overlap =
      std::conj(h_) * other.h_ + std::conj(v_) * other.v_;
  return std::abs(1.0 - std::abs(overlap)) < tol;
}

JonesOperator hwp(double eta) { return retarder(eta, kPi); }

JonesOperator qwp(double eta) { return retarder(eta, kPi / 2.0); }

JonesOperator projector(const PolarizationState& p) {
  return {std::conj(p.h()), std::conj(p.v()), Complex(0), Complex(0)};
}

PoincarePoint to_poincare(const PolarizationState& p) {
  const Complex cross = std::conj(p.h()) * p.v();
  return {std::norm(p.h()) - std::norm(p.v()), 2.0 * cross.real(),
          2.0 * cross.imag()};
}

PolarizationState from_poincare(const PoincarePoint& point) {
  const double h_mag_sq = 0.5 * (1.0 + point.s1);
  if (h_mag_sq < 1e-24) return PolarizationState::vertical();
  const double h = std::sqrt(h_mag_sq);
  return {Complex(h), Complex(point.s2, point.s3) / (2.0 * h)};
}

WaveplateSetting solve_waveplates(double theta) {
  const double reduced = wrap_two_pi(theta);
  return {kPi / 4.0, wrap_pi(reduced / 4.0 + kPi / 8.0)};
}

double phase_of_t3(double beta) { return wrap_two_pi(4.0 * beta - kPi / 2.0); }

double wrap_two_pi(double angle) {
  double out = std::fmod(angle, 2.0 * kPi);
  if (out < 0.0) out += 2.0 * kPi;
  return out;
}

double wrap_pi(double angle) {
  double out = std::fmod(angle, kPi);
  if (out < 0.0) out += kPi;
  return out;
}

}  // namespace freqbin
