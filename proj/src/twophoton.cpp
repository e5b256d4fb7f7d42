#include "freqbin/twophoton.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace freqbin {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

constexpr int kPath1 = 1;
constexpr int kPath2 = 2;
constexpr int kSplitterOut3 = 3;
constexpr int kSplitterOut4 = 4;
constexpr int kDetector5 = 5;
constexpr int kDetector6 = 6;

void require_ports(const TwoPhotonState& state, int lo, int hi,
                   const char* op_name) {
  for (const auto& [modes, amp] : state.terms()) {
    for (const PhotonMode* m : {&modes.a, &modes.b}) {
      if (m->port < lo || m->port > hi)
        throw std::invalid_argument(std::string(op_name) +
                                    ": state has modes outside ports " +
                                    std::to_string(lo) + ".." +
                                    std::to_string(hi));
    }
  }
}

int pol_index(Polarization p) { return p == Polarization::kH ? 0 : 1; }

Polarization pol_from_index(int i) {
  return i == 0 ? Polarization::kH : Polarization::kV;
}

}  // namespace

void TwoPhotonState::add_term(const ModePair& modes, Complex amplitude) {
  terms_[modes] += amplitude;
}

void TwoPhotonState::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < kPruneThreshold)
      it = terms_.erase(it);
    else
      ++it;
  }
}

double TwoPhotonState::norm_squared() const {
  double total = 0.0;
  for (const auto& [modes, amp] : terms_) total += std::norm(amp);
  return total;
}

TwoPhotonState apply_element(const TwoPhotonState& state, int port,
                             const JonesOperator& op) {
  TwoPhotonState out;
  for (const auto& [modes, amp] : state.terms()) {
    // Expand each matching photon slot over the operator's output rows.
    std::vector<std::pair<ModePair, Complex>> partial{{modes, amp}};
    for (int slot = 0; slot < 2; ++slot) {
      std::vector<std::pair<ModePair, Complex>> next;
      for (const auto& [pm, pa] : partial) {
        const PhotonMode& mode = slot == 0 ? pm.a : pm.b;
        if (mode.port != port) {
          next.emplace_back(pm, pa);
          continue;
        }
        for (int row = 0; row < 2; ++row) {
          const Complex coef = op(row, pol_index(mode.pol));
          if (coef == Complex(0)) continue;
          ModePair updated = pm;
          (slot == 0 ? updated.a : updated.b).pol = pol_from_index(row);
          next.emplace_back(updated, pa * coef);
        }
      }
      partial = std::move(next);
    }
    for (const auto& [pm, pa] : partial) out.add_term(pm, pa);
  }
  out.prune();
  return out;
}

TwoPhotonState apply_frequency_shift(const TwoPhotonState& state, int port) {
  TwoPhotonState out;
  for (const auto& [modes, amp] : state.terms()) {
    ModePair updated = modes;
    for (PhotonMode* m : {&updated.a, &updated.b}) {
      if (m->port != port) continue;
      if (m->bin.shifted)
        throw std::invalid_argument(
            "apply_frequency_shift: bin already shifted");
      m->bin.shifted = true;
    }
    out.add_term(updated, amp);
  }
  return out;
}

TwoPhotonState relabel_port(const TwoPhotonState& state, int from, int to) {
  TwoPhotonState out;
  for (const auto& [modes, amp] : state.terms()) {
    ModePair updated = modes;
    for (PhotonMode* m : {&updated.a, &updated.b})
      if (m->port == from) m->port = to;
    out.add_term(updated, amp);
  }
  return out;
}

TwoPhotonState source_state(double path_phase) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  TwoPhotonState raw;
  // Exchange-symmetric emission: either path may carry either species.
  raw.add_term({{kPath1, Polarization::kH, {Species::kStokes, false}},
                {kPath2, Polarization::kH, {Species::kAntiStokes, false}}},
               inv_sqrt2);
  raw.add_term({{kPath1, Polarization::kH, {Species::kAntiStokes, false}},
                {kPath2, Polarization::kH, {Species::kStokes, false}}},
               inv_sqrt2);

  TwoPhotonState state =
      apply_element(raw, kPath1, projector(PolarizationState::horizontal()));
  state = apply_element(state, kPath2,
                        projector(PolarizationState::horizontal()));
  state = apply_frequency_shift(state, kPath1);
  state = apply_element(state, kPath2, hwp(kPi / 4.0));

  if (path_phase != 0.0) {
    const Complex factor = std::polar(1.0, path_phase);
    TwoPhotonState shifted;
    for (const auto& [modes, amp] : state.terms()) {
      const bool on_path1 =
          modes.a.port == kPath1 || modes.b.port == kPath1;
      shifted.add_term(modes, on_path1 ? amp * factor : amp);
    }
    shifted.prune();
    return shifted;
  }
  return state;
}

TwoPhotonState apply_beamsplitter(const TwoPhotonState& state) {
  require_ports(state, kPath1, kPath2, "apply_beamsplitter");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::array<std::pair<int, Complex>, 2> path1_split = {
      {{kSplitterOut3, Complex(inv_sqrt2)},
       {kSplitterOut4, kI * inv_sqrt2}}};
  const std::array<std::pair<int, Complex>, 2> path2_split = {
      {{kSplitterOut3, -kI * inv_sqrt2},
       {kSplitterOut4, Complex(inv_sqrt2)}}};

  TwoPhotonState out;
  for (const auto& [modes, amp] : state.terms()) {
    const auto& split_a = modes.a.port == kPath1 ? path1_split : path2_split;
    const auto& split_b = modes.b.port == kPath1 ? path1_split : path2_split;
    for (const auto& [port_a, coef_a] : split_a) {
      for (const auto& [port_b, coef_b] : split_b) {
        ModePair updated = modes;
        updated.a.port = port_a;
        updated.b.port = port_b;
        out.add_term(updated, amp * coef_a * coef_b);
      }
    }
  }
  out.prune();
  return out;
}

TwoPhotonState apply_projection(const TwoPhotonState& state,
                                const ProjectionConfig& config) {
  require_ports(state, kSplitterOut3, kSplitterOut4, "apply_projection");

  const PolarizationState p3 = PolarizationState::from_phase(config.theta);
  const PolarizationState p4 =
      PolarizationState::linear(kPi / 2.0 - config.phi);

  TwoPhotonState out = apply_element(state, kSplitterOut3, projector(p3));
  out = apply_element(out, kSplitterOut4, projector(p4));
  out = relabel_port(out, kSplitterOut3, kDetector5);
  out = relabel_port(out, kSplitterOut4, kDetector6);
  return out;
}

std::pair<Complex, Complex> branch_amplitudes(const TwoPhotonState& state) {
  // Per species-at-port-5 sector: [0] shifted photon at port 5, [1] at 6.
  std::array<std::array<std::optional<Complex>, 2>, 2> sectors;
  bool any_cross = false;

  for (const auto& [modes, amp] : state.terms()) {
    const PhotonMode& a = modes.a;
    const PhotonMode& b = modes.b;
    if (a.port == b.port) continue;  // coincidence post-selection
    if ((a.port != kDetector5 && a.port != kDetector6) ||
        (b.port != kDetector5 && b.port != kDetector6))
      throw std::invalid_argument(
          "branch_amplitudes: expected a post-projection state on ports 5/6");

    const PhotonMode& at5 = a.port == kDetector5 ? a : b;
    const PhotonMode& at6 = a.port == kDetector5 ? b : a;
    if (at5.pol != Polarization::kH || at6.pol != Polarization::kH)
      throw std::invalid_argument(
          "branch_amplitudes: non-H polarization after projection");
    if (at5.bin.species == at6.bin.species ||
        at5.bin.shifted == at6.bin.shifted)
      throw std::invalid_argument(
          "branch_amplitudes: terms must differ only in which photon "
          "carries the frequency shift");

    auto& slot = sectors[at5.bin.species == Species::kStokes ? 0 : 1]
                        [at5.bin.shifted ? 0 : 1];
    if (slot.has_value())
      throw std::invalid_argument("branch_amplitudes: duplicate branch");
    slot = amp;
    any_cross = true;
  }

  if (!any_cross)
    throw std::invalid_argument(
        "branch_amplitudes: no coincidence terms between ports 5 and 6");

  const bool have[2] = {
      sectors[0][0].has_value() || sectors[0][1].has_value(),
      sectors[1][0].has_value() || sectors[1][1].has_value()};

  auto value = [](const std::optional<Complex>& c) {
    return c.value_or(Complex(0));
  };

  if (have[0] && have[1]) {
    // Both exchange orderings present: they must carry the same branch
    // pattern, and their probabilities pool into one effective pair.
    double scale = 0.0;
    for (const auto& sector : sectors)
      for (const auto& c : sector)
        scale = std::max(scale, std::abs(value(c)));
    for (int branch = 0; branch < 2; ++branch) {
      if (std::abs(value(sectors[0][branch]) - value(sectors[1][branch])) >
          1e-12 * std::max(1.0, scale))
        throw std::invalid_argument(
            "branch_amplitudes: exchange-asymmetric coincidence sectors");
    }
    const double pool = std::sqrt(2.0);
    return {pool * value(sectors[0][0]), pool * value(sectors[0][1])};
  }

  const auto& sector = have[0] ? sectors[0] : sectors[1];
  return {value(sector[0]), value(sector[1])};
}

}  // namespace freqbin
