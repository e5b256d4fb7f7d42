// Symbolic two-photon state algebra over (port, polarization, frequency-bin)
// modes, and the optical pipeline that turns the source pair into the
// frequency-bin entangled state behind the projective polarizers.
//
// Port topology: 1 and 2 feed the beam splitter, 3 and 4 are its outputs,
// 5 and 6 are the post-polarizer detection ports.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <utility>

#include "freqbin/polarization.hpp"

namespace freqbin {

enum class Species : std::uint8_t { kStokes, kAntiStokes };
enum class Polarization : std::uint8_t { kH, kV };

/// One of the four frequency bins: each species, shifted or not by the
/// modulator offset delta.
struct FrequencyBin {
  Species species = Species::kStokes;
  bool shifted = false;
  auto operator<=>(const FrequencyBin&) const = default;
};

struct PhotonMode {
  int port = 1;
  Polarization pol = Polarization::kH;
  FrequencyBin bin;
  auto operator<=>(const PhotonMode&) const = default;
};

/// Ordered pair of photon slots.  The slot order is bookkeeping only; the
/// physical ket is symmetric under exchanging the slots.
struct ModePair {
  PhotonMode a;
  PhotonMode b;
  auto operator<=>(const ModePair&) const = default;
};

/// Finite superposition over mode pairs.  Unitary elements preserve the
/// total norm; projections only decrease it.  Terms below 1e-15 in
/// magnitude are pruned to keep compositions finite.
class TwoPhotonState {
 public:
  using TermMap = std::map<ModePair, Complex>;

  void add_term(const ModePair& modes, Complex amplitude);
  void prune();

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  double norm_squared() const;

  static constexpr double kPruneThreshold = 1e-15;

 private:
  TermMap terms_;
};

/// Projection settings for the two output polarizers.
///
/// `theta` is the relative phase written into the surviving two-branch
/// state (the port-5-shifted branch stays real, the port-6-shifted branch
/// carries e^{i theta}).  `phi` balances the two branches: amplitudes go as
/// (cos phi, sin phi e^{i theta}) and the beating visibility is |sin 2 phi|.
/// Physically the port-6 polarizer axis sits at pi/2 - phi from H, so
/// phi = pi/4 passes the diagonal state on both conventions.
struct ProjectionConfig {
  double theta = 0.0;
  double phi = std::numbers::pi / 4.0;
};

/// Photon pair as emitted into ports 1 and 2: exchange-symmetric in which
/// path carries which species, H on path 1, V on path 2, and the path-1
/// frequency shifted.  Built compositionally: raw symmetric pair, an
/// H polarizer on both paths, the frequency shifter on path 1, a half-wave
/// plate at pi/4 on path 2.  `path_phase` multiplies every path-1
/// amplitude, modelling a length mismatch between the two paths (0 by
/// default: both source terms share one path-1 photon, so it is a global
/// phase and drops out of every observable).
TwoPhotonState source_state(double path_phase = 0.0);

/// 50:50 beam splitter: port 1 -> (|3> + i|4>)/sqrt(2),
/// port 2 -> (-i|3> + |4>)/sqrt(2).  Requires all modes on ports 1/2.
TwoPhotonState apply_beamsplitter(const TwoPhotonState& state);

/// Projective polarizers on the splitter outputs: |H><P3| on port 3 and
/// |H><P4| on port 4, then relabel 3 -> 5 and 4 -> 6.  The output is left
/// unnormalized; same-port pairs are kept (coincidence post-selection
/// happens in branch_amplitudes).
TwoPhotonState apply_projection(const TwoPhotonState& state,
                                const ProjectionConfig& config);

/// Amplitudes (c1, c2) of the two coincidence branches: c1 has the shifted
/// photon at port 5, c2 at port 6.  Same-port pairs are discarded.  When
/// both exchange orderings of the coincidence sector are present (full
/// pipeline output) they must agree branchwise and are pooled into a single
/// pair carrying their combined probability, i.e. sqrt(2) times either
/// sector; a state already reduced to one sector passes through unscaled.
/// Any other term structure is rejected as a mis-built pipeline.
std::pair<Complex, Complex> branch_amplitudes(const TwoPhotonState& state);

/// Apply a polarization element to every photon in `port`.
TwoPhotonState apply_element(const TwoPhotonState& state, int port,
                             const JonesOperator& op);

/// Ideal frequency shifter on `port`: marks every bin there as shifted.
TwoPhotonState apply_frequency_shift(const TwoPhotonState& state, int port);

/// Rename a port, keeping amplitudes.
TwoPhotonState relabel_port(const TwoPhotonState& state, int from, int to);

}  // namespace freqbin
