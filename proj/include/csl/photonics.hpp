// Perturbative Stokes / phonon / anti-Stokes state model: pump excitation,
// Stokes phase shift, probe conversion, post-selection on a single Stokes
// detection, and the resulting +/- fringe probabilities.
//
// A basis ket is an occupation tuple (s_L, b_L, a_L, s_R, b_R, a_R) with
// each occupation in {0, 1}, packed into the low six bits of a key.
// States are sparse amplitude maps and may be unnormalized (projection
// leaves them so).
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

namespace csl {

using Complex = std::complex<double>;

namespace ket {

enum Bit : int { s_L = 0, b_L = 1, a_L = 2, s_R = 3, b_R = 4, a_R = 5 };

inline bool occ(std::uint8_t k, Bit bit) { return (k >> bit) & 1u; }
inline std::uint8_t set(std::uint8_t k, Bit bit) {
  return static_cast<std::uint8_t>(k | (1u << bit));
}
inline std::uint8_t clear(std::uint8_t k, Bit bit) {
  return static_cast<std::uint8_t>(k & ~(1u << bit));
}

}  // namespace ket

struct PhotonicState {
  // ordered map keeps iteration deterministic
  std::map<std::uint8_t, Complex> amplitudes;

  static PhotonicState vacuum() { return {{{0, Complex(1.0, 0.0)}}}; }

  Complex amplitude(std::uint8_t k) const {
    auto it = amplitudes.find(k);
    return it == amplitudes.end() ? Complex(0.0, 0.0) : it->second;
  }
  void add(std::uint8_t k, Complex a) {
    auto [it, inserted] = amplitudes.try_emplace(k, a);
    if (!inserted) it->second += a;
  }
  double norm2() const {
    double n = 0.0;
    for (const auto& [k, a] : amplitudes) n += std::norm(a);
    return n;
  }
  void prune(double tol = 0.0) {
    for (auto it = amplitudes.begin(); it != amplitudes.end();)
      it = (std::abs(it->second) <= tol) ? amplitudes.erase(it) : std::next(it);
  }
};

struct FringeConfig {
  Complex eps_s;  // Stokes amplitude per pump pulse, |eps_s|^2 << 1
  Complex eps_a;  // anti-Stokes conversion amplitude, |eps_a|^2 << 1
  double phi_s;   // Stokes interferometer phase, rad
  double phi_a;   // anti-Stokes interferometer phase, rad

  void validate() const {
    if (std::norm(eps_s) > 0.1 || std::norm(eps_a) > 0.1)
      throw std::invalid_argument(
          "FringeConfig: |eps|^2 > 0.1 is outside the perturbative regime");
  }
  bool perturbative_warning() const {
    return std::norm(eps_s) > 0.01 || std::norm(eps_a) > 0.01;
  }
};

// First-order truncation reproduces the usual three-term state; exact
// mode keeps the eps^2 cross terms of the product map.
enum class TruncationPolicy { exact, first_order };

namespace detail {

inline int total_stokes(std::uint8_t k) {
  return ket::occ(k, ket::s_L) + ket::occ(k, ket::s_R);
}
inline int total_antistokes(std::uint8_t k) {
  return ket::occ(k, ket::a_L) + ket::occ(k, ket::a_R);
}

}  // namespace detail

// Pump pulse on both diamonds: per diamond, |0_s 0_b> -> |0_s 0_b> +
// eps_s |1_s 1_b>. Kets already carrying an excitation in the acted-on
// diamond are rejected (the map is only defined from the vacuum sector).
inline PhotonicState pump_interaction(const PhotonicState& state, Complex eps_s,
                                      TruncationPolicy policy = TruncationPolicy::exact) {
  using namespace ket;
  PhotonicState out = state;
  for (auto [s, b] : {std::pair{s_L, b_L}, std::pair{s_R, b_R}}) {
    PhotonicState next;
    for (const auto& [k, amp] : out.amplitudes) {
      if (occ(k, s) || occ(k, b))
        throw std::invalid_argument(
            "pump_interaction: diamond already carries a Stokes/phonon excitation");
      next.add(k, amp);
      next.add(set(set(k, s), b), eps_s * amp);
    }
    out = std::move(next);
  }
  if (policy == TruncationPolicy::first_order) {
    for (auto it = out.amplitudes.begin(); it != out.amplitudes.end();)
      it = (detail::total_stokes(it->first) >= 2) ? out.amplitudes.erase(it)
                                                  : std::next(it);
  }
  out.prune();
  return out;
}

// Relative Stokes phase: amplitudes of kets with s_R = 1 pick up e^{-i phi_s}.
inline PhotonicState apply_stokes_phase(const PhotonicState& state, double phi_s) {
  PhotonicState out = state;
  const Complex phase = std::exp(Complex(0.0, -phi_s));
  for (auto& [k, amp] : out.amplitudes)
    if (ket::occ(k, ket::s_R)) amp *= phase;
  return out;
}

// Probe pulse: per diamond, |0_a 1_b> -> |0_a 1_b> + eps_a |1_a 0_b>; the
// vacuum is left unaltered.
inline PhotonicState probe_conversion(const PhotonicState& state, Complex eps_a,
                                      TruncationPolicy policy = TruncationPolicy::exact) {
  using namespace ket;
  PhotonicState out = state;
  for (auto [b, a] : {std::pair{b_L, a_L}, std::pair{b_R, a_R}}) {
    PhotonicState next;
    for (const auto& [k, amp] : out.amplitudes) {
      next.add(k, amp);
      if (occ(k, b) && !occ(k, a)) next.add(set(clear(k, b), a), eps_a * amp);
    }
    out = std::move(next);
  }
  if (policy == TruncationPolicy::first_order) {
    for (auto it = out.amplitudes.begin(); it != out.amplitudes.end();)
      it = (detail::total_antistokes(it->first) >= 2) ? out.amplitudes.erase(it)
                                                      : std::next(it);
  }
  out.prune();
  return out;
}

// Post-selection on exactly one detected Stokes photon (s_L + s_R = 1).
// The result is left unnormalized; a vanishing post-selected state is
// reported as nullopt.
inline std::optional<PhotonicState> project_stokes_detection(const PhotonicState& state) {
  PhotonicState out;
  for (const auto& [k, amp] : state.amplitudes)
    if (detail::total_stokes(k) == 1) out.add(k, amp);
  out.prune();
  if (out.norm2() == 0.0) return std::nullopt;
  return out;
}

// Closed-form fringe probabilities,
//   P_pm = 2 |eps_a|^2 sin^2((phi_a + phi_s)/2 + (pi +- pi)/4),
// conditional on the heralding Stokes detection (coincidence counts).
inline std::pair<double, double> fringe_probabilities(const FringeConfig& cfg) {
  cfg.validate();
  const double ea2 = std::norm(cfg.eps_a);
  const double half = 0.5 * (cfg.phi_a + cfg.phi_s);
  const double sp = std::sin(half + 0.5 * M_PI);
  const double sm = std::sin(half);
  return {2.0 * ea2 * sp * sp, 2.0 * ea2 * sm * sm};
}

// Full pipeline (pump -> phase -> probe -> Stokes post-selection ->
// projection onto |a_pm> = (|1_a>_L |0_a>_R pm e^{i phi_a} |0_a>_L |1_a>_R)/sqrt(2)),
// normalized by the |eps_s|^2 heralding probability. The Stokes label is
// traced out of the overlap: after detection the two heralding branches
// are indistinguishable.
inline std::pair<double, double> fringe_from_pipeline(
    const FringeConfig& cfg, TruncationPolicy policy = TruncationPolicy::exact) {
  cfg.validate();
  using namespace ket;
  auto state = probe_conversion(
      apply_stokes_phase(pump_interaction(PhotonicState::vacuum(), cfg.eps_s, policy),
                         cfg.phi_s),
      cfg.eps_a, policy);
  auto projected = project_stokes_detection(state);
  if (!projected)
    throw std::runtime_error("fringe_from_pipeline: zero-norm post-selected state");

  Complex amp_L(0.0, 0.0), amp_R(0.0, 0.0);  // single anti-Stokes, no phonons
  for (const auto& [k, a] : projected->amplitudes) {
    if (occ(k, b_L) || occ(k, b_R)) continue;
    if (occ(k, a_L) && !occ(k, a_R)) amp_L += a;
    if (!occ(k, a_L) && occ(k, a_R)) amp_R += a;
  }
  const Complex phase = std::exp(Complex(0.0, -cfg.phi_a));
  const double herald = std::norm(cfg.eps_s);
  const double p_plus = 0.5 * std::norm(amp_L + phase * amp_R) / herald;
  const double p_minus = 0.5 * std::norm(amp_L - phase * amp_R) / herald;
  return {p_plus, p_minus};
}

// Schmidt rank of the phonon/anti-Stokes L-vs-R bipartition of an
// (unnormalized) state in the single-Stokes sector; rank 2 witnesses the
// post-selected entanglement.
inline int schmidt_rank(const PhotonicState& state, double tol = 1e-12) {
  using namespace ket;
  // local (b, a) occupations: 00, 10, 01 (11 never populated here)
  auto local_index = [](bool b, bool a) { return b ? 1 : (a ? 2 : 0); };
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  for (const auto& [k, amp] : state.amplitudes)
    m(local_index(occ(k, b_L), occ(k, a_L)),
      local_index(occ(k, b_R), occ(k, a_R))) += amp;
  Eigen::JacobiSVD<Eigen::Matrix3cd> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

// Counts for a factorized (non-entangled) phonon state: the anti-Stokes
// photons split evenly and the fringes vanish.
inline std::pair<double, double> factorized_counts(Complex eps_a) {
  const double half = 0.5 * std::norm(eps_a);
  return {half, half};
}

}  // namespace csl
