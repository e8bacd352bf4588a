#pragma once

#include <complex>

#include "cavmic/materials.hpp"

// Round-trip algebra of the self-imaging 8f cavity. One half roundtrip =
// one sample pass followed by reflection at a mirror and re-imaging onto
// the sample plane; the matrix M = diag(r1, r2) * M_s advances the pair
// (E_L->, E_R<-) of amplitudes impinging on the sample by one such step.
// Mirror amplitudes follow r_i = -sqrt(R_i), t_i = sqrt(T_i).
//
// All photon numbers are per pixel and normalised to the incoupled energy:
// IlluminationSpec::input_photons counts T1 * Q_in / (hbar w), so T1 never
// appears in a detected quantity on its own.

namespace cavmic {

/// Mirror set of the cavity. The loss convention R2 = base*(1 - T2) models
/// the undetected 2% loss of the study mirror; lossless_mirrors marks
/// configurations with R + T = 1 on both ends (used by energy audits).
struct CavityConfig {
  double reflectivity_in{0.98};    // R1
  double transmission_in{0.02};    // T1
  double reflectivity_out{0.98};   // R2
  double transmission_out{0.02};   // T2
  bool lossless_mirrors{false};
  double focal_length_m{0.0};      // informational; sweeps drive the detuning directly

  /// Study configuration: R1 fixed, R2 = R1*(1 - T2).
  static CavityConfig study(double t2, double r1 = 0.98);
  /// R + T = 1 on both mirrors.
  static CavityConfig lossless(double r1, double r2);
  static CavityConfig lossless_symmetric(double r);
  /// Multi-pass cavity: R1 = R2 = R, no passive outcoupling.
  static CavityConfig multipass(double r = 0.98);

  void validate() const;

  Complex r1() const { return Complex{-std::sqrt(reflectivity_in), 0.0}; }
  Complex r2() const { return Complex{-std::sqrt(reflectivity_out), 0.0}; }
  double t1() const { return std::sqrt(transmission_in); }
  double t2() const { return std::sqrt(transmission_out); }
};

/// Pair of counter-propagating amplitudes on the sample plane.
struct FieldPair {
  Complex left{};   // E_L-> before the sample, or E_L<- after it
  Complex right{};  // E_R<- before the sample, or E_R-> after it

  double norm_sq() const { return std::norm(left) + std::norm(right); }
};

struct TransferMatrix {
  Complex m00{1.0}, m01{0.0}, m10{0.0}, m11{1.0};

  /// Sample map M_s = [[r_left, t], [t, r_right]].
  static TransferMatrix sample_map(const SampleCoeffs& s);
  /// Bare-plate map with the carrier coefficients in place of the sample.
  static TransferMatrix plate_map(const SampleCoeffs& s);
  /// Half-roundtrip matrix M = diag(r1, r2) * M_s.
  static TransferMatrix half_roundtrip(const CavityConfig& cav, const SampleCoeffs& s);
  /// Half-roundtrip matrix of the empty plate (reference pixel).
  static TransferMatrix plate_half_roundtrip(const CavityConfig& cav, const SampleCoeffs& s);
  /// diag(r1, r2) * m for arbitrary mirror amplitudes.
  static TransferMatrix scaled_rows(Complex r1, Complex r2, const TransferMatrix& m);

  TransferMatrix operator*(const TransferMatrix& o) const;
  FieldPair apply(const FieldPair& v) const;
  Complex trace() const { return m00 + m11; }
  Complex determinant() const { return m00 * m11 - m01 * m10; }
};

struct Eigenpair {
  Complex plus{};
  Complex minus{};
  bool degenerate{false};
};

struct IlluminationSpec {
  enum class PulseClass { cw, short_pulse };

  double input_photons{1000.0};  // T1 * Q_in / (hbar w) per pixel
  PulseClass pulse_class{PulseClass::short_pulse};
};

/// Absorption bookkeeping for one scheme evaluation. fluence_interactions
/// sums the incident intensity per pass (sum_n |M^n e1|^2);
/// weighted_interactions weighs each pass by the standing-wave intensity
/// at the layer, which is the chi_I -> 0 limit of absorbed/(2 chi_I) and
/// stays finite for lossless samples.
struct DamageReport {
  enum class Mode { absorption, fluence_limit };

  double absorbed_photons{0.0};
  double fluence_interactions{0.0};
  double weighted_interactions{0.0};
  Mode mode{Mode::absorption};
  double truncation_error{0.0};  // geometric tail bound, photons
  int pulses_summed{0};

  double value() const {
    return mode == Mode::absorption ? absorbed_photons : weighted_interactions;
  }
};

/// Eigenvalues of a 2x2 matrix with the stable quadratic-root split;
/// degenerate when |l+ - l-| < 1e-12 max(|l+|, |l-|).
Eigenpair eigenpair(const TransferMatrix& m);

/// Pulse weight g_m = (l+^m - l-^m)/(l+ - l-); m * l^(m-1) on the
/// degenerate branch.
Complex pulse_weight(int m, const Eigenpair& eig);

/// Photons in the m-th outcoupled pulse at the exit mirror,
/// T2 * |t_s g_m|^2 * input_photons.
double pulsed_output_energy(int m, const CavityConfig& cav, const SampleCoeffs& s,
                            const IlluminationSpec& illum);

/// Round-trip phase factor exp(i 2 pi u) for the detuning fraction
/// u = (8f mod lambda)/lambda; with a carrier the swept axis is
/// ((8f - d_g) mod lambda)/lambda and the factor picks up exp(i k d_g).
Complex roundtrip_phase(double detuning_frac);
Complex roundtrip_phase(double detuning_frac, const CarrierSpec& carrier,
                        const WavelengthSpec& wl);

/// Stationary transmitted amplitude ratio E_out/E_in,
/// t1 t2 t_s z / ((1 - z l+)(1 - z l-)) with z the round-trip phase.
/// Throws std::domain_error when |l| >= 1 (unphysical gain).
Complex cw_output(const CavityConfig& cav, const SampleCoeffs& s, Complex phase);

/// Stationary amplitudes on both sides of the sample, per unit input
/// amplitude. outgoing = M_s * incoming; the transmitted output is
/// -t2 * sqrt(z) * outgoing.right.
struct SampleFields {
  FieldPair incoming;  // (E_L->, E_R<-)
  FieldPair outgoing;  // (E_L<-, E_R->)
};
SampleFields cw_sample_fields(const CavityConfig& cav, const SampleCoeffs& s, Complex phase);

/// Absorbed energy accumulated over the first m_max sample interactions
/// (m_max < 0 sums the whole train; the sum stops once the pulse energies
/// fall below 1e-12 of the input and the geometric tail is reported).
DamageReport pulsed_absorption(int m_max, const CavityConfig& cav, const SampleCoeffs& s,
                               const IlluminationSpec& illum);

/// Stationary absorbed-to-detected intensity ratio I_abs/I_out (closed
/// form); equals the Poynting balance of cw_sample_fields.
double cw_absorption(const CavityConfig& cav, const SampleCoeffs& s, Complex phase);

enum class Scheme { single_pass, cw, ring_down, multi_pass };

/// Weak-sample closed forms per unit incoupled photon. Signals are signed
/// sample-minus-reference photon numbers; q_ref is the reference pixel.
struct WsRegime {
  Scheme scheme{Scheme::cw};
  int ell{0};                        // multi-pass roundtrips, m = 2*ell + 1
  double outcoupler_efficiency{1.0};
};
struct WsPredictions {
  double mean_roundtrips{};
  double q_ref{};
  double q_bf{};
  double q_df{};
  double q_znk_plus{};
  double q_znk_minus{};
  double q_abs{};
};
WsPredictions ws_predictions(const CavityConfig& cav, const Susceptibility& chi,
                             const CarrierSpec& carrier, const WsRegime& regime);

}  // namespace cavmic
