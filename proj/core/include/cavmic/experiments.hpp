#pragma once

#include <limits>
#include <vector>

#include "cavmic/detection.hpp"

// Constant-damage signal-to-noise studies. Every scheme is normalised so
// that it deposits the same damage as a single pass of the reference pulse
// through the same sample: absorbed photons for absorbing samples, or the
// standing-wave-weighted interaction count for lossless ones (where the
// absorbed-photon constraint degenerates but its ratio stays finite).

namespace cavmic {

/// |N1 - N2| / sqrt(N1 + N2); defined as 0 when both counts vanish.
double snr(double n1, double n2);

struct DamageBudget {
  enum class Target { absorbed_photons, fluence_interactions };

  double reference_input_photons{1000.0};
  Target target{Target::absorbed_photons};
  double target_value{0.0};

  /// Per-sample budget: the sample's own single-pass damage at the
  /// reference input. Switches to the fluence target when chi_I < 1e-9.
  static DamageBudget auto_for(const MaterialLayer& material, const CarrierSpec& carrier,
                               const WavelengthSpec& wl, double reference_photons = 1000.0);
};

/// One scheme at one operating point.
struct SchemeConfig {
  Scheme scheme{Scheme::single_pass};
  CavityConfig cavity{};
  Complex phase{1.0, 0.0};  // cw round-trip phase
  int ell{0};               // multi-pass roundtrips, m = 2*ell + 1
};

/// Damage deposited by the scheme at the budget's reference input.
DamageReport damage_functional(const SchemeConfig& scheme, const MaterialLayer& material,
                               const CarrierSpec& carrier, const WavelengthSpec& wl,
                               const DamageBudget& budget);

/// Input scale s with s * damage(scheme) = budget target. Throws for an
/// empty sample (chi == 0), where no budget is defined.
double normalize_input(const SchemeConfig& scheme, const MaterialLayer& material,
                       const CarrierSpec& carrier, const WavelengthSpec& wl,
                       const DamageBudget& budget);

struct SnrPoint {
  Scheme scheme{Scheme::single_pass};
  DetectionMode mode{DetectionMode::bright_field};
  double coord1{std::numeric_limits<double>::quiet_NaN()};  // detuning (cw), T2 (rd), m (mp)
  double coord2{std::numeric_limits<double>::quiet_NaN()};  // T2 (cw)
  double n1{0.0};
  double n2{0.0};
  double snr{0.0};
  double damage{0.0};
  double input_scale{1.0};
};

struct SweepGrid {
  std::vector<double> detuning;  // fractions in [0,1)
  std::vector<double> t2;        // output transmissions
  std::vector<int> m;            // odd interaction counts

  static SweepGrid defaults();
  static std::vector<double> log_spaced(double lo, double hi, int n);
  void validate() const;
};

struct SweepRequest {
  Scheme scheme{Scheme::cw};
  SweepGrid grid{};
  std::vector<DetectionMode> modes{DetectionMode::bright_field, DetectionMode::dark_field,
                                   DetectionMode::zernike_plus, DetectionMode::zernike_minus};
  double r1{0.98};
  double outcoupler_efficiency{1.0};
  /// CW only: emit one row per (mode, T2) at the mode's optimal detuning
  /// (2D grid argmax refined by golden-section search to 1e-6).
  bool cw_optimal_cut{false};
  /// CW only: restrict to a single T2 instead of the grid.
  double cw_fixed_t2{std::numeric_limits<double>::quiet_NaN()};
};

/// Constant-damage SNR over the requested grid. CW rows carry (detuning,
/// T2), ring-down rows T2, multi-pass rows m; grid order is preserved.
std::vector<SnrPoint> sweep(const SweepRequest& request, const MaterialLayer& material,
                            const CarrierSpec& carrier, const WavelengthSpec& wl,
                            const DamageBudget& budget);

/// One sample interaction with full detection and no cavity.
SnrPoint single_pass_reference(const MaterialLayer& material, const CarrierSpec& carrier,
                               const WavelengthSpec& wl, DetectionMode mode,
                               const DamageBudget& budget);

/// Per-mode optimal CW detuning: argmax of the constant-damage SNR over
/// the 2D (detuning, T2) grid, refined by golden-section search.
double cw_optimal_detuning(const SweepRequest& request, const MaterialLayer& material,
                           const CarrierSpec& carrier, const WavelengthSpec& wl,
                           const DamageBudget& budget, DetectionMode mode);

/// Bisection for the wavelength at which the exact single-pass absorption
/// of `material` equals target_absorbed at the given input. The bracket is
/// [300 nm, 1200 nm]; absorption must be monotone and change sign on it.
WavelengthSpec calibrate_wavelength(const MaterialLayer& material, double target_absorbed = 26.0,
                                    double input_photons = 1000.0);

struct PhaseEstimate {
  double chi_est{0.0};
  double delta_chi{0.0};
};

/// Shot-noise phase estimate from sample and reference counts after m
/// interactions: chi ~ (N - Nref)/(2 m Nref), error sqrt(N + Nref)/(2 m Nref).
PhaseEstimate estimate_phase(double n, double n_ref, int m);

}  // namespace cavmic
