#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavmic/experiments.hpp"

namespace cavmic::cli {

// Wavelength pinned by the absorbed-photon calibration of a graphene
// monolayer (26 of 1000 photons in a single pass); recompute with the
// `calibrate` subcommand.
inline constexpr double kDefaultWavelengthNm = 602.446477662;

struct MaterialEntry {
  std::string name;
  double n_re{1.0};
  double n_im{0.0};
  double monolayer_thickness_angstrom{1.0};
  int layers{1};

  MaterialLayer layer() const {
    return MaterialLayer{{n_re, n_im}, monolayer_thickness_angstrom * 1e-10, layers};
  }
};

struct RunConfig {
  double wavelength_nm{kDefaultWavelengthNm};
  std::vector<MaterialEntry> materials;  // built-ins plus config entries
  double carrier_n_g{1.5};
  int carrier_half_wave_order{0};
  std::optional<double> carrier_d_g_nm;  // explicit thickness instead of a half-wave order
  double cavity_r1{0.98};
  std::string cavity_t2_rule{"study"};   // "study": R2 = R1*(1-T2); "lossless": R2 = 1-T2
  double outcoupler_efficiency{1.0};
  double input_photons{1000.0};
  std::string budget_mode{"auto"};       // "auto" | "absorbed" | "fluence"
  double budget_reference_photons{1000.0};
  int grid_detuning_points{256};
  int grid_t2_points{64};
  double grid_t2_min{1e-3};
  double grid_t2_max{1.0};
  int grid_m_max{501};
  std::string output{"results.csv"};
  std::string default_material{"graphene"};

  static RunConfig defaults();
  const MaterialEntry& material(const std::string& name) const;
  WavelengthSpec wavelength() const { return WavelengthSpec{wavelength_nm * 1e-9}; }
  CarrierSpec carrier(const WavelengthSpec& wl) const;
  SweepGrid grid() const;
  /// Budget for the named material under the configured mode.
  DamageBudget budget(const MaterialLayer& material, const CarrierSpec& carrier,
                      const WavelengthSpec& wl) const;
  /// Canonical JSON serialisation (sorted keys), used for hashing and the
  /// run manifest.
  std::string to_json() const;
};

/// Parse and validate a config file. The file may be a plain config object
/// or a manifest produced by an earlier run (the embedded "config" object
/// is used). Unknown keys are rejected; validation errors name the key.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);

/// FNV-1a 64-bit hash of the canonical config serialisation, as hex.
std::string config_hash(const RunConfig& cfg);

}  // namespace cavmic::cli
