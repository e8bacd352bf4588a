#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cavmic::cli {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw std::invalid_argument("config: unknown key \"" + key + "\" in " + where);
  }
}

double require_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw std::invalid_argument("config: " + key + " must be a number");
  return obj[key].get<double>();
}

int require_int(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw std::invalid_argument("config: " + key + " must be an integer");
  return obj[key].get<int>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw std::invalid_argument("config: " + key + " must be a string");
  return obj[key].get<std::string>();
}

std::vector<MaterialEntry> builtin_materials() {
  return {
      {"graphene", 2.71, 1.41, 3.35, 1},
      {"bn", 1.8, 0.0, 3.33, 1},
      {"bn20", 1.8, 0.0, 3.33, 20},
  };
}

void validate(const RunConfig& c) {
  if (!(c.wavelength_nm > 0.0))
    throw std::invalid_argument("config: wavelength_nm must be positive");
  if (!(c.cavity_r1 > 0.0 && c.cavity_r1 < 1.0))
    throw std::invalid_argument("config: R1 out of (0,1)");
  if (c.cavity_t2_rule != "study" && c.cavity_t2_rule != "lossless")
    throw std::invalid_argument("config: T2_rule must be \"study\" or \"lossless\"");
  if (!(c.outcoupler_efficiency > 0.0 && c.outcoupler_efficiency <= 1.0))
    throw std::invalid_argument("config: outcoupler_efficiency out of (0,1]");
  if (!(c.input_photons > 0.0))
    throw std::invalid_argument("config: input_photons must be positive");
  if (c.budget_mode != "auto" && c.budget_mode != "absorbed" && c.budget_mode != "fluence")
    throw std::invalid_argument("config: budget mode must be auto, absorbed or fluence");
  if (!(c.budget_reference_photons > 0.0))
    throw std::invalid_argument("config: budget reference_photons must be positive");
  if (c.grid_detuning_points < 2)
    throw std::invalid_argument("config: detuning_points must be >= 2");
  if (c.grid_t2_points < 2)
    throw std::invalid_argument("config: t2_points must be >= 2");
  if (!(c.grid_t2_min > 0.0 && c.grid_t2_max > c.grid_t2_min && c.grid_t2_max <= 1.0))
    throw std::invalid_argument("config: t2 grid bounds out of range");
  if (c.grid_m_max < 1)
    throw std::invalid_argument("config: m_max must be >= 1");
  if (!(c.carrier_n_g >= 1.0))
    throw std::invalid_argument("config: carrier n_g must be >= 1");
  if (c.carrier_half_wave_order < 0)
    throw std::invalid_argument("config: carrier half_wave_order must be >= 0");
  for (const auto& m : c.materials) {
    if (m.name.empty()) throw std::invalid_argument("config: material name empty");
    if (!(m.n_re > 0.0)) throw std::invalid_argument("config: material n_re must be positive");
    if (m.n_im < 0.0) throw std::invalid_argument("config: material n_im must be >= 0");
    if (!(m.monolayer_thickness_angstrom > 0.0))
      throw std::invalid_argument("config: material thickness must be positive");
    if (m.layers < 1) throw std::invalid_argument("config: material layers must be >= 1");
  }
  c.material(c.default_material);  // must resolve
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.materials = builtin_materials();
  return c;
}

const MaterialEntry& RunConfig::material(const std::string& name) const {
  for (const auto& m : materials)
    if (m.name == name) return m;
  throw std::invalid_argument("config: unknown material \"" + name + "\"");
}

CarrierSpec RunConfig::carrier(const WavelengthSpec& wl) const {
  if (carrier_d_g_nm)
    return CarrierSpec::explicit_thickness(carrier_n_g, *carrier_d_g_nm * 1e-9);
  if (carrier_half_wave_order == 0) return CarrierSpec::none();
  return CarrierSpec::half_wave(carrier_n_g, carrier_half_wave_order, wl);
}

SweepGrid RunConfig::grid() const {
  SweepGrid g;
  g.detuning.resize(grid_detuning_points);
  for (int i = 0; i < grid_detuning_points; ++i)
    g.detuning[i] = static_cast<double>(i) / grid_detuning_points;
  g.t2 = SweepGrid::log_spaced(grid_t2_min, grid_t2_max, grid_t2_points);
  for (int m = 1; m <= grid_m_max; m += 2) g.m.push_back(m);
  return g;
}

DamageBudget RunConfig::budget(const MaterialLayer& material, const CarrierSpec& car,
                               const WavelengthSpec& wl) const {
  DamageBudget b = DamageBudget::auto_for(material, car, wl, budget_reference_photons);
  if (budget_mode == "absorbed") b.target = DamageBudget::Target::absorbed_photons;
  if (budget_mode == "fluence") b.target = DamageBudget::Target::fluence_interactions;
  if (budget_mode != "auto") {
    // re-evaluate the single-pass target under the forced functional
    const SampleCoeffs s = sample_coefficients(material, car, wl);
    const IlluminationSpec illum{budget_reference_photons,
                                 IlluminationSpec::PulseClass::short_pulse};
    const DamageReport rep = pulsed_absorption(1, CavityConfig::study(0.02), s, illum);
    b.target_value = b.target == DamageBudget::Target::absorbed_photons
                         ? rep.absorbed_photons
                         : rep.weighted_interactions;
  }
  return b;
}

std::string RunConfig::to_json() const {
  json j;
  j["wavelength_nm"] = wavelength_nm;
  j["materials"] = json::array();
  for (const auto& m : materials) {
    j["materials"].push_back({{"name", m.name},
                              {"n_re", m.n_re},
                              {"n_im", m.n_im},
                              {"monolayer_thickness_angstrom", m.monolayer_thickness_angstrom},
                              {"layers", m.layers}});
  }
  j["carrier"] = {{"n_g", carrier_n_g}, {"half_wave_order", carrier_half_wave_order}};
  if (carrier_d_g_nm) j["carrier"]["d_g_nm"] = *carrier_d_g_nm;
  j["cavity"] = {{"R1", cavity_r1},
                 {"T2_rule", cavity_t2_rule},
                 {"outcoupler_efficiency", outcoupler_efficiency}};
  j["illumination"] = {{"input_photons", input_photons}};
  j["budget"] = {{"mode", budget_mode}, {"reference_photons", budget_reference_photons}};
  j["grids"] = {{"detuning_points", grid_detuning_points},
                {"t2_points", grid_t2_points},
                {"t2_min", grid_t2_min},
                {"t2_max", grid_t2_max},
                {"m_max", grid_m_max}};
  j["material"] = default_material;
  j["output"] = output;
  return j.dump(2);
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: parse error in " + origin + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  // a manifest from an earlier run embeds the resolved config
  if (j.contains("config") && j["config"].is_object()) j = j["config"];

  reject_unknown_keys(j,
                      {"wavelength_nm", "materials", "carrier", "cavity", "illumination",
                       "budget", "grids", "output", "material"},
                      "top level");

  RunConfig c = RunConfig::defaults();
  c.wavelength_nm = require_number(j, "wavelength_nm", c.wavelength_nm);

  // shorthand: {"material": "graphene"} selects the default sample
  if (j.contains("material")) {
    if (!j["material"].is_string())
      throw std::invalid_argument("config: material must be a string");
    c.default_material = j["material"].get<std::string>();
  }

  if (j.contains("materials")) {
    if (!j["materials"].is_array())
      throw std::invalid_argument("config: materials must be an array");
    for (const auto& jm : j["materials"]) {
      reject_unknown_keys(jm, {"name", "n_re", "n_im", "monolayer_thickness_angstrom", "layers"},
                          "materials[]");
      MaterialEntry m;
      m.name = require_string(jm, "name", "");
      m.n_re = require_number(jm, "n_re", 1.0);
      m.n_im = require_number(jm, "n_im", 0.0);
      m.monolayer_thickness_angstrom = require_number(jm, "monolayer_thickness_angstrom", 1.0);
      m.layers = require_int(jm, "layers", 1);
      bool replaced = false;
      for (auto& existing : c.materials)
        if (existing.name == m.name) {
          existing = m;
          replaced = true;
        }
      if (!replaced) c.materials.push_back(m);
    }
  }

  if (j.contains("carrier")) {
    const auto& jc = j["carrier"];
    reject_unknown_keys(jc, {"n_g", "half_wave_order", "d_g_nm"}, "carrier");
    c.carrier_n_g = require_number(jc, "n_g", c.carrier_n_g);
    c.carrier_half_wave_order = require_int(jc, "half_wave_order", c.carrier_half_wave_order);
    if (jc.contains("d_g_nm")) c.carrier_d_g_nm = require_number(jc, "d_g_nm", 0.0);
  }

  if (j.contains("cavity")) {
    const auto& jc = j["cavity"];
    reject_unknown_keys(jc, {"R1", "T2_rule", "outcoupler_efficiency"}, "cavity");
    c.cavity_r1 = require_number(jc, "R1", c.cavity_r1);
    c.cavity_t2_rule = require_string(jc, "T2_rule", c.cavity_t2_rule);
    c.outcoupler_efficiency = require_number(jc, "outcoupler_efficiency", c.outcoupler_efficiency);
  }

  if (j.contains("illumination")) {
    const auto& ji = j["illumination"];
    reject_unknown_keys(ji, {"input_photons"}, "illumination");
    c.input_photons = require_number(ji, "input_photons", c.input_photons);
  }

  if (j.contains("budget")) {
    const auto& jb = j["budget"];
    reject_unknown_keys(jb, {"mode", "reference_photons"}, "budget");
    c.budget_mode = require_string(jb, "mode", c.budget_mode);
    c.budget_reference_photons =
        require_number(jb, "reference_photons", c.budget_reference_photons);
  }

  if (j.contains("grids")) {
    const auto& jg = j["grids"];
    reject_unknown_keys(jg, {"detuning_points", "t2_points", "t2_min", "t2_max", "m_max"},
                        "grids");
    c.grid_detuning_points = require_int(jg, "detuning_points", c.grid_detuning_points);
    c.grid_t2_points = require_int(jg, "t2_points", c.grid_t2_points);
    c.grid_t2_min = require_number(jg, "t2_min", c.grid_t2_min);
    c.grid_t2_max = require_number(jg, "t2_max", c.grid_t2_max);
    c.grid_m_max = require_int(jg, "m_max", c.grid_m_max);
  }

  c.output = require_string(j, "output", c.output);
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = cfg.to_json();
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

}  // namespace cavmic::cli
