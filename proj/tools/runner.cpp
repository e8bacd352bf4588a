#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cavmic/version.hpp"

namespace cavmic::cli {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_manifest(const std::string& csv_path, const RunConfig& cfg,
                    const std::string& subcommand, double calibrated_lambda_nm,
                    const RunOptions& opt) {
  nlohmann::json m;
  m["library_version"] = kVersion;
  m["subcommand"] = subcommand;
  m["config_hash"] = config_hash(cfg);
  m["wavelength_nm"] = cfg.wavelength_nm;
  m["calibrated_wavelength_nm"] = calibrated_lambda_nm;
  m["config"] = nlohmann::json::parse(cfg.to_json());

  nlohmann::json jo;
  nlohmann::json jmodes = nlohmann::json::array();
  for (DetectionMode mode : opt.modes) jmodes.push_back(mode_name(mode));
  jo["modes"] = jmodes;
  if (opt.t2_fixed) jo["t2"] = *opt.t2_fixed;
  if (opt.m_list) jo["m"] = *opt.m_list;
  jo["cut"] = opt.cw_cut;
  jo["calibrate_target"] = opt.calibrate_target;
  jo["calibrate_input"] = opt.calibrate_input;
  m["options"] = jo;
  write_file_atomic(csv_path + ".manifest.json", m.dump(2) + "\n");
}

}  // namespace

std::string mode_name(DetectionMode mode) {
  switch (mode) {
    case DetectionMode::bright_field: return "bf";
    case DetectionMode::dark_field: return "df";
    case DetectionMode::zernike_plus: return "znk+";
    case DetectionMode::zernike_minus: return "znk-";
  }
  return "?";
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::single_pass: return "single-pass";
    case Scheme::cw: return "cw";
    case Scheme::ring_down: return "rd";
    case Scheme::multi_pass: return "mp";
  }
  return "?";
}

DetectionMode parse_mode(const std::string& name) {
  if (name == "bf") return DetectionMode::bright_field;
  if (name == "df") return DetectionMode::dark_field;
  if (name == "znk+") return DetectionMode::zernike_plus;
  if (name == "znk-") return DetectionMode::zernike_minus;
  throw std::invalid_argument("unknown mode \"" + name + "\" (expected bf, df, znk+ or znk-)");
}

RunOptions manifest_options(const std::string& path, RunOptions base) {
  std::ifstream in(path);
  if (!in) return base;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error&) {
    return base;
  }
  if (!j.is_object() || !j.contains("options")) return base;
  const auto& jo = j["options"];
  if (jo.contains("modes")) {
    base.modes.clear();
    for (const auto& name : jo["modes"]) base.modes.push_back(parse_mode(name));
  }
  if (jo.contains("t2")) base.t2_fixed = jo["t2"].get<double>();
  if (jo.contains("m")) base.m_list = jo["m"].get<std::vector<int>>();
  if (jo.contains("cut")) base.cw_cut = jo["cut"].get<bool>();
  if (jo.contains("calibrate_target")) base.calibrate_target = jo["calibrate_target"];
  if (jo.contains("calibrate_input")) base.calibrate_input = jo["calibrate_input"];
  return base;
}

std::string format_csv(const std::vector<SnrPoint>& rows) {
  std::string out = "scheme,mode,coord1,coord2,n1,n2,snr,damage,input_scale\n";
  for (const auto& r : rows) {
    out += scheme_name(r.scheme);
    out += ',';
    out += mode_name(r.mode);
    out += ',';
    out += fmt_double(r.coord1);
    out += ',';
    out += fmt_double(r.coord2);
    out += ',';
    out += fmt_double(r.n1);
    out += ',';
    out += fmt_double(r.n2);
    out += ',';
    out += fmt_double(r.snr);
    out += ',';
    out += fmt_double(r.damage);
    out += ',';
    out += fmt_double(r.input_scale);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

int run(const std::string& subcommand, const RunConfig& config, const RunOptions& options) {
  RunConfig cfg = config;
  if (options.out) cfg.output = *options.out;
  if (options.material) cfg.default_material = *options.material;
  if (options.carrier) {
    if (*options.carrier == "none") {
      cfg.carrier_half_wave_order = 0;
      cfg.carrier_d_g_nm.reset();
    } else if (*options.carrier == "halfwave") {
      if (cfg.carrier_half_wave_order == 0) cfg.carrier_half_wave_order = 1;
      cfg.carrier_d_g_nm.reset();
    } else {
      throw std::invalid_argument("--carrier must be halfwave or none");
    }
  }

  const WavelengthSpec wl = cfg.wavelength();
  const MaterialLayer sample = cfg.material(cfg.default_material).layer();
  const MaterialLayer graphene = cfg.material("graphene").layer();

  if (subcommand == "calibrate") {
    const WavelengthSpec cal =
        calibrate_wavelength(graphene, options.calibrate_target, options.calibrate_input);
    const SampleCoeffs s = sample_coefficients(graphene, CarrierSpec::none(), cal);
    const double absorbed =
        options.calibrate_input * (1.0 - std::norm(s.t) - std::norm(s.r_left));
    std::printf("calibrated_wavelength_nm = %.9f\n", cal.lambda_m * 1e9);
    std::printf("single_pass_absorbed_photons = %.9f\n", absorbed);
    write_manifest(cfg.output, cfg, subcommand, cal.lambda_m * 1e9, options);
    return 0;
  }

  const CarrierSpec carrier = cfg.carrier(wl);
  const DamageBudget budget = cfg.budget(sample, carrier, wl);

  SweepRequest req;
  req.grid = cfg.grid();
  req.modes = options.modes;
  req.r1 = cfg.cavity_r1;
  req.outcoupler_efficiency = cfg.outcoupler_efficiency;
  if (options.t2_fixed) req.cw_fixed_t2 = *options.t2_fixed;
  req.cw_optimal_cut = options.cw_cut;
  if (options.m_list) req.grid.m = *options.m_list;
  if (options.t2_fixed && subcommand == "rd-sweep") req.grid.t2 = {*options.t2_fixed};

  std::vector<SnrPoint> rows;
  if (subcommand == "single-pass") {
    req.scheme = Scheme::single_pass;
    rows = sweep(req, sample, carrier, wl, budget);
  } else if (subcommand == "cw-sweep") {
    req.scheme = Scheme::cw;
    rows = sweep(req, sample, carrier, wl, budget);
  } else if (subcommand == "rd-sweep") {
    req.scheme = Scheme::ring_down;
    rows = sweep(req, sample, carrier, wl, budget);
  } else if (subcommand == "mp-sweep") {
    req.scheme = Scheme::multi_pass;
    rows = sweep(req, sample, carrier, wl, budget);
  } else {
    throw std::invalid_argument("unknown subcommand \"" + subcommand + "\"");
  }

  write_file_atomic(cfg.output, format_csv(rows));
  const WavelengthSpec cal = calibrate_wavelength(graphene, 26.0, 1000.0);
  write_manifest(cfg.output, cfg, subcommand, cal.lambda_m * 1e9, options);
  return 0;
}

}  // namespace cavmic::cli
