#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "runner.hpp"

using namespace cavmic;
using namespace cavmic::cli;

namespace {

std::vector<DetectionMode> parse_modes(const std::string& list) {
  std::vector<DetectionMode> modes;
  std::string token;
  for (char ch : list + ",") {
    if (ch == ',') {
      if (!token.empty()) modes.push_back(parse_mode(token));
      token.clear();
    } else {
      token += ch;
    }
  }
  if (modes.empty()) throw std::invalid_argument("--modes list is empty");
  return modes;
}

std::vector<int> parse_m_list(const std::string& list) {
  std::vector<int> ms;
  std::string token;
  for (char ch : list + ",") {
    if (ch == ',') {
      if (!token.empty()) ms.push_back(std::stoi(token));
      token.clear();
    } else {
      token += ch;
    }
  }
  if (ms.empty()) throw std::invalid_argument("--m list is empty");
  return ms;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavmic: constant-damage SNR studies of cavity-enhanced wide-field microscopy"};
  app.require_subcommand(1);

  std::string config_path;
  std::string material;
  std::string modes_list;
  std::string t2_arg = "grid";
  std::string m_arg;
  std::string carrier_arg;
  std::string out_path;
  bool cut = false;
  bool seedless = false;  // reserved: the engine is deterministic, no RNG anywhere
  double calibrate_target = 26.0;
  double calibrate_input = 1000.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (or a run manifest)");
    sub->add_option("--material", material, "sample material name");
    sub->add_option("--modes", modes_list, "comma list of bf,df,znk+,znk-");
    sub->add_option("--carrier", carrier_arg, "halfwave | none");
    sub->add_option("--out", out_path, "output CSV path");
    sub->add_flag("--seedless", seedless, "reserved; runs are deterministic");
  };

  CLI::App* sp = app.add_subcommand("single-pass", "single-interaction reference values");
  add_common(sp);
  CLI::App* cw = app.add_subcommand("cw-sweep", "stationary cavity sweep over detuning and T2");
  add_common(cw);
  cw->add_option("--t2", t2_arg, "output transmission: grid (default) or a value");
  cw->add_flag("--cut", cut, "one row per T2 at the per-mode optimal detuning");
  CLI::App* rd = app.add_subcommand("rd-sweep", "ring-down sweep over T2");
  add_common(rd);
  rd->add_option("--t2", t2_arg, "output transmission: grid (default) or a value");
  CLI::App* mp = app.add_subcommand("mp-sweep", "multi-pass sweep over interaction counts");
  add_common(mp);
  mp->add_option("--m", m_arg, "comma list of odd interaction counts");
  CLI::App* cal = app.add_subcommand("calibrate", "pin the wavelength to the damage reference");
  add_common(cal);
  cal->add_option("--target", calibrate_target, "absorbed photons in a single pass");
  cal->add_option("--input", calibrate_input, "input photons");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig::defaults() : load_config(config_path);
    RunOptions opt;
    if (!config_path.empty()) opt = manifest_options(config_path, opt);
    if (!material.empty()) opt.material = material;
    if (!modes_list.empty()) opt.modes = parse_modes(modes_list);
    if (!carrier_arg.empty()) opt.carrier = carrier_arg;
    if (!out_path.empty()) opt.out = out_path;
    if (t2_arg != "grid") opt.t2_fixed = std::stod(t2_arg);
    if (!m_arg.empty()) opt.m_list = parse_m_list(m_arg);
    if (cut) opt.cw_cut = true;
    opt.calibrate_target = calibrate_target;
    opt.calibrate_input = calibrate_input;

    const std::string sub = app.get_subcommands().front()->get_name();
    return run(sub, cfg, opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
