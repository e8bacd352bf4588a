#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace cavmic::cli {

struct RunOptions {
  std::optional<std::string> material;
  std::vector<DetectionMode> modes{DetectionMode::bright_field, DetectionMode::dark_field,
                                   DetectionMode::zernike_plus, DetectionMode::zernike_minus};
  std::optional<double> t2_fixed;           // cw/rd: restrict to one T2
  std::optional<std::vector<int>> m_list;   // mp: explicit interaction counts
  std::optional<std::string> carrier;       // "halfwave" | "none"
  std::optional<std::string> out;
  bool cw_cut{false};
  double calibrate_target{26.0};
  double calibrate_input{1000.0};
};

std::string mode_name(DetectionMode mode);
std::string scheme_name(Scheme scheme);
DetectionMode parse_mode(const std::string& name);

/// Restores the option block recorded in a run manifest on top of `base`;
/// returns `base` unchanged for plain config files.
RunOptions manifest_options(const std::string& path, RunOptions base);

/// Serialise rows as RFC 4180 CSV (LF line endings, 12 significant digits),
/// written atomically (temp file + rename).
std::string format_csv(const std::vector<SnrPoint>& rows);
void write_file_atomic(const std::string& path, const std::string& content);

/// Dispatch one subcommand: single-pass | cw-sweep | rd-sweep | mp-sweep |
/// calibrate. Writes the CSV and a .manifest.json next to it; returns the
/// process exit status.
int run(const std::string& subcommand, const RunConfig& config, const RunOptions& options);

}  // namespace cavmic::cli
