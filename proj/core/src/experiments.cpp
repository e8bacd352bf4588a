#include "cavmic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace cavmic {

namespace {

constexpr double kFluenceSwitch = 1e-9;   // chi_I below this uses the fluence target
constexpr double kDetuningRefineTol = 1e-6;

double budget_value(const DamageReport& rep, DamageBudget::Target target) {
  return target == DamageBudget::Target::absorbed_photons ? rep.absorbed_photons
                                                          : rep.weighted_interactions;
}

// Stationary per-point quantities at the budget's reference input.
struct CwPoint {
  double n1[4];       // indexed by DetectionMode
  double n2[4];
  double damage_abs;
  double damage_weighted;
  double damage_fluence;
};

CwPoint cw_point(const CavityConfig& cav, const SampleCoeffs& s, Complex phase, double q) {
  const SampleFields f = cw_sample_fields(cav, s, phase);
  const double t1 = cav.transmission_in;
  CwPoint p{};
  p.damage_abs =
      s.lossless ? 0.0 : std::max(0.0, f.incoming.norm_sq() - f.outgoing.norm_sq()) * q / t1;
  p.damage_weighted =
      std::norm(f.incoming.left + s.t_carrier * f.incoming.right) * q / t1;
  p.damage_fluence = f.incoming.norm_sq() * q / t1;

  const IlluminationSpec illum{q, IlluminationSpec::PulseClass::cw};
  for (int mi = 0; mi < 4; ++mi) {
    const DetectionRecord rec =
        cw_signal(static_cast<DetectionMode>(mi), cav, s, phase, illum);
    p.n1[mi] = rec.n_sample;
    p.n2[mi] = rec.n_reference;
  }
  return p;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

int mode_index(DetectionMode m) { return static_cast<int>(m); }

}  // namespace

double snr(double n1, double n2) {
  if (n1 < 0.0 || n2 < 0.0) throw std::invalid_argument("snr: negative photon count");
  const double total = n1 + n2;
  if (total == 0.0) return 0.0;
  return std::abs(n1 - n2) / std::sqrt(total);
}

DamageBudget DamageBudget::auto_for(const MaterialLayer& material, const CarrierSpec& carrier,
                                    const WavelengthSpec& wl, double reference_photons) {
  const Susceptibility chi = susceptibility(material, wl);
  DamageBudget b;
  b.reference_input_photons = reference_photons;
  b.target = chi.imag_part() >= kFluenceSwitch ? Target::absorbed_photons
                                               : Target::fluence_interactions;

  const SampleCoeffs s = sample_coefficients(material, carrier, wl);
  const IlluminationSpec illum{reference_photons, IlluminationSpec::PulseClass::short_pulse};
  const DamageReport rep = pulsed_absorption(1, CavityConfig::study(0.02), s, illum);
  b.target_value = budget_value(rep, b.target);
  return b;
}

DamageReport damage_functional(const SchemeConfig& scheme, const MaterialLayer& material,
                               const CarrierSpec& carrier, const WavelengthSpec& wl,
                               const DamageBudget& budget) {
  const SampleCoeffs s = sample_coefficients(material, carrier, wl);
  const IlluminationSpec illum{budget.reference_input_photons,
                               scheme.scheme == Scheme::cw
                                   ? IlluminationSpec::PulseClass::cw
                                   : IlluminationSpec::PulseClass::short_pulse};
  switch (scheme.scheme) {
    case Scheme::single_pass:
      return pulsed_absorption(1, scheme.cavity, s, illum);
    case Scheme::ring_down:
      return pulsed_absorption(-1, scheme.cavity, s, illum);
    case Scheme::multi_pass:
      return pulsed_absorption(2 * scheme.ell + 1, scheme.cavity, s, illum);
    case Scheme::cw: {
      const CwPoint p = cw_point(scheme.cavity, s, scheme.phase, budget.reference_input_photons);
      DamageReport rep;
      rep.absorbed_photons = p.damage_abs;
      rep.weighted_interactions = p.damage_weighted;
      rep.fluence_interactions = p.damage_fluence;
      rep.mode = s.lossless ? DamageReport::Mode::fluence_limit : DamageReport::Mode::absorption;
      return rep;
    }
  }
  throw std::invalid_argument("damage_functional: unknown scheme");
}

double normalize_input(const SchemeConfig& scheme, const MaterialLayer& material,
                       const CarrierSpec& carrier, const WavelengthSpec& wl,
                       const DamageBudget& budget) {
  const Susceptibility chi = susceptibility(material, wl);
  if (chi.chi == Complex{0.0})
    throw std::domain_error("normalize_input: empty sample, damage budget undefined");

  const DamageReport rep = damage_functional(scheme, material, carrier, wl, budget);
  const double d = budget_value(rep, budget.target);
  if (!(d > 0.0))
    throw std::domain_error("normalize_input: scheme deposits no damage, budget undefined");
  return budget.target_value / d;
}

SweepGrid SweepGrid::defaults() {
  SweepGrid g;
  g.detuning.resize(256);
  for (int i = 0; i < 256; ++i) g.detuning[i] = i / 256.0;
  g.t2 = log_spaced(1e-3, 1.0, 64);
  for (int m = 1; m <= 501; m += 2) g.m.push_back(m);
  return g;
}

std::vector<double> SweepGrid::log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo && n >= 2))
    throw std::invalid_argument("SweepGrid: bad log grid bounds");
  std::vector<double> v(n);
  const double step = (std::log10(hi) - std::log10(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, std::log10(lo) + i * step);
  v.back() = hi;
  return v;
}

void SweepGrid::validate() const {
  auto monotone = [](const auto& v) {
    for (size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  if (detuning.empty() && t2.empty() && m.empty())
    throw std::invalid_argument("SweepGrid: all grids empty");
  if (!monotone(detuning) || !monotone(t2) || !monotone(m))
    throw std::invalid_argument("SweepGrid: grids must be strictly increasing");
}

namespace {

struct CwSweepContext {
  const SweepRequest& req;
  const SampleCoeffs& coeffs;
  const CarrierSpec& carrier;
  const WavelengthSpec& wl;
  const DamageBudget& budget;
  DamageBudget::Target target;

  double snr_at(DetectionMode mode, double u, double t2) const {
    const CavityConfig cav = CavityConfig::study(t2, req.r1);
    const Complex z = roundtrip_phase(u, carrier, wl);
    const CwPoint p = cw_point(cav, coeffs, z, budget.reference_input_photons);
    const double d = target == DamageBudget::Target::absorbed_photons ? p.damage_abs
                                                                      : p.damage_weighted;
    if (!(d > 0.0)) return 0.0;
    const double s = budget.target_value / d;
    const int mi = mode_index(mode);
    return snr(s * p.n1[mi], s * p.n2[mi]);
  }
};

SnrPoint make_point(Scheme scheme, DetectionMode mode, double c1, double c2, double n1_ref,
                    double n2_ref, double damage_ref, double scale) {
  SnrPoint pt;
  pt.scheme = scheme;
  pt.mode = mode;
  pt.coord1 = c1;
  pt.coord2 = c2;
  pt.input_scale = scale;
  pt.n1 = scale * n1_ref;
  pt.n2 = scale * n2_ref;
  pt.snr = snr(pt.n1, pt.n2);
  pt.damage = scale * damage_ref;
  return pt;
}

}  // namespace

double cw_optimal_detuning(const SweepRequest& request, const MaterialLayer& material,
                           const CarrierSpec& carrier, const WavelengthSpec& wl,
                           const DamageBudget& budget, DetectionMode mode) {
  const SampleCoeffs coeffs = sample_coefficients(material, carrier, wl);
  const CwSweepContext ctx{request, coeffs, carrier, wl, budget, budget.target};

  const auto& grid = request.grid;
  double best = -1.0;
  double best_u = 0.0;
  double best_t2 = grid.t2.empty() ? 0.02 : grid.t2.front();
  for (double t2 : grid.t2) {
    for (double u : grid.detuning) {
      const double v = ctx.snr_at(mode, u, t2);
      if (v > best) {
        best = v;
        best_u = u;
        best_t2 = t2;
      }
    }
  }
  const double step = grid.detuning.size() > 1 ? grid.detuning[1] - grid.detuning[0] : 1e-2;
  const double t2 = best_t2;
  const double u = golden_section_max([&](double u) { return ctx.snr_at(mode, u, t2); },
                                      best_u - step, best_u + step, kDetuningRefineTol);
  return u - std::floor(u);
}

std::vector<SnrPoint> sweep(const SweepRequest& request, const MaterialLayer& material,
                            const CarrierSpec& carrier, const WavelengthSpec& wl,
                            const DamageBudget& budget) {
  request.grid.validate();
  const SampleCoeffs coeffs = sample_coefficients(material, carrier, wl);
  const Susceptibility chi = susceptibility(material, wl);
  if (chi.chi == Complex{0.0})
    throw std::domain_error("sweep: empty sample, damage budget undefined");

  const double q = budget.reference_input_photons;
  const IlluminationSpec pulse_illum{q, IlluminationSpec::PulseClass::short_pulse};
  std::vector<SnrPoint> rows;

  switch (request.scheme) {
    case Scheme::cw: {
      const CwSweepContext ctx{request, coeffs, carrier, wl, budget, budget.target};
      std::vector<double> t2_axis = request.grid.t2;
      if (!std::isnan(request.cw_fixed_t2)) t2_axis = {request.cw_fixed_t2};

      if (request.cw_optimal_cut) {
        for (DetectionMode mode : request.modes) {
          const double u_star =
              cw_optimal_detuning(request, material, carrier, wl, budget, mode);
          for (double t2 : t2_axis) {
            const CavityConfig cav = CavityConfig::study(t2, request.r1);
            const Complex z = roundtrip_phase(u_star, carrier, wl);
            const CwPoint p = cw_point(cav, coeffs, z, q);
            const double d = budget.target == DamageBudget::Target::absorbed_photons
                                 ? p.damage_abs
                                 : p.damage_weighted;
            const double s = budget.target_value / d;
            const int mi = mode_index(mode);
            rows.push_back(
                make_point(Scheme::cw, mode, u_star, t2, p.n1[mi], p.n2[mi], d, s));
          }
        }
      } else {
        for (double t2 : t2_axis) {
          const CavityConfig cav = CavityConfig::study(t2, request.r1);
          for (double u : request.grid.detuning) {
            const Complex z = roundtrip_phase(u, carrier, wl);
            const CwPoint p = cw_point(cav, coeffs, z, q);
            const double d = budget.target == DamageBudget::Target::absorbed_photons
                                 ? p.damage_abs
                                 : p.damage_weighted;
            const double s = budget.target_value / d;
            for (DetectionMode mode : request.modes) {
              const int mi = mode_index(mode);
              rows.push_back(make_point(Scheme::cw, mode, u, t2, p.n1[mi], p.n2[mi], d, s));
            }
          }
        }
      }
      break;
    }
    case Scheme::ring_down: {
      for (double t2 : request.grid.t2) {
        const CavityConfig cav = CavityConfig::study(t2, request.r1);
        const DamageReport rep = pulsed_absorption(-1, cav, coeffs, pulse_illum);
        const double d = budget_value(rep, budget.target);
        const double s = budget.target_value / d;
        for (DetectionMode mode : request.modes) {
          const DetectionRecord rec = rd_accumulate(mode, cav, coeffs, pulse_illum);
          rows.push_back(make_point(Scheme::ring_down, mode, t2,
                                    std::numeric_limits<double>::quiet_NaN(), rec.n_sample,
                                    rec.n_reference, d, s));
        }
      }
      break;
    }
    case Scheme::multi_pass: {
      const CavityConfig cav = CavityConfig::multipass(request.r1);
      for (int m : request.grid.m) {
        if (m < 1 || m % 2 == 0)
          throw std::invalid_argument("sweep: multi-pass interactions must be odd");
        const int ell = (m - 1) / 2;
        const DamageReport rep = pulsed_absorption(m, cav, coeffs, pulse_illum);
        const double d = budget_value(rep, budget.target);
        const double s = budget.target_value / d;
        for (DetectionMode mode : request.modes) {
          const DetectionRecord rec =
              mp_signal(mode, ell, cav, coeffs, pulse_illum, request.outcoupler_efficiency);
          rows.push_back(make_point(Scheme::multi_pass, mode, static_cast<double>(m),
                                    std::numeric_limits<double>::quiet_NaN(), rec.n_sample,
                                    rec.n_reference, d, s));
        }
      }
      break;
    }
    case Scheme::single_pass: {
      for (DetectionMode mode : request.modes)
        rows.push_back(single_pass_reference(material, carrier, wl, mode, budget));
      break;
    }
  }
  return rows;
}

SnrPoint single_pass_reference(const MaterialLayer& material, const CarrierSpec& carrier,
                               const WavelengthSpec& wl, DetectionMode mode,
                               const DamageBudget& budget) {
  const SampleCoeffs s = sample_coefficients(material, carrier, wl);
  const double q = budget.reference_input_photons;

  const Complex plate_amp = s.t_carrier;
  const Complex amp = s.t - plate_factor(mode) * plate_amp;
  const double n1 = q * std::norm(amp);
  const double n2 = mode == DetectionMode::dark_field ? 0.0 : q * std::norm(plate_amp);

  const IlluminationSpec illum{q, IlluminationSpec::PulseClass::short_pulse};
  const DamageReport rep = pulsed_absorption(1, CavityConfig::study(0.02), s, illum);
  const double d = budget_value(rep, budget.target);
  const double scale = budget.target_value / d;

  return make_point(Scheme::single_pass, mode, std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(), n1, n2, d, scale);
}

WavelengthSpec calibrate_wavelength(const MaterialLayer& material, double target_absorbed,
                                    double input_photons) {
  if (!(target_absorbed > 0.0))
    throw std::invalid_argument("calibrate_wavelength: target must be positive");
  if (material.lossless())
    throw std::invalid_argument("calibrate_wavelength: material must absorb (Im n > 0)");

  const auto absorbed = [&](double lambda) {
    const SampleCoeffs s =
        sample_coefficients(material, CarrierSpec::none(), WavelengthSpec{lambda});
    return input_photons * (1.0 - std::norm(s.t) - std::norm(s.r_left)) - target_absorbed;
  };

  double lo = 300e-9;
  double hi = 1200e-9;
  double f_lo = absorbed(lo);
  double f_hi = absorbed(hi);
  if (f_lo * f_hi > 0.0)
    throw std::domain_error("calibrate_wavelength: no sign change on [300 nm, 1200 nm]");

  // Absorption must be monotone across the bracket for the root to be the
  // calibration point.
  double prev = f_lo;
  for (int i = 1; i <= 12; ++i) {
    const double f = absorbed(lo + i * (hi - lo) / 12.0);
    if ((f_lo > f_hi && f > prev) || (f_lo < f_hi && f < prev))
      throw std::domain_error("calibrate_wavelength: absorption not monotone on bracket");
    prev = f;
  }

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = absorbed(mid);
    if (std::abs(f_mid) < 1e-9 || hi - lo < 1e-18) return WavelengthSpec{mid};
    if (f_lo * f_mid <= 0.0) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return WavelengthSpec{0.5 * (lo + hi)};
}

PhaseEstimate estimate_phase(double n, double n_ref, int m) {
  if (!(n_ref > 0.0)) throw std::invalid_argument("estimate_phase: N_ref must be positive");
  if (m < 1) throw std::invalid_argument("estimate_phase: m must be >= 1");
  PhaseEstimate e;
  e.chi_est = (n - n_ref) / (2.0 * m * n_ref);
  e.delta_chi = std::sqrt(n + n_ref) / (2.0 * m * n_ref);
  return e;
}

}  // namespace cavmic
