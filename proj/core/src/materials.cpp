#include "cavmic/materials.hpp"

#include <cmath>

namespace cavmic {

namespace {

constexpr double kNonReflectiveTol = 1e-9;

double optical_half_waves(const CarrierSpec& c, const WavelengthSpec& wl) {
  return c.index * wl.wavenumber() * c.thickness_m / std::numbers::pi;
}

}  // namespace

bool CarrierSpec::non_reflective(const WavelengthSpec& wl) const {
  const double x = optical_half_waves(*this, wl);
  const double j = std::round(x);
  return std::abs(x - j) <= kNonReflectiveTol * std::max(1.0, x);
}

int CarrierSpec::nearest_order(const WavelengthSpec& wl) const {
  return static_cast<int>(std::round(optical_half_waves(*this, wl)));
}

Susceptibility susceptibility(const MaterialLayer& material, const WavelengthSpec& wl) {
  const Complex n = material.index;
  return Susceptibility{0.5 * (n * n - 1.0) * wl.wavenumber() * material.thickness()};
}

CarrierCoeffs carrier_coefficients(const CarrierSpec& carrier, const WavelengthSpec& wl) {
  if (carrier.thickness_m == 0.0) return {Complex{1.0}, Complex{0.0}};

  const double k = wl.wavenumber();
  const double ng = carrier.index;
  const double dg = carrier.thickness_m;

  const double x = optical_half_waves(carrier, wl);
  const double j = std::round(x);
  if (std::abs(x - j) <= kNonReflectiveTol * std::max(1.0, x)) {
    // Exact half-wave branch keeps r identically zero instead of O(eps).
    const double sign = (static_cast<long long>(j) % 2 == 0) ? 1.0 : -1.0;
    return {sign * std::exp(-kImag * k * dg), Complex{0.0}};
  }

  const Complex phase = std::exp(2.0 * kImag * ng * k * dg);
  const Complex den = (ng + 1.0) * (ng + 1.0) - (ng - 1.0) * (ng - 1.0) * phase;
  const Complex t = 4.0 * ng * std::exp(kImag * (ng - 1.0) * k * dg) / den;
  const Complex r = (ng * ng - 1.0) * (phase - 1.0) / den;
  return {t, r};
}

SampleCoeffs sample_coefficients(const MaterialLayer& material, const CarrierSpec& carrier,
                                 const WavelengthSpec& wl) {
  if (!carrier.non_reflective(wl))
    throw std::invalid_argument(
        "sample_coefficients: carrier is reflective at this wavelength "
        "(n_g*k*d_g must be a multiple of pi)");

  const double k = wl.wavenumber();
  const double d = material.thickness();
  const double dg = carrier.thickness_m;
  const Complex n = material.index;
  const int j = carrier.nearest_order(wl);
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;

  const Complex e2inkd = std::exp(2.0 * kImag * n * k * d);
  const Complex den = (n + 1.0) * (n + 1.0) - (n - 1.0) * (n - 1.0) * e2inkd;

  SampleCoeffs s;
  s.t = sign * 4.0 * n * std::exp(kImag * ((n - 1.0) * k * d - k * dg)) / den;
  s.r_left = (n * n - 1.0) * std::exp(-2.0 * kImag * k * d) * (e2inkd - 1.0) / den;
  s.r_right = std::exp(2.0 * kImag * k * (d - dg)) * s.r_left;
  const CarrierCoeffs g = carrier_coefficients(carrier, wl);
  s.t_carrier = g.t;
  s.r_carrier = g.r;
  s.lossless = material.lossless();
  return s;
}

SampleCoeffs ws_sample_coefficients(const Susceptibility& chi, const CarrierSpec& carrier,
                                    const WavelengthSpec& wl) {
  const double k = wl.wavenumber();
  const double dg = carrier.thickness_m;
  const int j = carrier.nearest_order(wl);
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;

  SampleCoeffs s;
  s.t = sign * std::exp(kImag * (chi.chi - k * dg));
  s.r_left = kImag * chi.chi;
  s.r_right = kImag * std::exp(-2.0 * kImag * k * dg) * chi.chi;
  const CarrierCoeffs g = carrier_coefficients(carrier, wl);
  s.t_carrier = g.t;
  s.r_carrier = g.r;
  s.lossless = chi.imag_part() == 0.0;
  return s;
}

SampleCoeffs empty_plate_coefficients(const CarrierSpec& carrier, const WavelengthSpec& wl) {
  const CarrierCoeffs g = carrier_coefficients(carrier, wl);
  SampleCoeffs s;
  s.t = g.t;
  s.r_left = g.r;
  s.r_right = g.r;
  s.t_carrier = g.t;
  s.r_carrier = g.r;
  s.lossless = true;
  return s;
}

}  // namespace cavmic
