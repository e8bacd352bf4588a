#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>

// Thin-film optical response of a sample layer sitting on an optional
// carrier plate. All coefficients are scalar field amplitudes referenced
// at the layer/carrier interface; the carrier occupies the far side.
// Conventions: fields evolve as exp(-i w t), a lossy index has Im(n) >= 0.

namespace cavmic {

using Complex = std::complex<double>;
inline constexpr Complex kImag{0.0, 1.0};

/// Probe wavelength with derived wavenumber k = 2*pi/lambda.
struct WavelengthSpec {
  double lambda_m{};

  explicit WavelengthSpec(double lambda) : lambda_m(lambda) {
    if (!(lambda > 0.0))
      throw std::invalid_argument("WavelengthSpec: lambda must be positive");
  }
  double wavenumber() const { return 2.0 * std::numbers::pi / lambda_m; }
};

/// Homogeneous slab of complex index; `layers` monolayers are modelled as
/// one slab of thickness layers * monolayer_m.
struct MaterialLayer {
  Complex index{1.0, 0.0};
  double monolayer_m{};
  int layers{1};

  MaterialLayer(Complex n, double monolayer_thickness, int layer_count = 1)
      : index(n), monolayer_m(monolayer_thickness), layers(layer_count) {
    if (index.imag() < 0.0)
      throw std::invalid_argument("MaterialLayer: Im(n) must be >= 0");
    if (!(index.real() > 0.0))
      throw std::invalid_argument("MaterialLayer: Re(n) must be positive");
    if (!(monolayer_m > 0.0))
      throw std::invalid_argument("MaterialLayer: thickness must be positive");
    if (layers < 1)
      throw std::invalid_argument("MaterialLayer: layers must be >= 1");
  }
  double thickness() const { return layers * monolayer_m; }
  bool lossless() const { return index.imag() == 0.0; }
};

/// Transparent carrier plate. half_wave_order j = 0 encodes no carrier
/// (thickness 0); j >= 1 pins n_g*k*d_g = j*pi, which makes the plate
/// non-reflective at the probe wavelength.
struct CarrierSpec {
  double index{1.0};
  double thickness_m{0.0};
  int half_wave_order{0};

  static CarrierSpec none() { return CarrierSpec{}; }

  static CarrierSpec half_wave(double n_g, int order, const WavelengthSpec& wl) {
    if (!(n_g >= 1.0))
      throw std::invalid_argument("CarrierSpec: n_g must be real >= 1");
    if (order < 0)
      throw std::invalid_argument("CarrierSpec: half-wave order must be >= 0");
    CarrierSpec c;
    c.index = n_g;
    c.half_wave_order = order;
    c.thickness_m = order * std::numbers::pi / (n_g * wl.wavenumber());
    return c;
  }

  static CarrierSpec explicit_thickness(double n_g, double d_g) {
    if (!(n_g >= 1.0))
      throw std::invalid_argument("CarrierSpec: n_g must be real >= 1");
    if (d_g < 0.0)
      throw std::invalid_argument("CarrierSpec: thickness must be >= 0");
    CarrierSpec c;
    c.index = n_g;
    c.thickness_m = d_g;
    c.half_wave_order = 0;  // re-derived against a wavelength when needed
    return c;
  }

  /// True when n_g*k*d_g is a multiple of pi within 1e-9 relative.
  bool non_reflective(const WavelengthSpec& wl) const;
  /// Nearest integer j with n_g*k*d_g ~ j*pi.
  int nearest_order(const WavelengthSpec& wl) const;
};

/// Per-pixel complex response chi = (n^2 - 1)/2 * k * d; the real part is
/// the phase shift per pass, the imaginary part the amplitude extinction.
struct Susceptibility {
  Complex chi{};

  double real_part() const { return chi.real(); }
  double imag_part() const { return chi.imag(); }
};

/// Amplitude coefficients of the full sample (layer + carrier) and of the
/// bare carrier. r_left is seen from the layer side, r_right from the
/// carrier side; r_right = exp(2ik(d - d_g)) * r_left.
struct SampleCoeffs {
  Complex t{1.0};
  Complex r_left{0.0};
  Complex r_right{0.0};
  Complex t_carrier{1.0};
  Complex r_carrier{0.0};
  bool lossless{true};
};

struct CarrierCoeffs {
  Complex t{1.0};
  Complex r{0.0};
};

Susceptibility susceptibility(const MaterialLayer& material, const WavelengthSpec& wl);

/// Two-interface slab coefficients of the bare carrier; snaps to the exact
/// non-reflective branch t = (-1)^j exp(-i k d_g), r = 0 at half-wave
/// thickness.
CarrierCoeffs carrier_coefficients(const CarrierSpec& carrier, const WavelengthSpec& wl);

/// Full (non-linearised) coefficients of layer-on-carrier. Throws if the
/// carrier is reflective at this wavelength; that regime is unsupported.
SampleCoeffs sample_coefficients(const MaterialLayer& material, const CarrierSpec& carrier,
                                 const WavelengthSpec& wl);

/// Weak-sample approximation: t = exp(i j pi - i k d_g + i chi),
/// r_left = i chi, r_right = i exp(-2 i k d_g) chi.
SampleCoeffs ws_sample_coefficients(const Susceptibility& chi, const CarrierSpec& carrier,
                                    const WavelengthSpec& wl);

/// Coefficients of the bare plate (no layer), used for reference pixels.
SampleCoeffs empty_plate_coefficients(const CarrierSpec& carrier, const WavelengthSpec& wl);

}  // namespace cavmic
