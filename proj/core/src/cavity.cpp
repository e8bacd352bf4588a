#include "cavmic/cavity.hpp"

#include <cmath>
#include <stdexcept>

namespace cavmic {

namespace {

constexpr double kDegenerateTol = 1e-12;
constexpr double kTrainCutoff = 1e-12;  // pulse energy floor relative to input
constexpr int kTrainHardCap = 5'000'000;

void require_passive(const Eigenpair& eig) {
  if (std::abs(eig.plus) >= 1.0 || std::abs(eig.minus) >= 1.0)
    throw std::domain_error("cavity: round-trip eigenvalue magnitude >= 1 (gain)");
}

}  // namespace

CavityConfig CavityConfig::study(double t2, double r1) {
  CavityConfig c;
  c.reflectivity_in = r1;
  c.transmission_in = 1.0 - r1;
  c.transmission_out = t2;
  c.reflectivity_out = r1 * (1.0 - t2);
  c.lossless_mirrors = false;
  c.validate();
  return c;
}

CavityConfig CavityConfig::lossless(double r1, double r2) {
  CavityConfig c;
  c.reflectivity_in = r1;
  c.transmission_in = 1.0 - r1;
  c.reflectivity_out = r2;
  c.transmission_out = 1.0 - r2;
  c.lossless_mirrors = true;
  c.validate();
  return c;
}

CavityConfig CavityConfig::lossless_symmetric(double r) { return lossless(r, r); }

CavityConfig CavityConfig::multipass(double r) {
  CavityConfig c;
  c.reflectivity_in = r;
  c.transmission_in = 1.0 - r;
  c.reflectivity_out = r;
  c.transmission_out = 0.0;
  c.lossless_mirrors = false;
  c.validate();
  return c;
}

void CavityConfig::validate() const {
  if (!(reflectivity_in > 0.0 && reflectivity_in < 1.0))
    throw std::invalid_argument("CavityConfig: R1 out of (0,1)");
  if (!(reflectivity_out >= 0.0 && reflectivity_out < 1.0))
    throw std::invalid_argument("CavityConfig: R2 out of [0,1)");
  if (transmission_in < 0.0 || transmission_out < 0.0)
    throw std::invalid_argument("CavityConfig: negative transmission");
  if (reflectivity_in + transmission_in > 1.0 + 1e-12)
    throw std::invalid_argument("CavityConfig: R1 + T1 > 1");
  if (reflectivity_out + transmission_out > 1.0 + 1e-12)
    throw std::invalid_argument("CavityConfig: R2 + T2 > 1");
}

TransferMatrix TransferMatrix::sample_map(const SampleCoeffs& s) {
  return {s.r_left, s.t, s.t, s.r_right};
}

TransferMatrix TransferMatrix::plate_map(const SampleCoeffs& s) {
  return {s.r_carrier, s.t_carrier, s.t_carrier, s.r_carrier};
}

TransferMatrix TransferMatrix::scaled_rows(Complex r1, Complex r2, const TransferMatrix& m) {
  return {r1 * m.m00, r1 * m.m01, r2 * m.m10, r2 * m.m11};
}

TransferMatrix TransferMatrix::half_roundtrip(const CavityConfig& cav, const SampleCoeffs& s) {
  return scaled_rows(cav.r1(), cav.r2(), sample_map(s));
}

TransferMatrix TransferMatrix::plate_half_roundtrip(const CavityConfig& cav,
                                                    const SampleCoeffs& s) {
  return scaled_rows(cav.r1(), cav.r2(), plate_map(s));
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix& o) const {
  return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
          m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
}

FieldPair TransferMatrix::apply(const FieldPair& v) const {
  return {m00 * v.left + m01 * v.right, m10 * v.left + m11 * v.right};
}

Eigenpair eigenpair(const TransferMatrix& m) {
  const Complex tr = m.trace();
  const Complex det = m.determinant();
  Complex s = std::sqrt(tr * tr - 4.0 * det);
  if ((std::conj(tr) * s).real() < 0.0) s = -s;
  const Complex plus = 0.5 * (tr + s);
  const Complex minus = (plus != Complex{0.0}) ? det / plus : 0.5 * (tr - s);

  Eigenpair e{plus, minus, false};
  const double scale = std::max(std::abs(plus), std::abs(minus));
  e.degenerate = scale == 0.0 || std::abs(plus - minus) < kDegenerateTol * scale;
  return e;
}

Complex pulse_weight(int m, const Eigenpair& eig) {
  if (m < 1) throw std::invalid_argument("pulse_weight: m must be >= 1");
  if (eig.degenerate) {
    const Complex l = 0.5 * (eig.plus + eig.minus);
    return static_cast<double>(m) * std::pow(l, m - 1);
  }
  return (std::pow(eig.plus, m) - std::pow(eig.minus, m)) / (eig.plus - eig.minus);
}

double pulsed_output_energy(int m, const CavityConfig& cav, const SampleCoeffs& s,
                            const IlluminationSpec& illum) {
  if (m < 1) throw std::invalid_argument("pulsed_output_energy: m must be >= 1");
  const Eigenpair eig = eigenpair(TransferMatrix::half_roundtrip(cav, s));
  const Complex amp = s.t * pulse_weight(m, eig);
  return illum.input_photons * cav.transmission_out * std::norm(amp);
}

Complex roundtrip_phase(double detuning_frac) {
  return std::exp(kImag * (2.0 * std::numbers::pi * detuning_frac));
}

Complex roundtrip_phase(double detuning_frac, const CarrierSpec& carrier,
                        const WavelengthSpec& wl) {
  return std::exp(
      kImag * (2.0 * std::numbers::pi * detuning_frac + wl.wavenumber() * carrier.thickness_m));
}

Complex cw_output(const CavityConfig& cav, const SampleCoeffs& s, Complex phase) {
  const Eigenpair eig = eigenpair(TransferMatrix::half_roundtrip(cav, s));
  require_passive(eig);
  const Complex den = (1.0 - phase * eig.plus) * (1.0 - phase * eig.minus);
  return cav.t1() * cav.t2() * s.t * phase / den;
}

SampleFields cw_sample_fields(const CavityConfig& cav, const SampleCoeffs& s, Complex phase) {
  const TransferMatrix m = TransferMatrix::half_roundtrip(cav, s);
  require_passive(eigenpair(m));

  const Complex det = (1.0 - phase * m.m00) * (1.0 - phase * m.m11)
                      - phase * phase * m.m01 * m.m10;
  const Complex scale = -cav.t1() * std::sqrt(phase);
  SampleFields f;
  f.incoming.left = scale * (1.0 - phase * m.m11) / det;
  f.incoming.right = scale * phase * m.m10 / det;
  f.outgoing = TransferMatrix::sample_map(s).apply(f.incoming);
  return f;
}

DamageReport pulsed_absorption(int m_max, const CavityConfig& cav, const SampleCoeffs& s,
                               const IlluminationSpec& illum) {
  if (m_max == 0 || m_max < -1)
    throw std::invalid_argument("pulsed_absorption: m_max must be >= 1 or -1 for the full train");

  const TransferMatrix ms = TransferMatrix::sample_map(s);
  const Complex r1 = cav.r1();
  const Complex r2 = cav.r2();
  // Standing-wave weight of the two incident amplitudes at the layer; the
  // non-reflective carrier transmission is the unimodular phase between them.
  const Complex cw_weight = s.t_carrier;

  FieldPair v{1.0, 0.0};
  double absorbed = 0.0;
  double fluence = 0.0;
  double weighted = 0.0;
  int n = 0;
  double energy = 1.0;
  while (true) {
    fluence += v.norm_sq();
    weighted += std::norm(v.left + cw_weight * v.right);
    const FieldPair out = ms.apply(v);
    absorbed += std::max(0.0, v.norm_sq() - out.norm_sq());
    ++n;
    if (m_max > 0 && n >= m_max) {
      energy = 0.0;
      break;
    }
    v = FieldPair{r1 * out.left, r2 * out.right};
    energy = v.norm_sq();
    if (m_max < 0 && (energy < kTrainCutoff || n >= kTrainHardCap)) break;
  }

  DamageReport rep;
  const double q = illum.input_photons;
  rep.absorbed_photons = s.lossless ? 0.0 : absorbed * q;
  rep.fluence_interactions = fluence * q;
  rep.weighted_interactions = weighted * q;
  rep.mode = s.lossless ? DamageReport::Mode::fluence_limit : DamageReport::Mode::absorption;
  rep.pulses_summed = n;
  if (energy > 0.0) {
    const Eigenpair eig = eigenpair(TransferMatrix::half_roundtrip(cav, s));
    const double lam = std::max(std::abs(eig.plus), std::abs(eig.minus));
    const double rho = std::min(lam * lam, 1.0 - 1e-12);
    rep.truncation_error = q * energy / (1.0 - rho);
  }
  return rep;
}

double cw_absorption(const CavityConfig& cav, const SampleCoeffs& s, Complex phase) {
  if (!(cav.transmission_out > 0.0))
    throw std::invalid_argument("cw_absorption: T2 must be positive");
  require_passive(eigenpair(TransferMatrix::half_roundtrip(cav, s)));

  const Complex r2 = cav.r2();
  const Complex u = (1.0 - phase * r2 * s.r_right) / s.t;
  const Complex w = (s.r_left + phase * r2 * (s.t * s.t - s.r_left * s.r_right)) / s.t;
  return (cav.reflectivity_out - 1.0 + std::norm(u) - std::norm(w)) / cav.transmission_out;
}

WsPredictions ws_predictions(const CavityConfig& cav, const Susceptibility& chi,
                             const CarrierSpec& carrier, const WsRegime& regime) {
  (void)carrier;  // the closed forms below hold for non-reflective plates
  const double r1r2 = cav.reflectivity_in * cav.reflectivity_out;
  const double rr = std::sqrt(r1r2);
  const double t2 = cav.transmission_out;
  const double chi_r = chi.real_part();
  const double chi_i = chi.imag_part();
  const double chi_sq = std::norm(chi.chi);

  WsPredictions p;
  p.mean_roundtrips = rr / (1.0 - rr);

  switch (regime.scheme) {
    case Scheme::cw: {
      const double lbar = p.mean_roundtrips;
      p.q_ref = t2 * lbar * lbar;
      p.q_bf = -8.0 * lbar * chi_i * p.q_ref;
      p.q_znk_plus = 8.0 * lbar * chi_r * p.q_ref;
      p.q_znk_minus = -p.q_znk_plus;
      p.q_df = 16.0 * lbar * lbar * chi_sq * p.q_ref;
      p.q_abs = 8.0 * chi_i * p.q_ref / t2;
      break;
    }
    case Scheme::ring_down: {
      const double lbar = 2.0 / (1.0 - r1r2);
      p.q_ref = t2 / (1.0 - r1r2);
      p.q_bf = -2.0 * lbar * chi_i * p.q_ref;
      p.q_znk_plus = 2.0 * lbar * chi_r * p.q_ref;
      p.q_znk_minus = -p.q_znk_plus;
      p.q_df = 4.0 * lbar * lbar * chi_sq * p.q_ref;
      p.q_abs = 2.0 * chi_i * (1.0 + cav.reflectivity_out) / (1.0 - r1r2);
      break;
    }
    case Scheme::multi_pass: {
      const double r = rr;  // assumes R1 = R2
      const int m = 2 * regime.ell + 1;
      p.q_ref = regime.outcoupler_efficiency * std::pow(r, 2 * regime.ell);
      p.q_bf = -2.0 * chi_i * m * p.q_ref;
      p.q_znk_plus = 2.0 * chi_r * m * p.q_ref;
      p.q_znk_minus = -p.q_znk_plus;
      p.q_df = chi_sq * static_cast<double>(m) * m * p.q_ref;
      p.q_abs = 2.0 * chi_i * (1.0 - std::pow(r, m)) / (1.0 - r);
      break;
    }
    case Scheme::single_pass: {
      p.q_ref = 1.0;
      p.q_bf = -2.0 * chi_i;
      p.q_znk_plus = 2.0 * chi_r;
      p.q_znk_minus = -p.q_znk_plus;
      p.q_df = chi_sq;
      p.q_abs = 2.0 * chi_i;
      break;
    }
  }
  return p;
}

}  // namespace cavmic
