#include "cavmic/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace cavmic {

namespace {

constexpr double kTrainCutoff = 1e-12;
constexpr int kTrainHardCap = 5'000'000;

// Pulse weights satisfy the characteristic recurrence
// g_{m+1} = tr(M) g_m - det(M) g_{m-1}, g_0 = 0, g_1 = 1.
struct WeightRecurrence {
  Complex tr, det;
  Complex prev{0.0}, cur{1.0};

  explicit WeightRecurrence(const TransferMatrix& m) : tr(m.trace()), det(m.determinant()) {}
  void advance() {
    const Complex next = tr * cur - det * prev;
    prev = cur;
    cur = next;
  }
};

struct TrainAccumulator {
  Complex c;
  Complex t_sample, t_plate;
  WeightRecurrence g, big_g;
  double t2_q;

  TrainAccumulator(DetectionMode mode, const CavityConfig& cav, const SampleCoeffs& s,
                   const IlluminationSpec& illum)
      : c(plate_factor(mode)),
        t_sample(s.t),
        t_plate(s.t_carrier),
        g(TransferMatrix::half_roundtrip(cav, s)),
        big_g(TransferMatrix::plate_half_roundtrip(cav, s)),
        t2_q(cav.transmission_out * illum.input_photons) {}

  PulseCounts counts(DetectionMode mode) const {
    const Complex plate_amp = t_plate * big_g.cur;
    const Complex amp = t_sample * g.cur - c * plate_amp;
    PulseCounts pc;
    pc.sample = t2_q * std::norm(amp);
    pc.reference = mode == DetectionMode::dark_field ? 0.0 : t2_q * std::norm(plate_amp);
    return pc;
  }

  // Raw pulse energies (per input photon) used for the truncation rule.
  double sample_energy() const { return std::norm(t_sample * g.cur); }
  double plate_energy() const { return std::norm(t_plate * big_g.cur); }

  void advance() {
    g.advance();
    big_g.advance();
  }
};

}  // namespace

Complex plate_factor(DetectionMode mode) {
  switch (mode) {
    case DetectionMode::bright_field: return {0.0, 0.0};
    case DetectionMode::dark_field: return {1.0, 0.0};
    case DetectionMode::zernike_plus: return {1.0, -1.0};
    case DetectionMode::zernike_minus: return {1.0, 1.0};
  }
  throw std::invalid_argument("plate_factor: unknown mode");
}

PulseCounts pulsed_signal(DetectionMode mode, int m, const CavityConfig& cav,
                          const SampleCoeffs& s, const IlluminationSpec& illum) {
  if (m < 1) throw std::invalid_argument("pulsed_signal: m must be >= 1");
  const Complex gm = pulse_weight(m, eigenpair(TransferMatrix::half_roundtrip(cav, s)));
  const Complex big_gm =
      pulse_weight(m, eigenpair(TransferMatrix::plate_half_roundtrip(cav, s)));
  const Complex plate_amp = s.t_carrier * big_gm;
  const Complex amp = s.t * gm - plate_factor(mode) * plate_amp;
  const double t2_q = cav.transmission_out * illum.input_photons;

  PulseCounts pc;
  pc.sample = t2_q * std::norm(amp);
  pc.reference = mode == DetectionMode::dark_field ? 0.0 : t2_q * std::norm(plate_amp);
  return pc;
}

DetectionRecord cw_signal(DetectionMode mode, const CavityConfig& cav, const SampleCoeffs& s,
                          Complex phase, const IlluminationSpec& illum) {
  SampleCoeffs plate;
  plate.t = s.t_carrier;
  plate.r_left = s.r_carrier;
  plate.r_right = s.r_carrier;
  plate.t_carrier = s.t_carrier;
  plate.r_carrier = s.r_carrier;
  plate.lossless = true;

  const Complex a_s = cw_output(cav, s, phase);
  const Complex a_g = cw_output(cav, plate, phase);
  // cw_output carries t1; detected photons are per incoupled photon, so T1
  // cancels against the input normalisation.
  const double q = illum.input_photons / cav.transmission_in;

  DetectionRecord rec;
  rec.mode = mode;
  rec.scheme = Scheme::cw;
  rec.n_sample = q * std::norm(a_s - plate_factor(mode) * a_g);
  rec.n_reference = mode == DetectionMode::dark_field ? 0.0 : q * std::norm(a_g);
  return rec;
}

DetectionRecord rd_accumulate(DetectionMode mode, const CavityConfig& cav,
                              const SampleCoeffs& s, const IlluminationSpec& illum) {
  TrainAccumulator acc(mode, cav, s, illum);
  DetectionRecord rec;
  rec.mode = mode;
  rec.scheme = Scheme::ring_down;
  // Pulses alternate parity (even-m energies can be identically zero), so
  // the train only stops after two consecutive below-threshold pulses.
  double prev_energy = 1.0;
  for (int m = 1; m <= kTrainHardCap; ++m) {
    const PulseCounts pc = acc.counts(mode);
    rec.n_sample += pc.sample;
    rec.n_reference += pc.reference;
    const double energy = acc.sample_energy() + acc.plate_energy();
    if (m >= 4 && energy < kTrainCutoff && prev_energy < kTrainCutoff) break;
    prev_energy = energy;
    acc.advance();
  }
  return rec;
}

double rd_time_tagged_signal(DetectionMode mode, const CavityConfig& cav,
                             const SampleCoeffs& s, const IlluminationSpec& illum) {
  TrainAccumulator acc(mode, cav, s, illum);
  double signal = 0.0;
  double sign = 1.0;
  double prev_energy = 1.0;
  for (int m = 1; m <= kTrainHardCap; ++m) {
    const PulseCounts pc = acc.counts(mode);
    signal += sign * (pc.sample - pc.reference);
    sign = -sign;
    const double energy = acc.sample_energy() + acc.plate_energy();
    if (m >= 4 && energy < kTrainCutoff && prev_energy < kTrainCutoff) break;
    prev_energy = energy;
    acc.advance();
  }
  return signal;
}

DetectionRecord mp_signal(DetectionMode mode, int ell, const CavityConfig& cav,
                          const SampleCoeffs& s, const IlluminationSpec& illum,
                          double outcoupler_efficiency) {
  if (ell < 0) throw std::invalid_argument("mp_signal: ell must be >= 0");
  if (std::abs(cav.reflectivity_in - cav.reflectivity_out) > 1e-12)
    throw std::invalid_argument("mp_signal: requires R1 == R2");
  if (!(outcoupler_efficiency > 0.0 && outcoupler_efficiency <= 1.0))
    throw std::invalid_argument("mp_signal: outcoupler efficiency out of (0,1]");

  const int m = 2 * ell + 1;
  const Complex gm = pulse_weight(m, eigenpair(TransferMatrix::half_roundtrip(cav, s)));
  const Complex big_gm =
      pulse_weight(m, eigenpair(TransferMatrix::plate_half_roundtrip(cav, s)));
  const Complex plate_amp = s.t_carrier * big_gm;
  const Complex amp = s.t * gm - plate_factor(mode) * plate_amp;
  const double eff_q = outcoupler_efficiency * illum.input_photons;

  DetectionRecord rec;
  rec.mode = mode;
  rec.scheme = Scheme::multi_pass;
  rec.interactions = m;
  rec.n_sample = eff_q * std::norm(amp);
  rec.n_reference = mode == DetectionMode::dark_field ? 0.0 : eff_q * std::norm(plate_amp);
  return rec;
}

PulseTrain pulse_train(DetectionMode mode, const CavityConfig& cav, const SampleCoeffs& s,
                       const IlluminationSpec& illum, int m_max) {
  TrainAccumulator acc(mode, cav, s, illum);
  PulseTrain train;
  double prev_energy = 1.0;
  for (int m = 1; m <= (m_max > 0 ? m_max : kTrainHardCap); ++m) {
    const PulseCounts pc = acc.counts(mode);
    train.sample.push_back(pc.sample);
    train.reference.push_back(pc.reference);
    const double energy = acc.sample_energy() + acc.plate_energy();
    if (m_max < 0 && m >= 4 && energy < kTrainCutoff && prev_energy < kTrainCutoff) break;
    prev_energy = energy;
    acc.advance();
  }
  return train;
}

}  // namespace cavmic
