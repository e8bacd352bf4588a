#pragma once

#include <vector>

#include "cavmic/cavity.hpp"

// Detected photon numbers per pixel for the four imaging modes. The
// Fourier-plane plate acts on the undiffracted (empty-plate) component as
// the scalar factor c: the detected amplitude is t_s g_m - c t_g G_m with
// G_m the empty-plate pulse weight. Bright field has no plate (c = 0) and
// subtracts a reference pixel at the SNR stage; dark field blocks the
// background (c = 1); Zernike +/- shift it by -+pi/2 (c = 1 -+ i).

namespace cavmic {

enum class DetectionMode { bright_field, dark_field, zernike_plus, zernike_minus };

Complex plate_factor(DetectionMode mode);

/// Photon numbers of the m-th pulse on the sample pixel (N1) and the empty
/// reference pixel (N2).
struct PulseCounts {
  double sample{0.0};
  double reference{0.0};
};

/// Per-pulse photon numbers for m = 1..size().
struct PulseTrain {
  std::vector<double> sample;
  std::vector<double> reference;
};

struct DetectionRecord {
  double n_sample{0.0};
  double n_reference{0.0};
  DetectionMode mode{DetectionMode::bright_field};
  Scheme scheme{Scheme::cw};
  int interactions{0};  // sample passes for multi-pass records
};

PulseCounts pulsed_signal(DetectionMode mode, int m, const CavityConfig& cav,
                          const SampleCoeffs& s, const IlluminationSpec& illum);

/// Stationary signal from the outputs of the sample and the empty plate at
/// the same cavity detuning.
DetectionRecord cw_signal(DetectionMode mode, const CavityConfig& cav, const SampleCoeffs& s,
                          Complex phase, const IlluminationSpec& illum);

/// Time-integrated ring-down signal: per-pulse counts summed over the
/// whole outcoupled train.
DetectionRecord rd_accumulate(DetectionMode mode, const CavityConfig& cav,
                              const SampleCoeffs& s, const IlluminationSpec& illum);

/// Optional time-tagged post-processing of the ring-down train: the sign of
/// every second pulse difference is flipped before summing. Not part of the
/// headline sweeps.
double rd_time_tagged_signal(DetectionMode mode, const CavityConfig& cav,
                             const SampleCoeffs& s, const IlluminationSpec& illum);

/// Multi-pass signal after m = 2*ell + 1 sample interactions with active
/// outcoupling; the mirror transmission is replaced by the outcoupler
/// efficiency. Requires R1 = R2.
DetectionRecord mp_signal(DetectionMode mode, int ell, const CavityConfig& cav,
                          const SampleCoeffs& s, const IlluminationSpec& illum,
                          double outcoupler_efficiency = 1.0);

/// Full outcoupled train up to m_max pulses (m_max < 0 truncates once the
/// pulse energies drop below 1e-12 of the input).
PulseTrain pulse_train(DetectionMode mode, const CavityConfig& cav, const SampleCoeffs& s,
                       const IlluminationSpec& illum, int m_max = -1);

}  // namespace cavmic
