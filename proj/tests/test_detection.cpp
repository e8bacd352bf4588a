#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cavmic/detection.hpp"
#include "oracles.hpp"

using namespace cavmic;
using oracles::rel_err;

namespace {

const MaterialLayer kGraphene{{2.71, 1.41}, 3.35e-10, 1};
const MaterialLayer kBn{{1.8, 0.0}, 3.33e-10, 1};
const MaterialLayer kBn20{{1.8, 0.0}, 3.33e-10, 20};
const WavelengthSpec kWl{618.7e-9};
const IlluminationSpec kPulse{1000.0, IlluminationSpec::PulseClass::short_pulse};
const IlluminationSpec kCw{1000.0, IlluminationSpec::PulseClass::cw};

SampleCoeffs scaled_ws(double scale, const MaterialLayer& m = kGraphene) {
  Susceptibility chi = susceptibility(m, kWl);
  chi.chi *= scale;
  return ws_sample_coefficients(chi, CarrierSpec::none(), kWl);
}

}  // namespace

TEST_CASE("plate factors") {
  CHECK(plate_factor(DetectionMode::bright_field) == Complex{0.0, 0.0});
  CHECK(plate_factor(DetectionMode::dark_field) == Complex{1.0, 0.0});
  CHECK(plate_factor(DetectionMode::zernike_plus) == Complex{1.0, -1.0});
  CHECK(plate_factor(DetectionMode::zernike_minus) == Complex{1.0, 1.0});
}

TEST_CASE("pulsed signals") {
  const CavityConfig cav = CavityConfig::study(0.02);

  SUBCASE("empty sample gives zero dark field for every pass") {
    const SampleCoeffs empty = empty_plate_coefficients(CarrierSpec::none(), kWl);
    for (int m = 1; m <= 24; ++m) {
      const PulseCounts pc = pulsed_signal(DetectionMode::dark_field, m, cav, empty, kPulse);
      CHECK(pc.sample < 1e-20);
    }
  }

  SUBCASE("graphene first pulse extinction") {
    const SampleCoeffs s = sample_coefficients(kGraphene, CarrierSpec::none(), kWl);
    const PulseCounts pc = pulsed_signal(DetectionMode::bright_field, 1, cav, s, kPulse);
    CHECK(pc.sample == doctest::Approx(974.0 * cav.transmission_out).epsilon(1e-3));
    CHECK(pc.reference == doctest::Approx(1000.0 * cav.transmission_out).epsilon(1e-12));
  }

  SUBCASE("even reference pulses vanish for non-reflective plates") {
    const SampleCoeffs s = sample_coefficients(kBn20, CarrierSpec::none(), kWl);
    const PulseTrain train = pulse_train(DetectionMode::bright_field, cav, s, kPulse, 20);
    for (size_t i = 1; i < train.reference.size(); i += 2) CHECK(train.reference[i] == 0.0);
  }

  SUBCASE("weak-sample per-pulse forms, second-order remainder") {
    // odd m: BF = -2 m chi_I q_ref, Znk+- = +-2 m chi_R q_ref, DF = |m chi|^2 q_ref;
    // even m: |m chi|^2 |r1 + r2|^2 / 4 * q_ref(m-1).
    const auto remainders = [&](double scale) {
      const SampleCoeffs s = scaled_ws(scale);
      Susceptibility chi = susceptibility(kGraphene, kWl);
      chi.chi *= scale;
      const double r1r2 = cav.reflectivity_in * cav.reflectivity_out;
      double worst = 0.0;
      for (int ell = 0; ell <= 4; ++ell) {
        const int m = 2 * ell + 1;
        const double q_ref = 1000.0 * cav.transmission_out * std::pow(r1r2, ell);
        const auto bf = pulsed_signal(DetectionMode::bright_field, m, cav, s, kPulse);
        const auto zp = pulsed_signal(DetectionMode::zernike_plus, m, cav, s, kPulse);
        const auto zm = pulsed_signal(DetectionMode::zernike_minus, m, cav, s, kPulse);
        const auto df = pulsed_signal(DetectionMode::dark_field, m, cav, s, kPulse);
        worst = std::max(worst,
                         std::abs(bf.sample - bf.reference + 2.0 * m * chi.imag_part() * q_ref));
        worst = std::max(worst,
                         std::abs(zp.sample - zp.reference - 2.0 * m * chi.real_part() * q_ref));
        worst = std::max(worst,
                         std::abs(zm.sample - zm.reference + 2.0 * m * chi.real_part() * q_ref));
        worst = std::max(worst, std::abs(df.sample - std::norm(chi.chi) * m * m * q_ref));
      }
      for (int ell = 1; ell <= 4; ++ell) {
        const int m = 2 * ell;
        const double q_prev = 1000.0 * cav.transmission_out * std::pow(r1r2, ell - 1);
        const double expected = std::norm(chi.chi) * m * m *
                                std::norm(cav.r1() + cav.r2()) / 4.0 * q_prev;
        const auto bf = pulsed_signal(DetectionMode::bright_field, m, cav, s, kPulse);
        worst = std::max(worst, std::abs(bf.sample - expected));
      }
      return worst;
    };
    // halving the susceptibility scale must cut the worst absolute remainder
    // by at least ~4 (it is second order)
    const double r1 = remainders(0.04);
    const double r2 = remainders(0.02);
    CHECK(r1 / r2 > 3.0);
    CHECK(r1 / r2 < 6.5);
  }
}

TEST_CASE("stationary signals") {
  const CavityConfig cav = CavityConfig::study(0.02);
  const Complex z = roundtrip_phase(0.5);

  SUBCASE("empty sample") {
    const SampleCoeffs empty = empty_plate_coefficients(CarrierSpec::none(), kWl);
    for (DetectionMode mode : {DetectionMode::bright_field, DetectionMode::zernike_plus,
                               DetectionMode::zernike_minus}) {
      const DetectionRecord rec = cw_signal(mode, cav, empty, z, kCw);
      CHECK(rec.n_sample == doctest::Approx(rec.n_reference).epsilon(1e-12));
    }
    const DetectionRecord df = cw_signal(DetectionMode::dark_field, cav, empty, z, kCw);
    CHECK(df.n_sample < 1e-20);
    CHECK(df.n_reference == 0.0);
  }

  SUBCASE("weak-sample resonance forms") {
    // on the odd resonance: BF = -8 lbar chi_I q_ref, Znk+- = +-8 lbar chi_R q_ref,
    // DF = 16 lbar^2 |chi|^2 q_ref
    const double scale = 1e-2;
    const SampleCoeffs s = scaled_ws(scale);
    Susceptibility chi = susceptibility(kGraphene, kWl);
    chi.chi *= scale;
    const double rr = std::sqrt(cav.reflectivity_in * cav.reflectivity_out);
    const double lbar = rr / (1.0 - rr);

    const DetectionRecord bf = cw_signal(DetectionMode::bright_field, cav, s, z, kCw);
    CHECK(rel_err(bf.n_reference - bf.n_sample, 8.0 * lbar * chi.imag_part() * bf.n_reference) <
          0.10);
    const DetectionRecord zp = cw_signal(DetectionMode::zernike_plus, cav, s, z, kCw);
    CHECK(rel_err(zp.n_sample - zp.n_reference, 8.0 * lbar * chi.real_part() * zp.n_reference) <
          0.10);
    const DetectionRecord df = cw_signal(DetectionMode::dark_field, cav, s, z, kCw);
    CHECK(rel_err(df.n_sample, 16.0 * lbar * lbar * std::norm(chi.chi) * bf.n_reference) < 0.10);
  }

  SUBCASE("zernike plate leaves the empty pixel count unchanged") {
    const SampleCoeffs empty = empty_plate_coefficients(CarrierSpec::none(), kWl);
    const DetectionRecord zp = cw_signal(DetectionMode::zernike_plus, cav, empty, z, kCw);
    const DetectionRecord bf = cw_signal(DetectionMode::bright_field, cav, empty, z, kCw);
    CHECK(zp.n_reference == doctest::Approx(bf.n_reference).epsilon(1e-12));
    CHECK(zp.n_sample == doctest::Approx(zp.n_reference).epsilon(1e-12));
  }
}

TEST_CASE("ring-down accumulation") {
  const CavityConfig cav = CavityConfig::study(0.02);

  SUBCASE("empty reference total") {
    const SampleCoeffs empty = empty_plate_coefficients(CarrierSpec::none(), kWl);
    const DetectionRecord rec = rd_accumulate(DetectionMode::bright_field, cav, empty, kPulse);
    const double expected = 1000.0 * cav.transmission_out /
                            (1.0 - cav.reflectivity_in * cav.reflectivity_out);
    CHECK(rec.n_reference == doctest::Approx(expected).epsilon(1e-9));
    CHECK(rec.n_sample == doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("bright-field cancellation for lossless samples") {
    // The sample-reflected light redistributes over the train; the
    // time-integrated count nearly equals the reference. The residual is
    // the backward-leakage imbalance, of order |r_s|^2 (1-sqrt(R1R2)) T2.
    for (const MaterialLayer* m : {&kBn, &kBn20}) {
      const SampleCoeffs s = sample_coefficients(*m, CarrierSpec::none(), kWl);
      const DetectionRecord rec = rd_accumulate(DetectionMode::bright_field, cav, s, kPulse);
      CHECK(std::abs(rec.n_sample - rec.n_reference) < 1e-4 * rec.n_reference);
    }
  }

  SUBCASE("weak-sample accumulated forms at T2 = 0.1") {
    const CavityConfig c = CavityConfig::study(0.1);
    const double scale = 0.02;
    const SampleCoeffs s = scaled_ws(scale);
    Susceptibility chi = susceptibility(kGraphene, kWl);
    chi.chi *= scale;
    const double r1r2 = c.reflectivity_in * c.reflectivity_out;
    const double lbar = 2.0 / (1.0 - r1r2);
    const double q_ref = 1000.0 * c.transmission_out / (1.0 - r1r2);

    const DetectionRecord bf = rd_accumulate(DetectionMode::bright_field, c, s, kPulse);
    CHECK(rel_err(bf.n_reference - bf.n_sample, 2.0 * lbar * chi.imag_part() * q_ref) < 0.15);

    // The high-reflectivity form 4 lbar^2 |chi|^2 q_ref for the dark field
    // is ~18% off at this T2; the exact second-order geometric sums over
    // odd and even passes are the sharper oracle.
    const double x = r1r2;
    const double odd_sum = (1.0 + 6.0 * x + x * x) / std::pow(1.0 - x, 3);
    const double even_sum =
        std::norm(c.r1() + c.r2()) * (1.0 + x) / std::pow(1.0 - x, 3);
    const double df_ws = std::norm(chi.chi) * 1000.0 * c.transmission_out *
                         (odd_sum + even_sum);
    const DetectionRecord df = rd_accumulate(DetectionMode::dark_field, c, s, kPulse);
    CHECK(rel_err(df.n_sample, df_ws) < 0.05);
    CHECK(rel_err(df.n_sample, 4.0 * lbar * lbar * std::norm(chi.chi) * q_ref) < 0.25);
  }

  SUBCASE("time-tagged post-processing avoids the cancellation") {
    const SampleCoeffs s = sample_coefficients(kBn20, CarrierSpec::none(), kWl);
    const DetectionRecord plain = rd_accumulate(DetectionMode::bright_field, cav, s, kPulse);
    const double tagged = rd_time_tagged_signal(DetectionMode::bright_field, cav, s, kPulse);
    CHECK(std::abs(tagged) > 100.0 * std::abs(plain.n_sample - plain.n_reference));
  }
}

TEST_CASE("multi-pass signals") {
  const CavityConfig cav = CavityConfig::multipass(0.98);

  SUBCASE("ell = 0 is a single pass with full outcoupling") {
    const SampleCoeffs s = sample_coefficients(kGraphene, CarrierSpec::none(), kWl);
    const DetectionRecord rec = mp_signal(DetectionMode::bright_field, 0, cav, s, kPulse);
    CHECK(rec.n_sample == doctest::Approx(1000.0 * std::norm(s.t)).epsilon(1e-12));
    CHECK(rec.n_reference == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(rec.interactions == 1);
  }

  SUBCASE("reference follows eta R^(2 ell)") {
    const SampleCoeffs s = sample_coefficients(kBn, CarrierSpec::none(), kWl);
    for (int ell : {0, 1, 5, 20}) {
      const DetectionRecord rec =
          mp_signal(DetectionMode::zernike_plus, ell, cav, s, kPulse, 0.8);
      CHECK(rec.n_reference ==
            doctest::Approx(0.8 * 1000.0 * std::pow(0.98, 2 * ell)).epsilon(1e-10));
    }
  }

  SUBCASE("asymmetric mirrors are rejected") {
    const CavityConfig bad = CavityConfig::study(0.02);
    const SampleCoeffs s = sample_coefficients(kBn, CarrierSpec::none(), kWl);
    CHECK_THROWS_AS(mp_signal(DetectionMode::bright_field, 1, bad, s, kPulse),
                    std::invalid_argument);
  }

  SUBCASE("weak-sample multi-pass forms") {
    const double scale = 0.05;
    const SampleCoeffs s = scaled_ws(scale, kBn);
    Susceptibility chi = susceptibility(kBn, kWl);
    chi.chi *= scale;
    for (int ell : {0, 2, 7}) {
      const int m = 2 * ell + 1;
      const double q_ref = 1000.0 * std::pow(0.98, 2 * ell);
      const DetectionRecord zp = mp_signal(DetectionMode::zernike_plus, ell, cav, s, kPulse);
      CHECK(rel_err(zp.n_sample - zp.n_reference, 2.0 * m * chi.real_part() * q_ref) < 0.05);
    }
  }
}

TEST_CASE("zernike modes are first-order mirror images") {
  const CavityConfig cav = CavityConfig::study(0.05);

  SUBCASE("weak-sample closed forms are exactly opposite") {
    const Susceptibility chi = susceptibility(kBn, kWl);
    for (Scheme sc : {Scheme::cw, Scheme::ring_down, Scheme::multi_pass}) {
      const WsPredictions p = ws_predictions(cav, chi, CarrierSpec::none(), {sc, 3, 1.0});
      CHECK(p.q_znk_plus == -p.q_znk_minus);
    }
  }

  SUBCASE("full pulsed signals cancel to second order") {
    const SampleCoeffs s = sample_coefficients(kBn, CarrierSpec::none(), kWl);
    const Susceptibility chi = susceptibility(kBn, kWl);
    for (int m : {1, 3, 7, 15}) {
      const auto zp = pulsed_signal(DetectionMode::zernike_plus, m, cav, s, kPulse);
      const auto zm = pulsed_signal(DetectionMode::zernike_minus, m, cav, s, kPulse);
      const double sum = (zp.sample - zp.reference) + (zm.sample - zm.reference);
      const double quad = std::norm(static_cast<double>(m) * chi.chi) * zp.reference;
      CHECK(std::abs(sum) <= 3.0 * quad + 1e-12);
    }
  }
}

TEST_CASE("dark field stays below the total outcoupled light in the weak-phase regime") {
  const CavityConfig cav = CavityConfig::study(0.02);
  for (const MaterialLayer* m : {&kGraphene, &kBn, &kBn20}) {
    const SampleCoeffs s = sample_coefficients(*m, CarrierSpec::none(), kWl);
    const double chi_r = susceptibility(*m, kWl).real_part();
    const int m_cap = std::min(101, static_cast<int>(0.8 * (std::numbers::pi / 2.0) / chi_r));
    const PulseTrain df = pulse_train(DetectionMode::dark_field, cav, s, kPulse, m_cap);
    const PulseTrain bf = pulse_train(DetectionMode::bright_field, cav, s, kPulse, m_cap);
    for (int i = 0; i < m_cap; ++i)
      CHECK(df.sample[i] <= bf.sample[i] + bf.reference[i] + 1e-12);
  }
}

TEST_CASE("ring-down vs stationary factors in the weak-sample limit") {
  // at matched T2 and high reflectivity: accumulated RD signals are 1/4 of
  // the CW ones per reference photon, RD damage is 1/2, and the
  // constant-damage SNR ratio approaches 2 sqrt(2)
  const CavityConfig cav = CavityConfig::lossless_symmetric(0.9975);  // R1R2 > 0.995
  const double scale = 3e-4;
  const SampleCoeffs s = scaled_ws(scale);
  Susceptibility chi = susceptibility(kGraphene, kWl);
  chi.chi *= scale;
  const Complex z{-1.0, 0.0};

  const DetectionRecord cw = cw_signal(DetectionMode::bright_field, cav, s, z, kCw);
  const DetectionRecord rd = rd_accumulate(DetectionMode::bright_field, cav, s, kPulse);
  const double cw_rel = (cw.n_reference - cw.n_sample) / cw.n_reference;
  const double rd_rel = (rd.n_reference - rd.n_sample) / rd.n_reference;
  CHECK(rel_err(cw_rel / rd_rel, 4.0) < 0.10);

  const SampleFields f = cw_sample_fields(cav, s, z);
  const double cw_dam =
      (f.incoming.norm_sq() - f.outgoing.norm_sq()) * 1000.0 / cav.transmission_in;
  const DamageReport rd_dam = pulsed_absorption(-1, cav, s, kPulse);
  const double cw_dam_rel = cw_dam / cw.n_reference;
  const double rd_dam_rel = rd_dam.absorbed_photons / rd.n_reference;
  CHECK(rel_err(cw_dam_rel / rd_dam_rel, 2.0) < 0.10);

  const double budget = 2.0 * chi.imag_part() * 1000.0;
  const double s_cw = budget / cw_dam;
  const double s_rd = budget / rd_dam.absorbed_photons;
  const double snr_cw = std::abs(s_cw * cw.n_sample - s_cw * cw.n_reference) /
                        std::sqrt(s_cw * (cw.n_sample + cw.n_reference));
  const double snr_rd = std::abs(s_rd * rd.n_sample - s_rd * rd.n_reference) /
                        std::sqrt(s_rd * (rd.n_sample + rd.n_reference));
  CHECK(rel_err(snr_cw / snr_rd, 2.0 * std::sqrt(2.0)) < 0.10);
  CHECK(snr_cw > snr_rd);
}

TEST_CASE("photon counts are nonnegative") {
  oracles::RandomPhysics rng;
  for (int i = 0; i < 200; ++i) {
    const SampleCoeffs s = sample_coefficients(rng.material(i % 2 == 0), CarrierSpec::none(), kWl);
    const CavityConfig cav = rng.cavity();
    for (int k = 0; k < 4; ++k) {
      const auto mode = static_cast<DetectionMode>(k);
      const PulseCounts pc = pulsed_signal(mode, 1 + i % 9, cav, s, kPulse);
      CHECK(pc.sample >= 0.0);
      CHECK(pc.reference >= 0.0);
      const DetectionRecord rec = rd_accumulate(mode, cav, s, kPulse);
      CHECK(rec.n_sample >= 0.0);
      CHECK(rec.n_reference >= 0.0);
    }
  }
}
