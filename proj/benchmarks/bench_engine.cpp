#include <benchmark/benchmark.h>

#include "cavmic/experiments.hpp"

using namespace cavmic;

namespace {

const MaterialLayer kGraphene{{2.71, 1.41}, 3.35e-10, 1};
const MaterialLayer kBn20{{1.8, 0.0}, 3.33e-10, 20};
const CarrierSpec kNone = CarrierSpec::none();
const WavelengthSpec kWl{602.446477662e-9};
const IlluminationSpec kPulse{1000.0, IlluminationSpec::PulseClass::short_pulse};
const IlluminationSpec kCw{1000.0, IlluminationSpec::PulseClass::cw};

void BM_SampleCoefficients(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_coefficients(kGraphene, kNone, kWl));
}
BENCHMARK(BM_SampleCoefficients);

void BM_Eigenpair(benchmark::State& state) {
  const SampleCoeffs s = sample_coefficients(kGraphene, kNone, kWl);
  const CavityConfig cav = CavityConfig::study(0.02);
  const TransferMatrix m = TransferMatrix::half_roundtrip(cav, s);
  for (auto _ : state) benchmark::DoNotOptimize(eigenpair(m));
}
BENCHMARK(BM_Eigenpair);

void BM_CwSignalPoint(benchmark::State& state) {
  const SampleCoeffs s = sample_coefficients(kGraphene, kNone, kWl);
  const CavityConfig cav = CavityConfig::study(0.02);
  const Complex z = roundtrip_phase(0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(cw_signal(DetectionMode::bright_field, cav, s, z, kCw));
}
BENCHMARK(BM_CwSignalPoint);

void BM_RdAccumulate(benchmark::State& state) {
  const SampleCoeffs s = sample_coefficients(kGraphene, kNone, kWl);
  const CavityConfig cav = CavityConfig::study(1e-3);
  for (auto _ : state)
    benchmark::DoNotOptimize(rd_accumulate(DetectionMode::dark_field, cav, s, kPulse));
}
BENCHMARK(BM_RdAccumulate);

void BM_PulsedAbsorptionTrain(benchmark::State& state) {
  const SampleCoeffs s = sample_coefficients(kBn20, kNone, kWl);
  const CavityConfig cav = CavityConfig::multipass(0.98);
  for (auto _ : state)
    benchmark::DoNotOptimize(pulsed_absorption(501, cav, s, kPulse));
}
BENCHMARK(BM_PulsedAbsorptionTrain);

void BM_CwSweepGrid(benchmark::State& state) {
  const DamageBudget budget = DamageBudget::auto_for(kGraphene, kNone, kWl);
  SweepRequest req;
  req.scheme = Scheme::cw;
  req.grid = SweepGrid::defaults();
  req.modes = {DetectionMode::bright_field};
  for (auto _ : state)
    benchmark::DoNotOptimize(sweep(req, kGraphene, kNone, kWl, budget));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(req.grid.detuning.size() * req.grid.t2.size()));
}
BENCHMARK(BM_CwSweepGrid)->Unit(benchmark::kMillisecond);

void BM_MpSweep(benchmark::State& state) {
  const DamageBudget budget = DamageBudget::auto_for(kBn20, kNone, kWl);
  SweepRequest req;
  req.scheme = Scheme::multi_pass;
  req.grid = SweepGrid::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(sweep(req, kBn20, kNone, kWl, budget));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(req.grid.m.size()));
}
BENCHMARK(BM_MpSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
