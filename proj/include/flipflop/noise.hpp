#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flipflop/design.hpp"

namespace flipflop {

// Quasi-static noise: one (dEz, dVt) draw per gate, each uniform on
// sqrt(3) [-rms, rms].
struct NoiseModel {
  double dEz_rms = 0.0;  // V/m
  double dVt_rms = 0.0;  // cyclic MHz
  int n_samples = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct NoiseSample {
  double dEz = 0.0;  // V/m
  double dVt = 0.0;  // cyclic MHz
};

// Counter-based stream: draw i of `stream` depends only on (seed, stream, i, axis).
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, unsigned axis);

std::vector<NoiseSample> sample_noise(const NoiseModel& m, std::uint64_t stream = 0);

PlantOffset to_offset(const NoiseSample& s);

struct InfidelityStat {
  double mean_infidelity = 0.0;
  double std_error = 0.0;
  double mean_gate_time = 0.0;  // ns
  int n = 0;
};

struct RunOptions {
  int threads = 0;  // 0: FLIPFLOP_THREADS or hardware concurrency
  PropagatorConfig propagator{};
};

InfidelityStat summarize(const std::vector<double>& infidelities, double gate_time);

// Per-sample infidelities of a frozen design under the plant perturbations.
std::vector<double> sample_infidelities(const GateDesign& g, const std::vector<NoiseSample>& samples,
                                        const RunOptions& opt = {});

InfidelityStat averaged_infidelity(const GateDesign& g, const NoiseModel& m, const RunOptions& opt = {},
                                   std::uint64_t stream = 0);

struct TunnelNoiseDelta {
  InfidelityStat field_only;  // dVt switched off, same dEz draws
  InfidelityStat both;
  double delta = 0.0;      // both - field_only
  double std_error = 0.0;  // of the paired differences
};

TunnelNoiseDelta tunnel_noise_delta(const GateDesign& g, const NoiseModel& m, const RunOptions& opt = {});

struct SweepGrid {
  std::vector<double> delta_E_op;  // kV/m
  std::vector<double> Vt_GHz;
  double B0 = 0.4;
  Axis axis = Axis::x;
  double angle = 0.0;
  RzTemplate rz{};
  RxTemplate rx{};
  DesignOptions design{};

  void validate() const;
};

struct MapRow {
  double delta_E_op = 0.0;
  double Vt_GHz = 0.0;
  double B0 = 0.0;
  std::string target;
  InfidelityStat stat;  // NaN mean and n = 0 when the design failed
  std::uint64_t seed = 0;
  std::string error;
};

std::string target_label(Axis axis, double angle);

// Rows in grid order (delta_E_op outer, Vt inner); point k draws from stream k.
std::vector<MapRow> sweep_infidelity_map(const SweepGrid& grid, const DeviceParams& base, const NoiseModel& m,
                                         const RunOptions& opt = {});

struct SensitivityRow {
  double dt = 0.0;  // ns
  InfidelityStat stat;
};

// Noise-averaged infidelity with T -> T + dt (plateau stretched, ramps
// fixed), every dt using the same draws.
std::vector<SensitivityRow> pulse_length_sensitivity(const GateDesign& g, const std::vector<double>& deltas,
                                                     const NoiseModel& m, const RunOptions& opt = {});

}  // namespace flipflop
