#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flipflop/design.hpp"
#include "flipflop/noise.hpp"

namespace flipflop {

struct GateSpec {
  Axis axis = Axis::z;
  double angle = 0.0;  // rad
};

struct Range {
  double start = 0.0, stop = 0.0;
  int n = 1;

  std::vector<double> values() const;
};

struct OutputSpec {
  std::string path;  // empty: stdout
  std::string format = "csv";  // csv | json
};

// t1-ratio inputs: the device evaluated at two detunings, optionally with
// different B0 and Vt.
struct T1Spec {
  struct Point {
    double delta_E = 0.0;
    std::optional<double> B0, Vt_over_2pi;
  };
  Point i{-12.0, {}, {}}, j{0.4, {}, {}};
};

struct RunConfig {
  DeviceParams device;
  std::optional<GateSpec> gate;
  RzTemplate rz;
  RxTemplate rx;
  DesignOptions design;
  NoiseModel noise;
  std::vector<double> noise_curve;  // dEz_rms values (V/m) for noise-avg
  std::optional<SweepGrid> sweep;
  Range scan{-40.0, 60.0, 1001};  // delta_E grid for spectrum/eff, kV/m
  double scan_dEz_rms = 100.0;   // V/m, dephasing-rate column of eff
  std::vector<double> deltas{-0.5, -0.2, -0.1, 0.0, 0.1, 0.2, 0.5};  // ns
  T1Spec t1;
  OutputSpec output;

  const GateSpec& require_gate() const;
};

// Throws ConfigError naming the offending key path (e.g. "device.Vt_over_2pi").
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

DeviceParams parse_device(const nlohmann::json& j, const std::string& path = "device");

// Gate design serialization. Floats are rounded to 12 significant digits.
nlohmann::json to_json(const DeviceParams& p);
nlohmann::json to_json(const PlanckTaperPulse& p);
nlohmann::json to_json(const GateDesign& g);
GateDesign gate_design_from_json(const nlohmann::json& j);

double round12(double x);
std::string format12(double x);

}  // namespace flipflop
