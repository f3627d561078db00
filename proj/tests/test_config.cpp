#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "flipflop/config.hpp"

using namespace flipflop;
using nlohmann::json;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse_config_text(R"({"device": {}, "gate": {"axis": "z", "angle": 1.0}})");
  CHECK(c.rz.sigma == 1.0);
  CHECK(c.rx.sigma == 1.0);
  CHECK(c.rx.rho == 2.1);
  CHECK(c.noise.seed == 0);
  CHECK(c.noise.n_samples == 1);
  CHECK(c.device.B0 == 0.4);
  CHECK(c.gate->axis == Axis::z);
  CHECK(c.output.format == "csv");
  CHECK_FALSE(c.design.refine);
}

TEST_CASE("config errors name the offending key") {
  CHECK(key_of(R"({"device": {"Vt_over_2pi": -1}, "gate": {"axis": "z", "angle": 1}})") == "device.Vt_over_2pi");
  CHECK(key_of(R"({"device": {"B0": "x"}})") == "device.B0");
  CHECK(key_of(R"({"gate": {"axis": "z", "angle": 1}})") == "device");
  CHECK(key_of(R"({"device": {}, "colour": 1})") == "colour");
  CHECK(key_of(R"({"device": {}, "pulse": {"t_r": 1, "ramp": 2}})") == "pulse.ramp");
  CHECK(key_of(R"({"device": {}, "pulse": {"t_r": -1}})") == "pulse.t_r");
  CHECK(key_of(R"({"device": {}, "pulse": {"R": 0.7}})") == "pulse.R");
  CHECK(key_of(R"({"device": {}, "gate": {"axis": "y", "angle": 1}})") == "gate.axis");
  CHECK(key_of(R"({"device": {}, "gate": {"axis": "x", "angle": 0}})") == "gate.angle");
  CHECK(key_of(R"({"device": {}, "noise": {"n_samples": 0}})") == "noise.n_samples");
  CHECK(key_of(R"({"device": {}, "noise": {"seed": -3}})") == "noise.seed");
  CHECK(key_of(R"({"device": {}, "sweep": {"delta_E_op": [0], "Vt_GHz": [12, 11]}})") == "sweep.Vt_GHz");
  CHECK(key_of(R"({"device": {}, "sweep": {"delta_E_op": {"start": 0, "stop": 1, "n": 0}, "Vt_GHz": [1]}})") ==
        "sweep.delta_E_op.n");
  CHECK(key_of(R"({"device": {}, "propagator": {"rel_tol": 0.1}})") == "propagator.rel_tol");
  CHECK(key_of(R"({"device": {}, "output": {"format": "xml"}})") == "output.format");
  CHECK(key_of(R"({"device": {}, "t1": {"i": {"delta_E": -12, "B0": 0}}})") == "t1.i.B0");
  CHECK(key_of("{not json") == "");
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
}

TEST_CASE("ranges and lists") {
  const RunConfig c = parse_config_text(
      R"({"device": {}, "sweep": {"delta_E_op": {"start": -2, "stop": 2, "n": 5}, "Vt_GHz": [11, 12.5], "B0": 0.8}})");
  REQUIRE(c.sweep);
  CHECK(c.sweep->delta_E_op == std::vector<double>{-2, -1, 0, 1, 2});
  CHECK(c.sweep->Vt_GHz == std::vector<double>{11, 12.5});
  CHECK(c.sweep->B0 == 0.8);

  const RunConfig d = parse_config_text(
      R"({"device": {}, "gate": {"axis": "x", "angle": 1.5}, "pulse": {"R": 0.3}, "sweep": {"delta_E_op": [0], "Vt_GHz": [12]}})");
  CHECK(d.sweep->axis == Axis::x);
  CHECK(d.sweep->angle == 1.5);
  CHECK(d.sweep->rx.R == 0.3);
  CHECK(d.sweep->B0 == 0.4);
}

TEST_CASE("every shipped preset parses") {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(FLIPFLOP_PRESET_DIR)) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_config(e.path().string()));
    ++n;
  }
  CHECK(n >= 10);
}

TEST_CASE("z rotation preset reproduces its design") {
  RunConfig c = load_config(std::string(FLIPFLOP_PRESET_DIR) + "/table1_rz_beta.json");
  CHECK(c.device.B0 == 0.4);
  CHECK(c.device.Vt_over_2pi == 11.44);
  CHECK(c.rz.xif == -12);
  CHECK(c.rz.t_r == 0.9);
  CHECK(c.noise.dVt_rms == 2.7);
  CHECK(c.noise.n_samples == 200);
  c.design.refine = false;
  const GateDesign g = design_rz(c.device, c.gate->angle, c.rz, c.design);
  CHECK(g.gate_time() == doctest::Approx(23.0).epsilon(0.5 / 23));
}

TEST_CASE("gate design JSON round trip") {
  DeviceParams p;
  p.B0 = 0.8;
  p.Vt_over_2pi = 24.5;
  RxTemplate t;
  t.R = 0.4;
  t.sigma = 1000;
  const GateDesign g = design_rx(p, M_PI / 2, t);
  const json j = to_json(g);
  const GateDesign h = gate_design_from_json(json::parse(j.dump()));
  CHECK(h.axis == Axis::x);
  CHECK(h.frame == Frame::drive);
  CHECK(h.drive.has_ac());
  CHECK(h.gate_time() == doctest::Approx(g.gate_time()).epsilon(1e-11));
  // parameters are stored to 12 digits
  CHECK(std::abs(noiseless_infidelity(h) - noiseless_infidelity(g)) < 1e-9);
  CHECK(to_json(h)["drive"].dump() == j["drive"].dump());
  CHECK_THROWS_AS(gate_design_from_json(json{{"axis", "z"}}), ConfigError);
}

TEST_CASE("twelve significant digits") {
  CHECK(format12(M_PI) == "3.14159265359");
  CHECK(round12(M_PI) == 3.14159265359);
  CHECK(format12(0.0) == "0");
  CHECK(format12(1e-20 / 3) == "3.33333333333e-21");
}
