#pragma once

#include <string>

#include "flipflop/device.hpp"
#include "flipflop/propagation.hpp"
#include "flipflop/pulses.hpp"

namespace flipflop {

enum class Axis { z, x };

struct RzTemplate {
  double xi0 = 60.0;  // idle detuning, kV/m
  double xif = -12.0;  // operating detuning, kV/m
  double t_r = 0.9;
  double sigma = 1.0;
};

struct RxTemplate {
  double xi0 = 60.0;
  double xif = 0.0;
  double t_r = 1.0;
  double sigma = 1.0;
  double sigma_ac = 2.0;
  double rho = 2.1;
  double R = 0.23;
};

struct DesignOptions {
  double T_max = 500.0;  // ns
  // Simulation-based refinement of T around the analytic design.
  int branch = 0;  // Rz: skip this many 2 pi branches of the plateau phase
  bool refine = false;
  int branches = 1;              // Rz: 2 pi branches examined when refining
  double refine_window = 0.0;    // ns, half-width of the T search; 0 picks it from the orbital gap (Rz) or 0.3 ns (Rx)
  double refine_target = 1e-5;   // stop at the first branch reaching this infidelity
  PropagatorConfig propagator{};
};

struct GateDesign {
  Axis axis = Axis::z;
  double angle = 0.0;  // target rotation, rad
  DeviceParams params;
  DriveProgram drive;
  double predicted_T = 0.0;  // analytic gate time, ns
  Frame frame = Frame::idle;

  // x-gate extras
  double E_ac = 0.0;       // kV/m
  double R = 0.0;
  double Omega_R = 0.0;    // signed Rabi amplitude at the plateau, rad/ns
  double objective = 0.0;  // Theta at the chosen T
  double sigma_ac = 0.0;

  double gate_time() const { return drive.total_time(); }
  Eigen::Matrix2cd target() const { return axis == Axis::z ? rz(angle) : rx(angle); }
};

// -(integral of eps_ff(Xi(t)) - eps_s(-)(xi0)) over the dc pulse.
double rz_rotation_angle(const DeviceParams& p, const PlanckTaperPulse& dc);

GateDesign design_rz(const DeviceParams& p, double phi, const RzTemplate& tpl, const DesignOptions& opt = {});

// Theta(T) for the Rx template with a given ac amplitude.
double rabi_angle_objective(const DeviceParams& p, double phi, const RxTemplate& tpl, double E_ac, double T);

GateDesign design_rx(const DeviceParams& p, double phi, const RxTemplate& tpl, const DesignOptions& opt = {});

// Same pulse program with the total duration replaced (plateau stretched,
// ramps fixed; the ac envelope is re-derived for x-gates).
GateDesign with_duration(const GateDesign& g, double T);

// Noiseless simulation of a design.
GateResult simulate(const GateDesign& g, const PropagatorConfig& cfg = {}, const PlantOffset& offset = {});
double noiseless_infidelity(const GateDesign& g, const PropagatorConfig& cfg = {});

std::string to_string(Axis a);
Axis axis_from_string(const std::string& s);

}  // namespace flipflop
