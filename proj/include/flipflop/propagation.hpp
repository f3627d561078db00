#pragma once

#include <complex>

#include <Eigen/Dense>

#include "flipflop/device.hpp"
#include "flipflop/pulses.hpp"

namespace flipflop {

using Matrix8cd = Eigen::Matrix<std::complex<double>, 8, 8>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

enum class StepMethod { midpoint, magnus4, adaptive };

// orbital_adiabatic: the Hamiltonian is written in the instantaneous
// orbital eigenbasis of the dc field and the frame-rotation term is
// dropped, so dc ramps cannot drive orbital Landau-Zener transitions.
// lab: fixed {|i>, |d>} basis, full dynamics.
enum class Picture { orbital_adiabatic, lab };

struct PropagatorConfig {
  double max_step = 1e-3;  // ns; further capped at 0.05 / f_max
  double rel_tol = 1e-7;
  StepMethod method = StepMethod::magnus4;
  Picture picture = Picture::orbital_adiabatic;
  int max_halvings = 6;

  void validate() const {
    if (!(max_step > 0)) throw ConfigError("max_step", "must be > 0");
    if (!(rel_tol > 0 && rel_tol <= 1e-6)) throw ConfigError("rel_tol", "must lie in (0, 1e-6]");
    if (max_halvings < 0) throw ConfigError("max_halvings", "must be >= 0");
  }
};

// Quasi-static perturbation of the plant: field offset (kV/m) added to the
// total field and tunnel offset (cyclic GHz) added to Vt.
struct PlantOffset {
  double field_kVm = 0.0;
  double tunnel_GHz = 0.0;
};

// Real symmetric lab-frame Hamiltonian at total detuning delta_E.
Matrix8d lab_hamiltonian(const DeviceParams& p, double delta_E);

// Orbital rotation O(theta) (x) 1_4 taking eigenbasis amplitudes to lab ones.
Matrix8d orbital_frame(const DeviceParams& p, double delta_E);

// Step actually used: min(cfg.max_step, 0.05 / f_max) with f_max the
// largest cyclic energy scale the program visits.
double effective_step(const DeviceParams& p, const DriveProgram& d, const PropagatorConfig& cfg);

// Time-ordered U(t1, t0) in the lab product basis.
Matrix8cd evolve(const DeviceParams& p, const DriveProgram& d, const PropagatorConfig& cfg, double t0, double t1,
                 const PlantOffset& offset = {});

inline Matrix8cd evolve(const DeviceParams& p, const DriveProgram& d, const PropagatorConfig& cfg,
                        const PlantOffset& offset = {}) {
  return evolve(p, d, cfg, 0.0, d.total_time(), offset);
}

enum class Frame { idle, drive };

struct GateResult {
  Matrix8cd U_full;
  Eigen::Matrix2cd U_logical;
  double leakage = 0.0;
  Frame frame = Frame::idle;
};

struct FidelityResult {
  double F = 0.0;
  int m = 2;
  double infidelity() const { return 1.0 - F; }
};

// Columns: |0>, |1> = the two lowest flip-flop eigenstates of H(delta_E),
// each with its largest-magnitude component real and positive.
Eigen::Matrix<std::complex<double>, 8, 2> logical_basis(const DeviceParams& p, double delta_E);

// Idle frame removes exp(-i H_idle T) with H_idle at drive.dc.xi0. Drive
// frame removes exp(i Psi(t) sigma_z / 2) where Psi follows the logical
// splitting during dc ramps and omega t across the ac window.
GateResult rotating_frame_gate(const Matrix8cd& U, const DeviceParams& p, const DriveProgram& d, Frame frame);

FidelityResult average_gate_fidelity(const GateResult& g, const Eigen::Matrix2cd& target);
FidelityResult average_gate_fidelity(const Eigen::Matrix2cd& U_logical, const Eigen::Matrix2cd& target);

Eigen::Matrix2cd rz(double phi);
Eigen::Matrix2cd rx(double phi);

}  // namespace flipflop
