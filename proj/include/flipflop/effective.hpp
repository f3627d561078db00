#pragma once

// Closed-form effective models of the flip-flop qubit: the fourth-order
// transition energy, the ac-driven two-level coefficients, their Floquet
// reduction, and derived design quantities.

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "flipflop/device.hpp"

namespace flipflop {

inline constexpr double degenerate_threshold = 0.1 * units::two_pi;  // |Delta_os| floor, rad/ns

template <typename Scalar>
void check_nondegenerate(const StaticQuantities<Scalar>& q) {
  using std::abs;
  const Scalar floor = Scalar(degenerate_threshold) * Scalar(degenerate_threshold);
  if (abs(q.delta_os_sq) < floor)
    throw DegenerateRegimeError("orbital and spin splittings nearly degenerate, perturbative series invalid");
}

template <typename Scalar = double>
Scalar flipflop_transition_energy(const StaticQuantities<Scalar>& q) {
  using std::cos;
  using std::sin;
  check_nondegenerate(q);
  const Scalar a = q.hyperfine, e0 = q.eps0, es = q.eps_s_minus, d2 = q.delta_os_sq;
  const Scalar s2 = sin(q.theta) * sin(q.theta), c = cos(q.theta);
  return es - a * s2 *
                  (q.delta_epsz / (8 * e0) + a * es / (8 * d2) + a * a * e0 * es * c / (16 * d2 * d2) -
                   a * a * a * e0 * e0 * es * s2 / (32 * d2 * d2 * d2));
}

template <typename Scalar = double>
Scalar flipflop_transition_energy(const DeviceParams& p, Scalar delta_E) {
  return flipflop_transition_energy(static_quantities<Scalar>(p, delta_E));
}

// d eps_ff / d delta_E, rad/ns per kV/m, by a fourth-order central difference.
double transition_energy_slope(const DeviceParams& p, double delta_E, double h = 1e-3);

struct EffectiveAcCoefficients {
  std::array<double, 4> omega_x{};  // Omega_{x,0..3}
  std::array<double, 3> omega_y{};  // Omega_{y,0..2}
  std::array<double, 4> eps_ff_c{};  // eps_{ff,0..3}
  double eps_ac = 0.0;
};

EffectiveAcCoefficients ac_coefficients(const DeviceParams& p, double delta_E, double E_ac);

// Qubit-space ac Hamiltonian at drive phase tau = omega t + phi.
Eigen::Matrix2cd ac_qubit_hamiltonian(const EffectiveAcCoefficients& c, double tau);

struct FloquetModel {
  double omega_res = 0.0;  // rad/ns, positive magnitude
  double Omega_R = 0.0;    // signed Rabi amplitude
  double Omega_res = 0.0;  // |Omega_R|
  int M = 1;

  // Delta at angular frequency omega (positive convention).
  double detuning(double omega) const { return omega_res - omega; }
};

FloquetModel floquet_reduce(const EffectiveAcCoefficients& c);

// Truncated Floquet matrix with blocks m = -M..M, 2(2M+1) square. omega is
// the signed angular frequency of ac_qubit_hamiltonian's time dependence.
Eigen::MatrixXcd build_truncated_floquet(const EffectiveAcCoefficients& c, double omega, double phi, int M);

// Quasi-energy splitting of the pair that becomes degenerate at resonance.
double floquet_central_splitting(const EffectiveAcCoefficients& c, double omega, double phi, int M);

double solve_ac_amplitude(const DeviceParams& p, double delta_E, double R);

struct T1RatioInputs {
  struct Set {
    double eps0;       // rad/ns
    double Vt;         // rad/ns
    double gamma_e_B0;  // rad/ns
  };
  Set i, j;
};

T1RatioInputs::Set t1_parameter_set(const DeviceParams& p, double delta_E);
double t1_ratio(const T1RatioInputs& in);

double dephasing_rate_estimate(const DeviceParams& p, double delta_E, double dEz_rms_Vm, int nodes = 64);

struct ClockTransition {
  double delta_E = 0.0;  // kV/m
  double slope = 0.0;    // rad/ns per kV/m
  bool exact_root = false;
};

// Zero of d eps_ff / d delta_E in [lo, hi] if one exists, otherwise the
// point of smallest |slope| there.
ClockTransition locate_clock_transition(const DeviceParams& p, double lo, double hi);

}  // namespace flipflop
