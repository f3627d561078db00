#pragma once

#include <cmath>

#include "flipflop/errors.hpp"
#include "flipflop/units.hpp"

namespace flipflop {

// Physical constants of one donor device. Frequencies are stored in the
// cyclic units they are quoted in; the accessors return rad/ns.
struct DeviceParams {
  double B0 = 0.4;                 // T
  double Vt_over_2pi = 11.44;      // GHz
  double d = 15.0;                 // nm
  double delta_gamma = -0.002;
  double A_bulk_over_2pi = units::bulk_hyperfine_over_2pi_MHz;         // MHz
  double gamma_e_over_2pi = units::gamma_e_over_2pi_GHz_per_T;         // GHz/T
  double gamma_n_over_2pi = units::gamma_n_over_2pi_MHz_per_T;         // MHz/T

  double tunnel() const { return units::from_GHz(Vt_over_2pi); }
  double hyperfine() const { return units::from_MHz(A_bulk_over_2pi); }
  double gamma_e() const { return units::from_GHz(gamma_e_over_2pi); }
  double gamma_n() const { return units::from_MHz(gamma_n_over_2pi); }

  // d e / hbar, rad/ns per kV/m.
  double dipole() const { return d * units::field_coupling; }

  // Throws ConfigError naming the first offending field.
  void validate() const {
    if (!(B0 > 0)) throw ConfigError("B0", "must be > 0");
    if (!(Vt_over_2pi > 0)) throw ConfigError("Vt_over_2pi", "must be > 0");
    if (!(d > 0)) throw ConfigError("d", "must be > 0");
    if (!(std::abs(delta_gamma) < 0.01)) throw ConfigError("delta_gamma", "|delta_gamma| must be < 0.01");
    if (!(A_bulk_over_2pi >= 0)) throw ConfigError("A_bulk_over_2pi", "must be >= 0");
    if (!(gamma_e_over_2pi > 0)) throw ConfigError("gamma_e_over_2pi", "must be > 0");
    if (!(gamma_n_over_2pi >= 0)) throw ConfigError("gamma_n_over_2pi", "must be >= 0");
    const double zeeman = B0 * (gamma_e() + gamma_n());
    if (!(zeeman > 10.0 * hyperfine()))
      throw ConfigError("B0", "Zeeman splitting must exceed 10x the hyperfine coupling");
  }

  DeviceParams with_tunnel(double vt_over_2pi) const {
    DeviceParams copy = *this;
    copy.Vt_over_2pi = vt_over_2pi;
    return copy;
  }
};

// Energies derived from the device at a field detuning delta_E = Ez - E0.
template <typename Scalar = double>
struct StaticQuantities {
  Scalar delta_E;       // kV/m
  Scalar bias;          // d e delta_E / hbar
  Scalar eps0;          // orbital splitting
  Scalar epsz;          // Zeeman splitting B0 (gamma_e + gamma_n)
  Scalar delta_epsz;    // interface Zeeman shift B0 gamma_e delta_gamma
  Scalar hyperfine;     // A
  Scalar theta;         // orbital mixing angle, tan(theta) = Vt / bias
  Scalar eps_s_minus;   // spin splitting, orbital ground state
  Scalar eps_s_plus;    // spin splitting, orbital excited state
  Scalar delta_os_sq;   // eps0^2 - eps_s_minus^2
};

template <typename Scalar = double>
StaticQuantities<Scalar> static_quantities(const DeviceParams& p, Scalar delta_E) {
  using std::atan2;
  using std::cos;
  using std::hypot;
  StaticQuantities<Scalar> q;
  q.delta_E = delta_E;
  q.bias = Scalar(p.d) * Scalar(units::field_coupling) * delta_E;
  const Scalar vt = Scalar(units::two_pi) * Scalar(p.Vt_over_2pi);
  q.eps0 = hypot(q.bias, vt);
  q.theta = atan2(vt, q.bias);
  const Scalar gamma_e = Scalar(units::two_pi) * Scalar(p.gamma_e_over_2pi);
  const Scalar gamma_n = Scalar(units::two_pi) * Scalar(p.gamma_n_over_2pi) * Scalar(1e-3);
  q.epsz = Scalar(p.B0) * (gamma_e + gamma_n);
  q.delta_epsz = Scalar(p.B0) * gamma_e * Scalar(p.delta_gamma);
  q.hyperfine = Scalar(units::two_pi) * Scalar(p.A_bulk_over_2pi) * Scalar(1e-3);
  const Scalar c = cos(q.theta);
  const Scalar a = q.hyperfine;
  q.eps_s_minus = hypot(a * (1 - c) / 2, q.epsz + q.delta_epsz * (1 + c) / 2);
  q.eps_s_plus = hypot(a * (1 + c) / 2, q.epsz + q.delta_epsz * (1 - c) / 2);
  q.delta_os_sq = q.eps0 * q.eps0 - q.eps_s_minus * q.eps_s_minus;
  return q;
}

}  // namespace flipflop
