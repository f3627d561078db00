#pragma once

#include <cmath>

#include "flipflop/errors.hpp"

namespace flipflop {

// Planck-taper window occupying [t0, t0 + duration]. The ramp denominator
// is 1 + exp(a)/sigma with sigma dividing the exponential.
struct PlanckTaperPulse {
  double xi0 = 0.0;       // start/end level, kV/m
  double xif = 0.0;       // plateau level, kV/m
  double ramp = 1.0;      // t_r, ns
  double duration = 2.5;  // T, ns
  double start = 0.0;     // t0, ns
  double sigma = 1.0;     // slope modifier

  void validate() const {
    if (!(ramp > 0)) throw ConfigError("t_r", "must be > 0");
    if (!(duration > 2 * ramp)) throw ConfigError("T", "must exceed 2 t_r");
    if (!(sigma > 0)) throw ConfigError("sigma", "must be > 0");
    if (!std::isfinite(xi0) || !std::isfinite(xif)) throw ConfigError("xi0", "levels must be finite");
  }

  double end() const { return start + duration; }

  double value(double t) const {
    double w = 0.0;
    window(t - start, &w, nullptr);
    return xi0 + (xif - xi0) * w;
  }

  double derivative(double t) const {
    double w = 0.0, dw = 0.0;
    window(t - start, &w, &dw);
    return (xif - xi0) * dw;
  }

 private:
  // Logistic 1/(1 + e^q) and its q-derivative, without overflow.
  static void logistic(double q, double* g, double* dg) {
    if (q > 700.0) {
      *g = 0.0;
      if (dg) *dg = 0.0;
      return;
    }
    if (q < -700.0) {
      *g = 1.0;
      if (dg) *dg = 0.0;
      return;
    }
    const double e = std::exp(-std::abs(q));
    *g = q >= 0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
    if (dg) *dg = -e / ((1.0 + e) * (1.0 + e));
  }

  void window(double s, double* w, double* dw) const {
    const double tr = ramp, T = duration, log_sigma = std::log(sigma);
    if (dw) *dw = 0.0;
    if (s <= 0.0 || s >= T) {
      *w = 0.0;
      return;
    }
    if (s >= tr && s <= T - tr) {
      *w = 1.0;
      return;
    }
    double a, da;
    if (s < tr) {
      a = tr / s + tr / (s - tr);
      da = -tr / (s * s) - tr / ((s - tr) * (s - tr));
    } else {
      const double u = s - T + tr, v = s - T;
      a = -tr / u - tr / v;
      da = tr / (u * u) + tr / (v * v);
    }
    double dg = 0.0;
    logistic(a - log_sigma, w, dw ? &dg : nullptr);
    if (dw) *dw = dg * da;
  }
};

// dc envelope plus an ac carrier: dc(t) + ac(t) cos(omega t + phi).
struct DriveProgram {
  PlanckTaperPulse dc;
  PlanckTaperPulse ac{0.0, 0.0, 1.0, 2.5, 0.0, 1.0};
  double omega = 0.0;  // rad/ns
  double phi = 0.0;    // rad
  double rho = 2.1;

  bool has_ac() const { return ac.xif != 0.0 || ac.xi0 != 0.0; }

  double total_time() const { return dc.end(); }

  double field(double t) const {
    double e = dc.value(t);
    if (has_ac()) e += ac.value(t) * std::cos(omega * t + phi);
    return e;
  }

  void validate() const {
    dc.validate();
    if (has_ac()) {
      ac.validate();
      if (ac.xi0 != 0.0) throw ConfigError("ac.xi0", "ac envelope must start at 0");
    }
  }
};

inline DriveProgram dc_program(const PlanckTaperPulse& dc) {
  DriveProgram d;
  d.dc = dc;
  return d;
}

// ac envelope spanning the dc plateau, ramp (T - 2 t_r)/rho.
inline PlanckTaperPulse ac_envelope_for(const PlanckTaperPulse& dc, double amplitude, double sigma_ac,
                                        double rho) {
  PlanckTaperPulse ac;
  ac.xi0 = 0.0;
  ac.xif = amplitude;
  ac.start = dc.start + dc.ramp;
  ac.duration = dc.duration - 2 * dc.ramp;
  ac.ramp = ac.duration / rho;
  ac.sigma = sigma_ac;
  return ac;
}

}  // namespace flipflop
