#include "flipflop/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "flipflop/effective.hpp"
#include "flipflop/quadrature.hpp"

namespace flipflop {

namespace {

const GaussLegendre& gl64() {
  static const GaussLegendre g(64);
  return g;
}

double wrap_2pi(double x) {
  double r = std::fmod(x, units::two_pi);
  return r < 0 ? r + units::two_pi : r;
}

PlanckTaperPulse rz_pulse(const RzTemplate& tpl, double T) {
  PlanckTaperPulse dc;
  dc.xi0 = tpl.xi0;
  dc.xif = tpl.xif;
  dc.ramp = tpl.t_r;
  dc.duration = T;
  dc.sigma = tpl.sigma;
  return dc;
}

void validate(const RzTemplate& t) {
  if (!(t.t_r > 0)) throw ConfigError("pulse.t_r", "must be > 0");
  if (!(t.sigma > 0)) throw ConfigError("pulse.sigma", "must be > 0");
}

void validate(const RxTemplate& t) {
  if (!(t.t_r > 0)) throw ConfigError("pulse.t_r", "must be > 0");
  if (!(t.sigma > 0)) throw ConfigError("pulse.sigma", "must be > 0");
  if (!(t.sigma_ac > 0)) throw ConfigError("pulse.sigma_ac", "must be > 0");
  if (!(t.rho > 2)) throw ConfigError("pulse.rho", "must be > 2");
  if (!(t.R > 0 && t.R < 0.5)) throw ConfigError("pulse.R", "must lie in (0, 0.5)");
}

// Golden-section minimum of f on [a, b].
template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a), fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

DriveProgram rx_program(const RxTemplate& tpl, double E_ac, double omega, double phi, double T) {
  DriveProgram d;
  d.dc.xi0 = tpl.xi0;
  d.dc.xif = tpl.xif;
  d.dc.ramp = tpl.t_r;
  d.dc.duration = T;
  d.dc.sigma = tpl.sigma;
  d.ac = ac_envelope_for(d.dc, E_ac, tpl.sigma_ac, tpl.rho);
  d.omega = omega;
  d.phi = phi;
  d.rho = tpl.rho;
  return d;
}

}  // namespace

double rz_rotation_angle(const DeviceParams& p, const PlanckTaperPulse& dc) {
  const double idle = static_quantities<double>(p, dc.xi0).eps_s_minus;
  auto rate = [&](double t) { return flipflop_transition_energy<double>(p, dc.value(t)) - idle; };
  const double plateau = flipflop_transition_energy<double>(p, dc.xif) - idle;
  const double before = flipflop_transition_energy<double>(p, dc.xi0) - idle;
  double integral = before * dc.start;
  // The taper sweeps through the anticrossing in a small part of the ramp.
  integral += gl64().integrate(rate, dc.start, dc.start + dc.ramp, 16);
  integral += plateau * (dc.duration - 2 * dc.ramp);
  integral += gl64().integrate(rate, dc.end() - dc.ramp, dc.end(), 16);
  return -integral;
}

GateDesign design_rz(const DeviceParams& p, double phi, const RzTemplate& tpl, const DesignOptions& opt) {
  p.validate();
  validate(tpl);
  if (!(phi > -units::two_pi && phi <= units::two_pi)) throw ConfigError("gate.angle", "must lie in (-2pi, 2pi]");

  const double T_min = 2 * tpl.t_r;
  // angle(T) = angle0 - rate (T - T_min) for T >= T_min.
  const double angle0 = rz_rotation_angle(p, rz_pulse(tpl, T_min));
  const double idle = static_quantities<double>(p, tpl.xi0).eps_s_minus;
  const double rate = flipflop_transition_energy<double>(p, tpl.xif) - idle;
  if (rate == 0.0) throw DesignError("operating point does not rotate the qubit");

  // Smallest plateau L > 0 with angle0 - rate L = phi (mod 2pi).
  const double need = wrap_2pi(rate > 0 ? angle0 - phi : phi - angle0);
  const double period = units::two_pi / std::abs(rate);
  double plateau = need / std::abs(rate);
  if (plateau <= 1e-12) plateau += period;
  plateau += opt.branch * period;

  auto solve = [&](double L) {
    const double target = angle0 - rate * L;
    double lo = T_min + std::max(0.0, L - 1.0), hi = T_min + L + 1.0;
    auto g = [&](double T) { return rz_rotation_angle(p, rz_pulse(tpl, T)) - target; };
    const double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi), gm = g(mid);
      if ((gm > 0) == (glo > 0)) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  GateDesign g;
  g.axis = Axis::z;
  g.angle = phi;
  g.params = p;
  g.frame = Frame::idle;

  const double T0 = solve(plateau);
  if (!(T0 <= opt.T_max)) throw DesignError("no Rz solution below T_max");
  g.predicted_T = T0;
  g.drive = dc_program(rz_pulse(tpl, T0));
  if (!opt.refine) return g;

  // Leakage interferes between the two ramps with the orbital gap at the
  // plateau, so the objective oscillates in T on this scale.
  const auto q = static_quantities<double>(p, tpl.xif);
  const double fringe = units::two_pi / (q.eps0 - q.eps_s_minus);
  const double window = opt.refine_window > 0 ? opt.refine_window : 1.5 * fringe;
  const double step = std::min(fringe / 15, window / 4);
  auto infid = [&](double T) { return noiseless_infidelity(with_duration(g, T), opt.propagator); };

  double best_T = T0, best = std::numeric_limits<double>::infinity(), best_pred = T0;
  for (int b = 0; b < std::max(1, opt.branches); ++b) {
    const double Tb = b == 0 ? T0 : solve(plateau + b * period);
    if (Tb > opt.T_max) break;
    const double lo = std::max(T_min + 1e-3, Tb - window);
    const int n = static_cast<int>(std::floor((Tb + window - lo) / step));
    double Ts = Tb, fs = infid(Tb);
    for (int k = 0; k <= n; ++k) {
      const double T = lo + k * step, f = infid(T);
      if (f < fs) fs = f, Ts = T;
    }
    const auto [T, f] = golden_min(infid, std::max(T_min + 1e-3, Ts - step), Ts + step, 1e-4);
    if (f < fs) fs = f, Ts = T;
    if (fs < best) best = fs, best_T = Ts, best_pred = Tb;
    if (best <= opt.refine_target) break;
  }
  g.predicted_T = best_pred;
  g.drive = dc_program(rz_pulse(tpl, best_T));
  return g;
}

double rabi_angle_objective(const DeviceParams& p, double phi, const RxTemplate& tpl, double E_ac, double T) {
  const DriveProgram d = rx_program(tpl, E_ac, 0.0, 0.0, T);
  auto rabi = [&](double t) {
    const double e = d.ac.value(t);
    return e == 0.0 ? 0.0 : floquet_reduce(ac_coefficients(p, tpl.xif, e)).Omega_res;
  };
  const double a = d.dc.start + d.dc.ramp, b = d.dc.end() - d.dc.ramp;
  double integral = 0.0;
  if (b > a) {
    const double r = d.ac.ramp;
    std::vector<double> pts{a, b};
    if (d.ac.start + r > a && d.ac.start + r < b) pts.push_back(d.ac.start + r);
    if (d.ac.end() - r > a && d.ac.end() - r < b) pts.push_back(d.ac.end() - r);
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) integral += gl64().integrate(rabi, pts[k], pts[k + 1]);
  }
  return std::abs(wrap_2pi(integral) - phi);
}

GateDesign design_rx(const DeviceParams& p, double phi, const RxTemplate& tpl, const DesignOptions& opt) {
  p.validate();
  validate(tpl);
  if (!(phi > 0 && phi < units::two_pi)) throw ConfigError("gate.angle", "must lie in (0, 2pi)");

  GateDesign g;
  g.axis = Axis::x;
  g.angle = phi;
  g.params = p;
  g.frame = Frame::drive;
  g.R = tpl.R;
  g.sigma_ac = tpl.sigma_ac;
  g.E_ac = solve_ac_amplitude(p, tpl.xif, tpl.R);
  const FloquetModel fm = floquet_reduce(ac_coefficients(p, tpl.xif, g.E_ac));
  g.Omega_R = fm.Omega_R;
  const double drive_phase = fm.Omega_R < 0 ? std::numbers::pi : 0.0;

  auto theta = [&](double T) { return rabi_angle_objective(p, phi, tpl, g.E_ac, T); };
  constexpr double scan_step = 0.1;
  const double T_start = 2 * tpl.t_r + 1.0;
  double prev2 = std::numeric_limits<double>::infinity(), prev = theta(T_start);
  for (double T = T_start + scan_step; T <= opt.T_max; T += scan_step) {
    const double cur = theta(T);
    if (prev <= prev2 && prev <= cur) {
      const auto [Tm, th] = golden_min(theta, T - 2 * scan_step, T, 1e-9);
      if (th < 1e-3) {
        g.predicted_T = Tm;
        g.objective = th;
        g.drive = rx_program(tpl, g.E_ac, fm.omega_res, drive_phase, Tm);
        if (opt.refine) {
          const double w = opt.refine_window > 0 ? opt.refine_window : 0.3;
          const double lo = std::max(2 * tpl.t_r + 0.5, Tm - w), hi = Tm + w;
          auto infid = [&](double T2) { return noiseless_infidelity(with_duration(g, T2), opt.propagator); };
          g = with_duration(g, golden_min(infid, lo, hi, 1e-3).first);
        }
        return g;
      }
    }
    prev2 = prev;
    prev = cur;
  }
  throw DesignError("no Rx solution below T_max");
}

GateDesign with_duration(const GateDesign& g, double T) {
  GateDesign out = g;
  const double tr = g.drive.dc.ramp;
  if (!(T > 2 * tr)) throw ConfigError("T", "duration must exceed 2 t_r");
  out.drive.dc.duration = T;
  if (g.drive.has_ac())
    out.drive.ac = ac_envelope_for(out.drive.dc, g.drive.ac.xif, g.drive.ac.sigma, g.drive.rho);
  return out;
}

GateResult simulate(const GateDesign& g, const PropagatorConfig& cfg, const PlantOffset& offset) {
  const Matrix8cd U = evolve(g.params, g.drive, cfg, offset);
  return rotating_frame_gate(U, g.params, g.drive, g.frame);
}

double noiseless_infidelity(const GateDesign& g, const PropagatorConfig& cfg) {
  return average_gate_fidelity(simulate(g, cfg), g.target()).infidelity();
}

std::string to_string(Axis a) { return a == Axis::z ? "z" : "x"; }

Axis axis_from_string(const std::string& s) {
  if (s == "z") return Axis::z;
  if (s == "x") return Axis::x;
  throw ConfigError("gate.axis", "must be \"z\" or \"x\"");
}

}  // namespace flipflop
