#include <cmath>

#include "doctest.h"
#include "flipflop/design.hpp"
#include "flipflop/effective.hpp"

using namespace flipflop;

namespace {

DeviceParams device(double B0, double vt) {
  DeviceParams p;
  p.B0 = B0;
  p.Vt_over_2pi = vt;
  return p;
}

RzTemplate rz_template(double xif, double t_r, double sigma) {
  RzTemplate t;
  t.xif = xif;
  t.t_r = t_r;
  t.sigma = sigma;
  return t;
}

RxTemplate rx_template(double xif, double R) {
  RxTemplate t;
  t.xif = xif;
  t.R = R;
  t.sigma = 1000;
  return t;
}

double wrap(double x) {
  x = std::fmod(x, 2 * M_PI);
  return x < 0 ? x + 2 * M_PI : x;
}

}  // namespace

TEST_CASE("Rz gate times") {
  struct Case {
    double B0, vt, xif, t_r, sigma, T, tol;
    int branch;
  };
  const Case cases[] = {{0.4, 11.44, -12, 0.9, 1, 23.0, 0.5, 0},
                        {0.4, 11.44, 0.4, 4.3, 70, 70.35, 1.0, 0},
                        {0.8, 22.55, -20, 0.9, 1, 12.36, 0.5, 0},
                        {1.2, 33.71, -30, 0.8, 1, 24.04, 0.5, 1}};
  for (const Case& c : cases) {
    DesignOptions opt;
    opt.branch = c.branch;
    const auto p = device(c.B0, c.vt);
    const auto tpl = rz_template(c.xif, c.t_r, c.sigma);
    const GateDesign g = design_rz(p, M_PI, tpl, opt);
    CHECK(g.gate_time() == doctest::Approx(c.T).epsilon(c.tol / c.T));
    CHECK(g.gate_time() > 2 * c.t_r);
    CHECK(g.frame == Frame::idle);
    // accumulated phase is -phi mod 2 pi
    const double err = wrap(rz_rotation_angle(p, g.drive.dc) - M_PI + M_PI) - M_PI;
    CHECK(std::abs(err) < 1e-6);
  }
}

TEST_CASE("Rz phase integral") {
  const auto p = device(0.4, 11.44);
  PlanckTaperPulse dc;
  dc.xi0 = 60;
  dc.xif = -12;
  dc.ramp = 0.9;
  dc.sigma = 1;
  // brute-force trapezoid oracle
  dc.duration = 10;
  const double idle = static_quantities<double>(p, 60.0).eps_s_minus;
  double ref = 0;
  const int n = 200000;
  for (int i = 0; i <= n; ++i) {
    const double t = dc.duration * i / n, w = (i == 0 || i == n) ? 0.5 : 1.0;
    ref += w * (flipflop_transition_energy<double>(p, dc.value(t)) - idle);
  }
  ref *= -dc.duration / n;
  CHECK(rz_rotation_angle(p, dc) == doctest::Approx(ref).epsilon(1e-8));

  // strictly monotone in the plateau length, slope -(eps_ff(xif) - eps_s(xi0))
  const double rate = flipflop_transition_energy<double>(p, -12.0) - idle;
  double prev = 0;
  for (double T = 2.0; T < 40; T += 0.5) {
    dc.duration = T;
    const double a = rz_rotation_angle(p, dc);
    if (T > 2.0) CHECK((prev - a) / 0.5 == doctest::Approx(rate).epsilon(1e-9));
    prev = a;
  }
}

TEST_CASE("Rz design is deterministic and rejects bad input") {
  const auto p = device(0.4, 11.44);
  const auto tpl = rz_template(-12, 0.9, 1);
  const GateDesign a = design_rz(p, M_PI, tpl), b = design_rz(p, M_PI, tpl);
  CHECK(a.gate_time() == b.gate_time());
  CHECK(a.predicted_T == b.predicted_T);
  CHECK_THROWS_AS(design_rz(p, 7.0, tpl), ConfigError);
  DesignOptions opt;
  opt.T_max = 10;
  CHECK_THROWS_AS(design_rz(p, M_PI, tpl, opt), DesignError);
  // later branches are one plateau period apart
  opt = {};
  opt.branch = 1;
  const GateDesign c = design_rz(p, M_PI, tpl, opt);
  const double rate = flipflop_transition_energy<double>(p, -12.0) - static_quantities<double>(p, 60.0).eps_s_minus;
  CHECK(c.gate_time() - a.gate_time() == doctest::Approx(2 * M_PI / std::abs(rate)).epsilon(1e-9));
}

TEST_CASE("identity target") {
  const auto p = device(0.8, 22.55);
  DesignOptions opt;
  opt.refine = true;
  const GateDesign g = design_rz(p, 0.0, rz_template(-20, 0.9, 1), opt);
  const double infid = noiseless_infidelity(g);
  CHECK(infid < 1e-5);
  MESSAGE("identity: T = " << g.gate_time() << " ns, infidelity " << infid);
}

TEST_CASE("Rabi angle objective") {
  const auto p = device(0.4, 12.5);
  const auto tpl = rx_template(0.0, 0.38);
  const double e = solve_ac_amplitude(p, 0.0, 0.38);
  CHECK(rabi_angle_objective(p, M_PI / 2, tpl, e, 2 * tpl.t_r) == doctest::Approx(M_PI / 2));

  const GateDesign g = design_rx(p, M_PI / 2, tpl);
  CHECK(rabi_angle_objective(p, M_PI / 2, tpl, e, g.gate_time()) < 1e-3);
  // a 0.01 ns scan brackets the minimum
  const double T = g.gate_time();
  const double lo = rabi_angle_objective(p, M_PI / 2, tpl, e, T - 0.01);
  const double hi = rabi_angle_objective(p, M_PI / 2, tpl, e, T + 0.01);
  const double mid = rabi_angle_objective(p, M_PI / 2, tpl, e, T);
  CHECK(mid < lo);
  CHECK(mid < hi);
  // continuity
  CHECK(std::abs(rabi_angle_objective(p, M_PI / 2, tpl, e, T + 1e-6) - mid) < 1e-5);
}

TEST_CASE("Rx designs") {
  struct Case {
    double B0, vt, xif, R, E_ac, T;
  };
  const Case cases[] = {{0.4, 12.5, 0, 0.38, 0.55, 23.86}, {0.8, 24.5, 0, 0.4, 0.94, 23.42},
                        {1.2, 34.5, 1.5, 0.4, 0.62, 24.23}};
  for (const Case& c : cases) {
    const auto p = device(c.B0, c.vt);
    const GateDesign g = design_rx(p, M_PI / 2, rx_template(c.xif, c.R));
    CHECK(g.E_ac == doctest::Approx(c.E_ac).epsilon(0.02 / c.E_ac));
    CHECK(g.gate_time() == doctest::Approx(c.T).epsilon(1.0 / c.T));
    CHECK(g.frame == Frame::drive);
    CHECK(g.objective < 1e-3);
    const auto f = floquet_reduce(ac_coefficients(p, c.xif, g.E_ac));
    CHECK(g.drive.omega == f.omega_res);
    CHECK(g.drive.ac.ramp == doctest::Approx((g.gate_time() - 2) / 2.1).epsilon(1e-12));
  }
}

TEST_CASE("Rx drive phase realizes the positive rotation") {
  const auto p = device(0.8, 24.5);
  const GateDesign g = design_rx(p, M_PI / 2, rx_template(0.0, 0.4));
  const GateResult r = simulate(g);
  const double plus = average_gate_fidelity(r, rx(M_PI / 2)).infidelity();
  const double minus = average_gate_fidelity(r, rx(-M_PI / 2)).infidelity();
  CHECK(plus < 1e-3);
  CHECK(minus > 0.5);
  MESSAGE("Rx(pi/2) beta noiseless infidelity " << plus << ", leakage " << r.leakage);
}

TEST_CASE("Rx pi versus pi/2 plateau") {
  const auto p = device(0.4, 12.5);
  const auto tpl = rx_template(0.0, 0.23);
  const double t2 = design_rx(p, M_PI / 2, tpl).gate_time() - 2 * tpl.t_r;
  const double t1 = design_rx(p, M_PI, tpl).gate_time() - 2 * tpl.t_r;
  CHECK(t1 / t2 == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(design_rx(p, 0.0, tpl), ConfigError);
  DesignOptions opt;
  opt.T_max = 5;
  CHECK_THROWS_AS(design_rx(p, M_PI / 2, tpl, opt), DesignError);
}

TEST_CASE("with_duration keeps ramps and rederives the ac envelope") {
  const auto p = device(0.4, 12.5);
  const GateDesign g = design_rx(p, M_PI / 2, rx_template(0.0, 0.38));
  const GateDesign h = with_duration(g, g.gate_time() + 0.5);
  CHECK(h.drive.dc.ramp == g.drive.dc.ramp);
  CHECK(h.gate_time() == doctest::Approx(g.gate_time() + 0.5));
  CHECK(h.drive.ac.ramp == doctest::Approx((h.gate_time() - 2) / 2.1));
  CHECK(h.drive.ac.xif == g.drive.ac.xif);
  CHECK_THROWS_AS(with_duration(g, 1.5), ConfigError);
}
