// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.
// FLIPFLOP_ACCEPT_SAMPLES overrides the Monte Carlo sample counts for quick runs.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "flipflop/config.hpp"
#include "flipflop/effective.hpp"
#include "flipflop/hamiltonian.hpp"
#include "flipflop/io.hpp"
#include "flipflop/noise.hpp"
#include "flipflop/parallel.hpp"

using namespace flipflop;

namespace {

int failures = 0;

void report(bool ok, int id, const std::string& name, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& s) {
  std::printf("       %s\n", s.c_str());
  std::fflush(stdout);
}

template <typename... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig preset(const std::string& name) { return load_config(std::string(FLIPFLOP_PRESET_DIR) + "/" + name + ".json"); }

int samples(int n) {
  if (const char* s = std::getenv("FLIPFLOP_ACCEPT_SAMPLES")) return std::max(1, std::atoi(s));
  return n;
}

GateDesign design(const RunConfig& c) {
  const GateSpec& g = c.require_gate();
  return g.axis == Axis::z ? design_rz(c.device, g.angle, c.rz, c.design) : design_rx(c.device, g.angle, c.rx, c.design);
}

// |F - F_expected| within tol (percent) widened by 3 standard errors.
bool fidelity_ok(const InfidelityStat& s, double expected_percent, double tol_percent, std::string* detail) {
  const double F = 100 * (1 - s.mean_infidelity), band = tol_percent + 3 * 100 * s.std_error;
  *detail = fmt("F=%.5f%% (+-%.5f) vs %.3f%%", F, 100 * s.std_error, expected_percent);
  return std::abs(F - expected_percent) <= band;
}

void eps_ff_agreement() {
  DeviceParams p;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0, at = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = -40.0 + 0.01 * i;
    const double a = flipflop_transition_energy<double>(p, x), b = numerical_transition_energy<double>(p, x);
    const double e = std::abs(a - b) / std::abs(b);
    if (e > worst) worst = e, at = x;
  }
  const double dt = seconds_since(t0);
  report(worst < 1e-3 && dt < 1, 1, "eps_ff vs 8x8 gap",
         fmt("max rel err %.3g at %.2f kV/m (< 1e-3), 10001 points in %.3f s (< 1 s)", worst, at, dt));
}

void clock_transition() {
  DeviceParams p;
  const auto t0 = std::chrono::steady_clock::now();
  const ClockTransition c = locate_clock_transition(p, -2.0, 2.0);
  const double dt = seconds_since(t0);
  const bool in = c.delta_E >= 0.2 && c.delta_E <= 0.6;
  report(c.exact_root && in && dt < 1, 2, "clock transition in [0.2, 0.6] kV/m",
         fmt("%s at %.4f kV/m, slope %.4g MHz/(kV/m), %.3f s", c.exact_root ? "root" : "no sign change; min |slope|",
             c.delta_E, c.slope / units::two_pi * 1e3, dt));
}

struct RzCase {
  const char* name;
  double T, tol, F;
};
const RzCase rz_cases[] = {{"alpha", 70.35, 1.0, 99.95},
                           {"beta", 23.0, 0.5, 99.994},
                           {"gamma", 12.36, 0.5, 99.992},
                           {"delta", 24.04, 0.5, 99.993}};

std::vector<GateDesign> rz_designs() {
  std::vector<GateDesign> out;
  for (const RzCase& c : rz_cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const GateDesign g = design(preset(std::string("table1_rz_") + c.name));
    const double inf = noiseless_infidelity(g), dt = seconds_since(t0);
    const bool ok = std::abs(g.gate_time() - c.T) <= c.tol && inf <= 1e-5;
    report(ok, 3, std::string("Rz(pi) ") + c.name + " design",
           fmt("T=%.3f ns (%.2f +- %.2f), noiseless 1-F=%.3g (<= 1e-5), %.1f s", g.gate_time(), c.T, c.tol, inf, dt));
    out.push_back(g);
  }
  return out;
}

void rz_noise(const std::vector<GateDesign>& gs, const TunnelNoiseDelta& beta) {
  for (std::size_t k = 0; k < gs.size(); ++k) {
    const RzCase& c = rz_cases[k];
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = preset(std::string("table1_rz_") + c.name);
    cfg.noise.n_samples = samples(200);
    const InfidelityStat s = k == 1 ? beta.both : averaged_infidelity(gs[k], cfg.noise);
    std::string d;
    const bool ok = fidelity_ok(s, c.F, 0.01, &d);
    report(ok, 4, std::string("Rz(pi) ") + c.name + " noisy fidelity",
           d + fmt(", n=%d, dEz=%g V/m, dVt=%g MHz, %.0f s", s.n, cfg.noise.dEz_rms, cfg.noise.dVt_rms,
                   k == 1 ? 0.0 : seconds_since(t0)));
  }
}

struct RxCase {
  const char* name;
  double E_ac, T, F;
};
const RxCase rx_cases[] = {{"alpha", 0.55, 23.86, 99.98}, {"beta", 0.94, 23.42, 99.98}, {"gamma", 0.62, 24.23, 99.96}};

void rx_all(const GateDesign& alpha, const TunnelNoiseDelta& alpha_noise) {
  for (std::size_t k = 0; k < 3; ++k) {
    const RxCase& c = rx_cases[k];
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = preset(std::string("table2_rx_") + c.name);
    cfg.noise.n_samples = samples(200);
    const GateDesign g = k == 0 ? alpha : design(cfg);
    const InfidelityStat s = k == 0 ? alpha_noise.both : averaged_infidelity(g, cfg.noise);
    std::string d;
    const bool fok = fidelity_ok(s, c.F, 0.02, &d);
    const bool eok = std::abs(g.E_ac - c.E_ac) <= 0.02, tok = std::abs(g.gate_time() - c.T) <= 1.0;
    report(fok && eok && tok, 5, std::string("Rx(pi/2) ") + c.name,
           fmt("E_ac=%.4f kV/m (%.2f +- 0.02), T=%.3f ns (%.2f +- 1), noiseless 1-F=%.3g, ", g.E_ac, c.E_ac,
               g.gate_time(), c.T, noiseless_infidelity(g)) +
               d + fmt(", n=%d, %.0f s", s.n, seconds_since(t0)));
  }
}

void tunnel_subdominance(const char* name, const TunnelNoiseDelta& t) {
  const bool ok = 10 * std::abs(t.delta) <= t.field_only.mean_infidelity;
  report(ok, 6, std::string("tunnel noise subdominant, ") + name,
         fmt("delta=%.3g (+-%.2g), field-only 1-F=%.3g, ratio %.1f (>= 10)", t.delta, t.std_error,
             t.field_only.mean_infidelity, t.field_only.mean_infidelity / std::abs(t.delta)));
}

void map_threshold() {
  RunConfig c = preset("fig5a_map");
  c.noise.n_samples = samples(100);
  SweepGrid g = *c.sweep;
  g.delta_E_op = {0.0};
  g.Vt_GHz = {11.0};
  const auto t0 = std::chrono::steady_clock::now();
  const MapRow r = sweep_infidelity_map(g, c.device, c.noise).front();
  const double F = 1 - r.stat.mean_infidelity;
  const bool ok = r.stat.n > 0 && F < 0.994;
  report(ok, 7, "map at Vt=11.0 GHz, dE_op=0",
         r.stat.n > 0 ? fmt("F=%.4f%% (< 99.4%%), n=%d, %.0f s", 100 * F, r.stat.n, seconds_since(t0))
                      : "no gate: " + r.error);
  if (r.stat.n == 0) {
    g.Vt_GHz = {11.25};
    NoiseModel m = c.noise;
    m.n_samples = std::min(m.n_samples, 20);
    const MapRow s = sweep_infidelity_map(g, c.device, m).front();
    if (s.stat.n > 0) info(fmt("nearest feasible check: Vt=11.25 GHz gives F=%.3f%% (n=%d)", 100 * (1 - s.stat.mean_infidelity), s.stat.n));
  }
}

void t1() {
  const RunConfig c = preset("t1_ratio");
  auto set = [&](const T1Spec::Point& pt) {
    DeviceParams p = c.device;
    if (pt.B0) p.B0 = *pt.B0;
    if (pt.Vt_over_2pi) p.Vt_over_2pi = *pt.Vt_over_2pi;
    return t1_parameter_set(p, pt.delta_E);
  };
  const double r = std::log10(t1_ratio({set(c.t1.i), set(c.t1.j)}));
  report(r >= 5 && r <= 6.5, 8, "T1 ratio", fmt("log10 T1(%g)/T1(%g) = %.3f in [5, 6.5]", c.t1.i.delta_E, c.t1.j.delta_E, r));
}

void sensitivity(const GateDesign& beta) {
  NoiseModel m;
  m.dEz_rms = 100;
  m.n_samples = samples(100);
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = pulse_length_sensitivity(beta, {-0.5, -0.1, -0.05, 0.0, 0.05, 0.1, 0.5}, m);
  const double ref = rows[3].stat.mean_infidelity;
  bool ok = true;
  std::string d;
  for (const auto& r : rows) {
    const double x = r.stat.mean_infidelity / ref;
    d += fmt("%+.2f:%.3gx ", r.dt, x);
    if (std::abs(r.dt) <= 0.1 + 1e-12) ok = ok && x < 2 && x > 0.5;
    if (std::abs(r.dt) >= 0.5 - 1e-12) ok = ok && x >= 10;
  }
  report(ok, 9, "Rz(pi) beta pulse-length sensitivity",
         d + fmt("(1-F at 0: %.3g, n=%d, %.0f s)", ref, m.n_samples, seconds_since(t0)));
}

void properties(const GateDesign& rz_beta, const GateDesign& rx_alpha) {
  double unit = 0;
  for (const GateDesign* g : {&rz_beta, &rx_alpha}) {
    const Matrix8cd U = evolve(g->params, g->drive, {});
    unit = std::max(unit, (U.adjoint() * U - Matrix8cd::Identity()).cwiseAbs().maxCoeff());
  }
  report(unit < 1e-9, 10, "propagator unitarity", fmt("max |U^dag U - 1| = %.2g (< 1e-9)", unit));

  double phase = 0;
  const GateResult r = simulate(rx_alpha);
  for (double a : {0.3, 1.7, -2.9}) {
    GateResult s = r;
    s.U_logical *= std::polar(1.0, a);
    phase = std::max(phase, std::abs(average_gate_fidelity(s, rx_alpha.target()).F -
                                     average_gate_fidelity(r, rx_alpha.target()).F));
  }
  report(phase < 1e-14, 10, "fidelity global-phase invariance", fmt("max change %.2g", phase));

  struct Row {
    double B0, vt, dE, R;
  };
  const Row rows[] = {{0.4, 12.5, 0.0, 0.38}, {0.8, 24.5, 0.0, 0.4}, {1.2, 34.5, 1.5, 0.4},
                      {0.4, 11.44, 0.4, 0.23}, {0.4, 11.44, -12.0, 0.23}, {0.8, 22.55, -20.0, 0.23}};
  double floq = 0, parity = 0;
  for (const Row& w : rows) {
    DeviceParams p;
    p.B0 = w.B0;
    p.Vt_over_2pi = w.vt;
    const double e = solve_ac_amplitude(p, w.dE, w.R);
    const auto c = ac_coefficients(p, w.dE, e), m = ac_coefficients(p, w.dE, -e);
    const auto f = floquet_reduce(c);
    floq = std::max(floq, std::abs(floquet_central_splitting(c, -f.omega_res, 0.0, 10) / f.Omega_res - 1));
    auto odd = [&](double a, double b) { return std::abs(a + b) / std::max(1e-300, std::abs(a) + std::abs(b)); };
    auto even = [&](double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(a) + std::abs(b)); };
    for (int k : {1, 3}) parity = std::max({parity, odd(c.omega_x[k], m.omega_x[k]), odd(c.eps_ff_c[k], m.eps_ff_c[k])});
    for (int k : {0, 2}) parity = std::max({parity, even(c.omega_x[k], m.omega_x[k]), even(c.eps_ff_c[k], m.eps_ff_c[k]),
                                            odd(c.omega_y[k], m.omega_y[k])});
    parity = std::max(parity, even(c.omega_y[1], m.omega_y[1]));
  }
  report(floq < 1e-3, 10, "truncated Floquet vs analytic Rabi frequency",
         fmt("max relative difference %.3g over %zu operating points (< 1e-3)", floq, std::size(rows)));
  report(parity < 1e-12, 10, "parity of the ac coefficients in E_ac", fmt("max relative defect %.2g", parity));

  SweepGrid g;
  g.delta_E_op = {-20.0, -12.0};
  g.Vt_GHz = {22.55, 24.0};
  g.B0 = 0.8;
  g.axis = Axis::z;
  g.angle = M_PI;
  g.rz.t_r = 0.9;
  DeviceParams base;
  NoiseModel m;
  m.dEz_rms = 100;
  m.dVt_rms = 3.3;
  m.n_samples = 3;
  m.seed = 11;
  const std::string a = to_csv(map_table(sweep_infidelity_map(g, base, m, {1, {}})));
  const std::string b = to_csv(map_table(sweep_infidelity_map(g, base, m, {3, {}})));
  const std::string c = to_csv(map_table(sweep_infidelity_map(g, base, m, {1, {}})));
  report(a == b && a == c, 10, "bit-identical map CSV across runs and worker counts",
         fmt("%zu bytes, 1 vs 3 threads and repeat", a.size()));
}

}  // namespace

int main() {
  std::printf("acceptance: threads=%d\n", resolve_threads(0));
  eps_ff_agreement();
  clock_transition();
  const std::vector<GateDesign> rz = rz_designs();

  RunConfig ra = preset("table2_rx_alpha"), rb = preset("table1_rz_beta");
  const GateDesign rx_alpha = design(ra);
  rb.noise.n_samples = samples(200);
  ra.noise.n_samples = samples(200);
  const TunnelNoiseDelta beta_t = tunnel_noise_delta(rz[1], rb.noise);
  const TunnelNoiseDelta alpha_t = tunnel_noise_delta(rx_alpha, ra.noise);

  rz_noise(rz, beta_t);
  rx_all(rx_alpha, alpha_t);
  tunnel_subdominance("Rz(pi) beta", beta_t);
  tunnel_subdominance("Rx(pi/2) alpha", alpha_t);
  map_threshold();
  t1();
  sensitivity(rz[1]);
  properties(rz[1], rx_alpha);

  std::printf("acceptance: %d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
