#include "flipflop/effective.hpp"

#include <algorithm>
#include <complex>
#include <limits>

#include "flipflop/quadrature.hpp"

namespace flipflop {

double transition_energy_slope(const DeviceParams& p, double delta_E, double h) {
  auto f = [&](double x) { return flipflop_transition_energy<double>(p, x); };
  return (f(delta_E - 2 * h) - 8 * f(delta_E - h) + 8 * f(delta_E + h) - f(delta_E + 2 * h)) / (12 * h);
}

EffectiveAcCoefficients ac_coefficients(const DeviceParams& p, double delta_E, double E_ac) {
  const auto q = static_quantities<double>(p, delta_E);
  const double eff = flipflop_transition_energy(q);
  const double a = q.hyperfine, e0 = q.eps0, es = q.eps_s_minus, dz = q.delta_epsz;
  const double D = q.delta_os_sq, D2 = D * D, D3 = D2 * D;
  const double s2 = std::sin(q.theta) * std::sin(q.theta), s4 = s2 * s2;
  const double x = p.dipole() * E_ac, x2 = x * x, x3 = x2 * x;
  const double e02 = e0 * e0, e04 = e02 * e02, es2 = es * es, es4 = es2 * es2, es6 = es4 * es2;
  const double poly91 = 91 * e04 - 126 * e02 * es2 + 51 * es4;

  EffectiveAcCoefficients c;
  c.eps_ac = x;

  c.omega_x[0] = a * s2 / (8 * D) *
                     (-dz * es + a * (2 * e02 - es2) / (2 * e0) -
                      a * a * e02 * (5 * a * e0 - 8 * dz * es) * s2 / (32 * D2)) +
                 a * x2 * s4 / (64 * D3) * (dz * es * (9 * e02 - es2) - a * poly91 / (16 * e0));
  c.omega_x[1] = -a * e0 * x * s2 / (2 * D) +
                 a * x * s4 / (128 * e0 * D3) *
                     (a * a * (10 * e02 - es2) * (e02 + es2) + x2 * (27 * e04 - 14 * e02 * es2 + 3 * es4));
  c.omega_x[2] = a * x2 * s4 / (32 * D3) *
                 (-dz * es * (5 * e02 - 2 * es2) + a * (59 * e04 - 102 * e02 * es2 + 27 * es4) / (16 * e0));
  c.omega_x[3] = -a * x3 * s4 * (13 * e04 - 34 * e02 * es2 + 5 * es4) / (128 * e0 * D3);

  c.omega_y[0] = a * a * x * s4 / (128 * D2) * (-9 * dz * es + a * (4 * e04 - 9 * e02 * es2 + 3 * es4) / (e0 * D));
  c.omega_y[1] = a * x2 * s4 / (32 * D3) * (-3 * dz * e02 * es - a * poly91 / (16 * e0));
  c.omega_y[2] = a * x3 * s4 * (27 * e04 - 14 * e02 * es2 + 3 * es4) / (128 * e0 * D3);

  c.eps_ff_c[0] = eff + a * x2 * s4 / (64 * D2) * (dz * (e02 + es2) / e0 + a * es * (9 * e02 - es2) / D);
  c.eps_ff_c[1] = dz * x * (2 * e02 - es2) * s2 / (4 * e0 * D) +
                  a * a * a * x * s4 * (4 * e02 * es - 3 * es2 * es) / (128 * D3) -
                  dz * x * s4 / (256 * e0 * D3) *
                      (x2 * poly91 + a * a * (28 * e04 - 11 * e02 * es2 + 6 * es4 - 3 * es6 / e02));
  c.eps_ff_c[2] = a * x2 * s4 / (16 * D2) * (-a * es * (5 * e02 - es2) / (2 * D) - dz * (e02 - 2 * es2) / e0);
  c.eps_ff_c[3] = dz * x3 * s4 * (25 * e02 - 13 * es2) / (64 * e0 * D2);
  return c;
}

Eigen::Matrix2cd ac_qubit_hamiltonian(const EffectiveAcCoefficients& c, double tau) {
  const double cs = std::cos(tau), sn = std::sin(tau);
  double hx = c.omega_x[0], hy = 0.0, hz = c.eps_ff_c[0];
  double cj = 1.0;
  for (int j = 1; j <= 3; ++j) {
    hy += c.omega_y[j - 1] * cj * sn;
    cj *= cs;
    hx += c.omega_x[j] * cj;
    hz += c.eps_ff_c[j] * cj;
  }
  using C = std::complex<double>;
  Eigen::Matrix2cd h;
  h << C(-hz / 2, 0), C(hx / 2, hy / 2), C(hx / 2, -hy / 2), C(hz / 2, 0);
  return h;
}

FloquetModel floquet_reduce(const EffectiveAcCoefficients& c) {
  FloquetModel f;
  f.omega_res = c.eps_ff_c[0] + c.eps_ff_c[2] / 2;
  f.Omega_R = (4 * c.omega_x[1] + 3 * c.omega_x[3] - 4 * c.omega_y[0] - c.omega_y[2]) / 8;
  f.Omega_res = std::abs(f.Omega_R);
  return f;
}

namespace {

constexpr int fourier_samples = 16;

// G_n with G(tau) = sum_n G_n e^{i n tau}, n = -7..7, index n + 7.
std::array<Eigen::Matrix2cd, 15> phase_harmonics(const EffectiveAcCoefficients& c) {
  std::array<Eigen::Matrix2cd, 15> g;
  for (auto& m : g) m.setZero();
  for (int k = 0; k < fourier_samples; ++k) {
    const double tau = units::two_pi * k / fourier_samples;
    const Eigen::Matrix2cd h = ac_qubit_hamiltonian(c, tau);
    for (int n = -7; n <= 7; ++n) g[n + 7] += h * std::polar(1.0 / fourier_samples, -n * tau);
  }
  return g;
}

}  // namespace

Eigen::MatrixXcd build_truncated_floquet(const EffectiveAcCoefficients& c, double omega, double phi, int M) {
  if (M < 1) throw ConfigError("M", "Floquet truncation must be >= 1");
  const auto g = phase_harmonics(c);
  const int blocks = 2 * M + 1;
  Eigen::MatrixXcd hf = Eigen::MatrixXcd::Zero(2 * blocks, 2 * blocks);
  for (int mp = -M; mp <= M; ++mp)
    for (int m = -M; m <= M; ++m) {
      const int n = mp - m;
      if (n < -7 || n > 7) continue;
      Eigen::Matrix2cd blk = g[n + 7] * std::polar(1.0, n * phi);
      if (n == 0) blk += m * omega * Eigen::Matrix2cd::Identity();
      hf.block<2, 2>(2 * (mp + M), 2 * (m + M)) = blk;
    }
  // Clean rounding asymmetry from the sampled transform.
  return (hf + hf.adjoint()) / 2.0;
}

double floquet_central_splitting(const EffectiveAcCoefficients& c, double omega, double phi, int M) {
  const Eigen::MatrixXcd hf = build_truncated_floquet(c, omega, phi, M);
  const int centre = 2 * M;  // block m = 0
  const double e0 = hf(centre, centre).real(), e1 = hf(centre + 1, centre + 1).real();
  const int k = std::abs(e1 - (e0 + omega)) <= std::abs(e1 - (e0 - omega)) ? 1 : -1;
  const double mid = 0.5 * (e1 + e0 + k * omega);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hf, Eigen::EigenvaluesOnly);
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + hf.rows());
  std::sort(ev.begin(), ev.end(), [&](double a, double b) { return std::abs(a - mid) < std::abs(b - mid); });
  return std::abs(ev[0] - ev[1]);
}

double solve_ac_amplitude(const DeviceParams& p, double delta_E, double R) {
  if (!(R > 0 && R < 0.5)) throw ConfigError("R", "must lie in (0, 0.5)");
  const auto q = static_quantities<double>(p, delta_E);
  const double gap = q.eps0 - flipflop_transition_energy(q);
  if (!(gap > 0)) throw DesignError("no ac amplitude: orbital splitting does not exceed eps_ff");
  return 4 * R * gap / (p.dipole() * std::sin(q.theta));
}

T1RatioInputs::Set t1_parameter_set(const DeviceParams& p, double delta_E) {
  const auto q = static_quantities<double>(p, delta_E);
  return {q.eps0, p.tunnel(), p.gamma_e() * p.B0};
}

double t1_ratio(const T1RatioInputs& in) {
  auto factor = [](const T1RatioInputs::Set& s) {
    const double e2 = s.eps0 * s.eps0, g2 = s.gamma_e_B0 * s.gamma_e_B0;
    if (std::abs(e2 - g2) <= 1e-12 * e2) throw ConfigError("eps0", "orbital splitting equals gamma_e B0 (pole)");
    if (!(s.Vt > 0 && s.gamma_e_B0 > 0)) throw ConfigError("Vt", "Vt and gamma_e B0 must be > 0");
    const double vt2 = s.Vt * s.Vt;
    return e2 * (e2 - g2) * (e2 - g2) / (vt2 * vt2 * g2 * s.gamma_e_B0);
  };
  return factor(in.i) / factor(in.j);
}

double dephasing_rate_estimate(const DeviceParams& p, double delta_E, double dEz_rms_Vm, int nodes) {
  if (!(dEz_rms_Vm > 0)) throw ConfigError("dEz_rms", "must be > 0");
  if (nodes < 32) throw ConfigError("nodes", "at least 32 quadrature nodes required");
  const GaussLegendre gl(nodes);
  const double half = std::sqrt(3.0) * units::kVm_from_Vm(dEz_rms_Vm);
  const double centre = flipflop_transition_energy<double>(p, delta_E);
  auto shift = [&](double d) { return flipflop_transition_energy<double>(p, delta_E + d) - centre; };
  const double width = 2 * half;
  const double mean = gl.integrate(shift, -half, half) / width;
  const double second = gl.integrate([&](double d) { return std::pow(shift(d) - mean, 2); }, -half, half) / width;
  return std::sqrt(std::max(second, 0.0));
}

ClockTransition locate_clock_transition(const DeviceParams& p, double lo, double hi) {
  if (!(hi > lo)) throw ConfigError("range", "upper bound must exceed lower bound");
  constexpr int samples = 400;
  auto slope = [&](double x) { return transition_energy_slope(p, x); };

  double best_x = lo, best = std::numeric_limits<double>::infinity();
  double prev_x = lo, prev = slope(lo);
  for (int i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double s = i == 0 ? prev : slope(x);
    if (i > 0 && (s == 0.0 || (s > 0) != (prev > 0))) {
      double a = prev_x, b = x, fa = prev;
      for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        const double m = 0.5 * (a + b), fm = slope(m);
        if ((fm > 0) == (fa > 0)) a = m, fa = fm;
        else b = m;
      }
      const double root = 0.5 * (a + b);
      return {root, slope(root), true};
    }
    if (std::abs(s) < best) best = std::abs(s), best_x = x;
    prev_x = x;
    prev = s;
  }

  const double step = (hi - lo) / samples;
  double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
  const double r = (std::sqrt(5.0) - 1) / 2;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = std::abs(slope(c)), fd = std::abs(slope(d));
  for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
    if (fc < fd) b = d, d = c, fd = fc, c = b - r * (b - a), fc = std::abs(slope(c));
    else a = c, c = d, fc = fd, d = a + r * (b - a), fd = std::abs(slope(d));
  }
  const double x = 0.5 * (a + b);
  return {x, slope(x), false};
}

}  // namespace flipflop
