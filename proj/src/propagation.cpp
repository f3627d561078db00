#include "flipflop/propagation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "flipflop/hamiltonian.hpp"
#include "flipflop/quadrature.hpp"

namespace flipflop {

namespace {

using C = std::complex<double>;

constexpr std::array<int, 2> up_idx = parallel_up_indices;
constexpr std::array<int, 4> ff_idx = flipflop_indices;
constexpr std::array<int, 2> down_idx = parallel_down_indices;

template <int N>
Eigen::Matrix<double, N, N> restrict(const Matrix8d& h, const std::array<int, N>& idx) {
  Eigen::Matrix<double, N, N> b;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) b(r, c) = h(idx[r], idx[c]);
  return b;
}

// exp(-i h H) for real symmetric H.
template <int N>
Eigen::Matrix<C, N, N> expm_symmetric(const Eigen::Matrix<double, N, N>& H, double h) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es;
  if constexpr (N == 2) es.computeDirect(H);
  else es.compute(H);
  const auto& v = es.eigenvectors();
  Eigen::Matrix<C, N, 1> ph;
  for (int k = 0; k < N; ++k) ph(k) = std::polar(1.0, -h * es.eigenvalues()(k));
  return v.template cast<C>() * ph.asDiagonal() * v.transpose().template cast<C>();
}

struct Sectors {
  Eigen::Matrix2cd up = Eigen::Matrix2cd::Identity();
  Eigen::Matrix4cd ff = Eigen::Matrix4cd::Identity();
  Eigen::Matrix2cd down = Eigen::Matrix2cd::Identity();

  void apply(const Matrix8d& H, double h) {
    up = expm_symmetric<2>(restrict<2>(H, up_idx), h) * up;
    ff = expm_symmetric<4>(restrict<4>(H, ff_idx), h) * ff;
    down = expm_symmetric<2>(restrict<2>(H, down_idx), h) * down;
  }

  Matrix8cd assemble() const {
    Matrix8cd u = Matrix8cd::Zero();
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        u(up_idx[r], up_idx[c]) = up(r, c);
        u(down_idx[r], down_idx[c]) = down(r, c);
      }
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) u(ff_idx[r], ff_idx[c]) = ff(r, c);
    return u;
  }
};

class Plant {
 public:
  Plant(const DeviceParams& p, const DriveProgram& d, Picture picture, const PlantOffset& off)
      : p_(p), d_(d), picture_(picture), offset_(off.field_kVm) {
    p_.Vt_over_2pi += off.tunnel_GHz;
  }

  Matrix8d operator()(double t) const {
    const Matrix8d h = lab_hamiltonian(p_, d_.field(t) + offset_);
    if (picture_ == Picture::lab) return h;
    const Matrix8d r = orbital_frame(p_, d_.dc.value(t) + offset_);
    return r.transpose() * h * r;
  }

  Matrix8d frame(double t) const {
    if (picture_ == Picture::lab) return Matrix8d::Identity();
    return orbital_frame(p_, d_.dc.value(t) + offset_);
  }

 private:
  DeviceParams p_;
  const DriveProgram& d_;
  Picture picture_;
  double offset_;
};

std::vector<double> breakpoints(const DriveProgram& d, double t0, double t1) {
  std::vector<double> pts{t0, t1};
  auto add = [&](const PlanckTaperPulse& q) {
    for (double t : {q.start, q.start + q.ramp, q.end() - q.ramp, q.end()})
      if (t > t0 && t < t1) pts.push_back(t);
  };
  add(d.dc);
  if (d.has_ac()) add(d.ac);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            pts.end());
  return pts;
}

Sectors propagate_fixed(const Plant& H, const std::vector<double>& pts, double step, StepMethod method) {
  static const double s3 = std::sqrt(3.0);
  static const double c1 = 0.5 - s3 / 6, c2 = 0.5 + s3 / 6;
  static const double a1 = (3 - 2 * s3) / 12, a2 = (3 + 2 * s3) / 12;
  Sectors u;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double len = pts[k + 1] - pts[k];
    const int n = std::max(1, static_cast<int>(std::ceil(len / step - 1e-9)));
    const double h = len / n;
    for (int i = 0; i < n; ++i) {
      const double t = pts[k] + i * h;
      if (method == StepMethod::midpoint) {
        u.apply(H(t + 0.5 * h), h);
      } else {
        const Matrix8d h1 = H(t + c1 * h), h2 = H(t + c2 * h);
        u.apply(a2 * h1 + a1 * h2, h);
        u.apply(a1 * h1 + a2 * h2, h);
      }
    }
  }
  return u;
}

}  // namespace

Matrix8d lab_hamiltonian(const DeviceParams& p, double delta_E) {
  const double bias = p.dipole() * delta_E, vt = p.tunnel();
  const double ge = p.gamma_e() * p.B0, gn = p.gamma_n() * p.B0, a = p.hyperfine();
  Matrix8d h = Matrix8d::Zero();
  for (int s = 0; s < 4; ++s) {
    h(s, s) = -bias / 2;
    h(4 + s, 4 + s) = bias / 2;
    h(s, 4 + s) = h(4 + s, s) = vt / 2;
  }
  for (int o = 0; o < 2; ++o) {
    const double g = o == 0 ? ge * (1 + p.delta_gamma) : ge;
    const double contact = o == 1 ? a : 0.0;
    for (int e = 0; e < 2; ++e)
      for (int n = 0; n < 2; ++n) {
        const double sz = e == 0 ? 0.5 : -0.5, iz = n == 0 ? 0.5 : -0.5;
        const int k = o * 4 + e * 2 + n;
        h(k, k) += g * sz - gn * iz + contact * sz * iz;
      }
    h(o * 4 + 1, o * 4 + 2) += contact / 2;
    h(o * 4 + 2, o * 4 + 1) += contact / 2;
  }
  return h;
}

Matrix8d orbital_frame(const DeviceParams& p, double delta_E) {
  const double theta = std::atan2(p.tunnel(), p.dipole() * delta_E);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix8d r = Matrix8d::Zero();
  for (int k = 0; k < 4; ++k) {
    r(k, k) = c;
    r(k, 4 + k) = s;
    r(4 + k, k) = -s;
    r(4 + k, 4 + k) = c;
  }
  return r;
}

double effective_step(const DeviceParams& p, const DriveProgram& d, const PropagatorConfig& cfg) {
  const double ac = d.has_ac() ? std::abs(d.ac.xif) : 0.0;
  double emax = 0.0;
  for (double level : {d.dc.xi0, d.dc.xif})
    for (double sgn : {-1.0, 1.0}) {
      const double e = static_quantities<double>(p, level + sgn * ac).eps0;
      emax = std::max(emax, e);
    }
  const double f_max = units::to_GHz(emax);
  return std::min(cfg.max_step, 0.05 / f_max);
}

Matrix8cd evolve(const DeviceParams& p, const DriveProgram& d, const PropagatorConfig& cfg, double t0, double t1,
                 const PlantOffset& offset) {
  cfg.validate();
  if (!(t1 >= t0)) throw ConfigError("t1", "end time precedes start time");
  const Plant H(p, d, cfg.picture, offset);
  const auto pts = breakpoints(d, t0, t1);
  double step = effective_step(p, d, cfg);

  Matrix8cd u;
  if (cfg.method != StepMethod::adaptive) {
    u = propagate_fixed(H, pts, step, cfg.method).assemble();
  } else {
    Matrix8cd prev = propagate_fixed(H, pts, step, StepMethod::magnus4).assemble();
    bool converged = false;
    for (int k = 0; k < cfg.max_halvings; ++k) {
      step /= 2;
      u = propagate_fixed(H, pts, step, StepMethod::magnus4).assemble();
      if ((u - prev).cwiseAbs().maxCoeff() < cfg.rel_tol) {
        converged = true;
        break;
      }
      prev = u;
    }
    if (!converged) throw IntegrationError("propagator did not converge within the step-halving limit");
  }
  if (cfg.picture == Picture::orbital_adiabatic)
    u = H.frame(t1).cast<C>() * u * H.frame(t0).transpose().cast<C>();
  return u;
}

Eigen::Matrix<C, 8, 2> logical_basis(const DeviceParams& p, double delta_E) {
  const Matrix8d h = lab_hamiltonian(p, delta_E);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(restrict<4>(h, ff_idx));
  Eigen::Matrix<C, 8, 2> basis = Eigen::Matrix<C, 8, 2>::Zero();
  for (int col = 0; col < 2; ++col) {
    Eigen::Vector4d v = es.eigenvectors().col(col);
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    for (int r = 0; r < 4; ++r) basis(ff_idx[r], col) = v(r);
  }
  return basis;
}

namespace {

double logical_splitting(const DeviceParams& p, double delta_E) {
  const Matrix8d h = lab_hamiltonian(p, delta_E);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(restrict<4>(h, ff_idx), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1) - es.eigenvalues()(0);
}

// Integral of the logical splitting along the dc envelope over [a, b].
double splitting_integral(const DeviceParams& p, const PlanckTaperPulse& dc, double a, double b) {
  static const GaussLegendre gl(64);
  if (b <= a) return 0.0;
  std::vector<double> pts{a, b};
  for (double t : {dc.start, dc.start + dc.ramp / 2, dc.start + dc.ramp, dc.end() - dc.ramp,
                   dc.end() - dc.ramp / 2, dc.end()})
    if (t > a && t < b) pts.push_back(t);
  std::sort(pts.begin(), pts.end());
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    s += gl.integrate([&](double t) { return logical_splitting(p, dc.value(t)); }, pts[k], pts[k + 1], 8);
  return s;
}

}  // namespace

GateResult rotating_frame_gate(const Matrix8cd& U, const DeviceParams& p, const DriveProgram& d, Frame frame) {
  GateResult g;
  g.U_full = U;
  g.frame = frame;
  const double T = d.total_time();
  const auto P = logical_basis(p, d.dc.xi0);
  const Eigen::Matrix2cd raw = P.adjoint() * U * P;

  double psi0 = 0.0, psiT = 0.0;
  if (frame == Frame::idle || !d.has_ac()) {
    psiT = logical_splitting(p, d.dc.xi0) * T;
  } else {
    const double ta = d.ac.start, tb = d.ac.end();
    psi0 = d.omega * ta - splitting_integral(p, d.dc, 0.0, ta);
    psiT = d.omega * tb + splitting_integral(p, d.dc, tb, T);
  }
  auto F = [](double psi) {
    Eigen::Matrix2cd f = Eigen::Matrix2cd::Zero();
    f(0, 0) = std::polar(1.0, psi / 2);
    f(1, 1) = std::polar(1.0, -psi / 2);
    return f;
  };
  g.U_logical = F(psiT).adjoint() * raw * F(psi0);
  g.leakage = std::clamp(1.0 - (g.U_logical.adjoint() * g.U_logical).trace().real() / 2, 0.0, 1.0);
  return g;
}

FidelityResult average_gate_fidelity(const Eigen::Matrix2cd& Ut, const Eigen::Matrix2cd& target) {
  FidelityResult r;
  const double m = 2;
  r.F = ((Ut * Ut.adjoint()).trace().real() + std::norm((target.adjoint() * Ut).trace())) / (m * (m + 1));
  return r;
}

FidelityResult average_gate_fidelity(const GateResult& g, const Eigen::Matrix2cd& target) {
  return average_gate_fidelity(g.U_logical, target);
}

Eigen::Matrix2cd rz(double phi) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
  u(0, 0) = std::polar(1.0, -phi / 2);
  u(1, 1) = std::polar(1.0, phi / 2);
  return u;
}

Eigen::Matrix2cd rx(double phi) {
  Eigen::Matrix2cd u;
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  u << C(c, 0), C(0, -s), C(0, -s), C(c, 0);
  return u;
}

}  // namespace flipflop
