#pragma once

// Static flip-flop Hamiltonians in the three representations:
//
//   full_product    8x8, {|i>,|d>} x {up,down}_e x {up,down}_n, index o*4 + e*2 + n
//   flipflop_bare   4x4, {g updn, g dnup, e updn, e dnup} (orbital eigenbasis,
//                   bare flip-flop spin states)
//   spin_orbit_eigen 4x4, same ordering with the spin states replaced by the
//                   orbital-conditioned hyperfine eigenstates; the small
//                   eta/eps terms are dropped
//
// All matrices are in rad/ns.

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "flipflop/device.hpp"

namespace flipflop {

enum class Basis { flipflop_bare, spin_orbit_eigen, full_product };

template <typename Scalar, int Dim>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Dim, Dim>;

template <typename Scalar, int Dim>
struct HamiltonianMatrix {
  Basis basis;
  CMatrix<Scalar, Dim> matrix;
};

// Product-basis indices of the four states with m_S + m_I = 0.
inline constexpr std::array<int, 4> flipflop_indices{1, 2, 5, 6};
// Remaining conserved sectors, m_S + m_I = +1 and -1.
inline constexpr std::array<int, 2> parallel_up_indices{0, 4};
inline constexpr std::array<int, 2> parallel_down_indices{3, 7};

// -(bias/2) tau_z + (Vt/2) tau_x in {|i>, |d>}.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 2> orbital_hamiltonian(const DeviceParams& p, Scalar delta_E) {
  const auto q = static_quantities<Scalar>(p, delta_E);
  const Scalar vt = Scalar(units::two_pi) * Scalar(p.Vt_over_2pi);
  Eigen::Matrix<Scalar, 2, 2> h;
  h << -q.bias / 2, vt / 2, vt / 2, q.bias / 2;
  return h;
}

// Columns are |g> = cos(theta/2)|i> - sin(theta/2)|d> and
// |e> = sin(theta/2)|i> + cos(theta/2)|d>.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 2> orbital_eigenbasis(Scalar theta) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(theta / 2), s = sin(theta / 2);
  Eigen::Matrix<Scalar, 2, 2> o;
  o << c, s, -s, c;
  return o;
}

template <typename Scalar = double>
CMatrix<Scalar, 8> full_hamiltonian_matrix(const DeviceParams& p, Scalar delta_E) {
  using C = std::complex<Scalar>;
  const auto q = static_quantities<Scalar>(p, delta_E);
  const Eigen::Matrix<Scalar, 2, 2> orb = orbital_hamiltonian<Scalar>(p, delta_E);
  const Scalar ge_b = Scalar(units::two_pi) * Scalar(p.gamma_e_over_2pi) * Scalar(p.B0);
  const Scalar gn_b = Scalar(units::two_pi) * Scalar(p.gamma_n_over_2pi) * Scalar(1e-3) * Scalar(p.B0);
  const Scalar a = q.hyperfine;

  CMatrix<Scalar, 8> h = CMatrix<Scalar, 8>::Zero();
  for (int o = 0; o < 2; ++o)
    for (int o2 = 0; o2 < 2; ++o2)
      for (int s = 0; s < 4; ++s) h(o * 4 + s, o2 * 4 + s) += C(orb(o, o2));

  for (int o = 0; o < 2; ++o) {
    const Scalar electron_g = ge_b * (o == 0 ? Scalar(1) + Scalar(p.delta_gamma) : Scalar(1));
    const Scalar contact = (o == 1) ? a : Scalar(0);
    for (int e = 0; e < 2; ++e) {
      const Scalar sz = e == 0 ? Scalar(0.5) : Scalar(-0.5);
      for (int n = 0; n < 2; ++n) {
        const Scalar iz = n == 0 ? Scalar(0.5) : Scalar(-0.5);
        const int k = o * 4 + e * 2 + n;
        h(k, k) += C(electron_g * sz - gn_b * iz + contact * sz * iz);
      }
    }
    // (S+ I- + S- I+)/2 couples up-dn (e=0,n=1) and dn-up (e=1,n=0).
    h(o * 4 + 1, o * 4 + 2) += C(contact / 2);
    h(o * 4 + 2, o * 4 + 1) += C(contact / 2);
  }
  return h;
}

template <typename Scalar = double>
HamiltonianMatrix<Scalar, 8> build_full_hamiltonian(const DeviceParams& p, Scalar delta_E) {
  return {Basis::full_product, full_hamiltonian_matrix<Scalar>(p, delta_E)};
}

// The m_S + m_I = 0 block of an 8x8 product-basis operator, in the order
// {i updn, i dnup, d updn, d dnup}.
template <typename Scalar>
CMatrix<Scalar, 4> flipflop_block(const CMatrix<Scalar, 8>& h) {
  CMatrix<Scalar, 4> b;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) b(r, c) = h(flipflop_indices[r], flipflop_indices[c]);
  return b;
}

// Exact flip-flop Hamiltonian in the orbital eigenbasis. The Pauli form
// drops a constant -A/8; it is kept here so spectra match the 8x8 model.
template <typename Scalar = double>
HamiltonianMatrix<Scalar, 4> build_flipflop_hamiltonian(const DeviceParams& p, Scalar delta_E) {
  using std::cos;
  using std::sin;
  using C = std::complex<Scalar>;
  const auto q = static_quantities<Scalar>(p, delta_E);
  const Scalar s = sin(q.theta), c = cos(q.theta), a = q.hyperfine, dz = q.delta_epsz;

  Eigen::Matrix<Scalar, 2, 2> tz, tx, id;
  tz << 1, 0, 0, -1;
  tx << 0, 1, 1, 0;
  id.setIdentity();
  auto kron = [](const Eigen::Matrix<Scalar, 2, 2>& l, const Eigen::Matrix<Scalar, 2, 2>& r) {
    Eigen::Matrix<Scalar, 4, 4> out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = l(i, j) * r;
    return out;
  };

  Eigen::Matrix<Scalar, 4, 4> h = -q.eps0 / 2 * kron(tz, id) + q.epsz / 2 * kron(id, tz) +
                                  dz / 4 * (kron(id, tz) + s * kron(tx, tz) + c * kron(tz, tz)) +
                                  a / 8 *
                                      (2 * kron(id, tx) - 2 * s * kron(tx, tx) - 2 * c * kron(tz, tx) +
                                       s * kron(tx, id) + c * kron(tz, id) - kron(id, id));
  return {Basis::flipflop_bare, h.template cast<C>()};
}

// Approximate Hamiltonian in the spin-orbit eigenbasis, terms of order
// A/eps and delta_epsz/eps neglected.
template <typename Scalar = double>
HamiltonianMatrix<Scalar, 4> build_eigenbasis_hamiltonian(const DeviceParams& p, Scalar delta_E) {
  using std::cos;
  using std::sin;
  using C = std::complex<Scalar>;
  const auto q = static_quantities<Scalar>(p, delta_E);
  const Scalar s = sin(q.theta), c = cos(q.theta), a = q.hyperfine, dz = q.delta_epsz;
  const Scalar tilt = a * c / 8;
  Eigen::Matrix<Scalar, 4, 4> h = Eigen::Matrix<Scalar, 4, 4>::Zero();
  h(0, 0) = -(q.eps0 - q.eps_s_minus) / 2 + tilt;
  h(1, 1) = -(q.eps0 + q.eps_s_minus) / 2 + tilt;
  h(2, 2) = (q.eps0 + q.eps_s_plus) / 2 - tilt;
  h(3, 3) = (q.eps0 - q.eps_s_plus) / 2 - tilt;
  h(0, 2) = h(2, 0) = (a + 2 * dz) * s / 8;
  h(1, 3) = h(3, 1) = (a - 2 * dz) * s / 8;
  h(0, 3) = h(3, 0) = -a * s / 4;
  h(1, 2) = h(2, 1) = -a * s / 4;
  return {Basis::spin_orbit_eigen, h.template cast<C>()};
}

template <typename Scalar>
struct Spectrum {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;  // ascending
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> vectors;
};

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& h, double rel_tol = 1e-12) {
  if (h.rows() != h.cols()) return false;
  const auto scale = h.cwiseAbs().maxCoeff();
  const auto defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
  return defect <= rel_tol * (scale > 0 ? scale : 1);
}

// Sorted eigenpairs of a Hermitian matrix; rejects non-Hermitian input.
template <typename Derived>
auto eigen_spectrum(const Eigen::MatrixBase<Derived>& h) {
  using C = typename Derived::Scalar;
  using Scalar = typename Eigen::NumTraits<C>::Real;
  if (!is_hermitian(h)) throw ConfigError("", "eigen_spectrum: matrix is not Hermitian");
  const Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> dense = h;
  Eigen::SelfAdjointEigenSolver<decltype(dense)> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen_spectrum: solver did not converge");
  return Spectrum<Scalar>{solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar, int Dim>
auto eigen_spectrum(const HamiltonianMatrix<Scalar, Dim>& h) {
  return eigen_spectrum(h.matrix);
}

// Sorted eigenvalues of the flip-flop sector of the 8x8 Hamiltonian; the
// qubit transition energy is levels[1] - levels[0].
template <typename Scalar = double>
Eigen::Matrix<Scalar, 4, 1> flipflop_levels(const DeviceParams& p, Scalar delta_E) {
  const CMatrix<Scalar, 4> block = flipflop_block<Scalar>(full_hamiltonian_matrix<Scalar>(p, delta_E));
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar, 4>> solver(block, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

template <typename Scalar = double>
Scalar numerical_transition_energy(const DeviceParams& p, Scalar delta_E) {
  const auto levels = flipflop_levels<Scalar>(p, delta_E);
  return levels(1) - levels(0);
}

}  // namespace flipflop
