// Two-phonon density-matrix dynamics over the ordered basis
//   |0_L 0_R>, |1_L 0_R>, |0_L 1_R>, |1_L 1_R>:
//   d rho/dt = -i omega [H, rho] - (Lambda/2) Gamma[rho],
// with the commutator and dissipator given entrywise below. The analytic
// solution holds for the Bell-like initial state (|10> + |01>)/sqrt(2);
// arbitrary initial states go through the adaptive RK45 integrator.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "csl/constants.hpp"
#include "csl/formfactor.hpp"

namespace csl {

using DensityMatrix4 = Eigen::Matrix4cd;
using Complex = std::complex<double>;

// Invariant checks on a physical state.
inline void check_density_matrix(const DensityMatrix4& rho,
                                 double herm_tol = 1e-12,
                                 double trace_tol = 1e-12,
                                 double eig_tol = 1e-10) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw std::runtime_error("density matrix not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > trace_tol)
    throw std::runtime_error("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<DensityMatrix4> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -eig_tol)
    throw std::runtime_error("density matrix not positive semidefinite");
}

struct EvolutionParams {
  double omega;    // s^-1, frequency in the commutator term
  double Lambda;   // s^-1, CSL rate, Lambda = 4 eta delta_z^2
  Complex Omega;   // sqrt(Lambda^2 - 4 omega^2), imaginary in the oscillatory regime

  EvolutionParams(double omega_, double Lambda_) : omega(omega_), Lambda(Lambda_) {
    if (Lambda < 0.0 || omega < 0.0)
      throw std::invalid_argument("EvolutionParams: rates must be >= 0");
    Omega = std::sqrt(Complex(Lambda * Lambda - 4.0 * omega * omega, 0.0));
  }

  static EvolutionParams from_eta(const EtaResult& eta, const PhononGeometry& g) {
    return EvolutionParams(g.omega, 4.0 * eta.eta * g.delta_z * g.delta_z);
  }
};

// [H, rho] for H = diag(0, 1, 1, 2) (phonon number); anti-Hermitian for
// Hermitian rho.
inline DensityMatrix4 commutator_h(const DensityMatrix4& rho) {
  static const double n[4] = {0.0, 1.0, 1.0, 2.0};
  DensityMatrix4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = (n[i] - n[j]) * rho(i, j);
  return out;
}

// The dissipator Gamma[rho], written out entrywise. trace(Gamma[rho]) = 0
// identically; Hermiticity is preserved.
inline DensityMatrix4 gamma_dissipator(const DensityMatrix4& r) {
  DensityMatrix4 g;
  g(0, 0) = 2.0 * r(0, 0) - r(1, 1) - r(2, 2);
  g(0, 1) = 2.0 * r(0, 1) - r(1, 0) - r(2, 3);
  g(0, 2) = 2.0 * r(0, 2) - r(1, 3) - r(2, 0);
  g(0, 3) = 2.0 * r(0, 3) - r(1, 2) - r(2, 1);
  g(1, 0) = 2.0 * r(1, 0) - r(0, 1) - r(3, 2);
  g(1, 1) = 2.0 * r(1, 1) - r(0, 0) - r(3, 3);
  g(1, 2) = 2.0 * r(1, 2) - r(3, 0) - r(0, 3);
  g(1, 3) = 2.0 * r(1, 3) - r(0, 2) - r(3, 1);
  g(2, 0) = 2.0 * r(2, 0) - r(3, 1) - r(0, 2);
  g(2, 1) = 2.0 * r(2, 1) - r(3, 0) - r(0, 3);
  g(2, 2) = 2.0 * r(2, 2) - r(3, 3) - r(0, 0);
  g(2, 3) = 2.0 * r(2, 3) - r(3, 2) - r(0, 1);
  g(3, 0) = 2.0 * r(3, 0) - r(2, 1) - r(1, 2);
  g(3, 1) = 2.0 * r(3, 1) - r(2, 0) - r(1, 3);
  g(3, 2) = 2.0 * r(3, 2) - r(2, 3) - r(1, 0);
  g(3, 3) = 2.0 * r(3, 3) - r(2, 2) - r(1, 1);
  return g;
}

// Bell-like initial state (|1_L 0_R> + |0_L 1_R>)/sqrt(2).
inline DensityMatrix4 bell_initial_state() {
  DensityMatrix4 rho = DensityMatrix4::Zero();
  rho(1, 1) = rho(2, 2) = rho(1, 2) = rho(2, 1) = 0.5;
  return rho;
}

// Long-time limit: maximally mixed state on the 4D subspace.
inline DensityMatrix4 stationary_state() {
  return DensityMatrix4::Identity() * 0.25;
}

namespace detail {

// (cosh(z) - 1)/z^2 and sinh(z)/z, stable at z -> 0. z^2 is real for the
// arguments that arise (Omega real or purely imaginary), so both are real
// up to roundoff.
inline Complex cosh_m1_over_z2(Complex z) {
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return 0.5 + z2 / 24.0 + z2 * z2 / 720.0;
  }
  return (std::cosh(z) - 1.0) / (z * z);
}

inline Complex sinh_over_z(Complex z) {
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

}  // namespace detail

// Printed solution for the Bell-like initial state. Valid for all
// parameter regimes; the Omega = 0 point is covered by the series limits
// of (cosh-1)/Omega^2 and sinh/Omega.
inline DensityMatrix4 evolve_analytic(const EvolutionParams& p, double t) {
  if (t < 0.0) throw std::invalid_argument("evolve_analytic: t must be >= 0");
  const double L = p.Lambda, w = p.omega;
  const Complex z = p.Omega * t;
  const Complex f1 = detail::cosh_m1_over_z2(z);  // (cosh(Ot)-1)/(Ot)^2
  const Complex f2 = detail::sinh_over_z(z);      // sinh(Ot)/(Ot)
  const double decay = std::exp(-L * t);
  const double decay2 = std::exp(-2.0 * L * t);

  DensityMatrix4 rho = DensityMatrix4::Zero();
  rho(0, 0) = rho(3, 3) = 0.25 * (1.0 - decay2);
  rho(1, 1) = rho(2, 2) = 0.25 * (1.0 + decay2);
  // rho_14 = (L/2) e^{-Lt} (2 i w (cosh-1)/O^2 + sinh/O)
  //        = (L/2) e^{-Lt} (2 i w t^2 f1 + t f2)
  const Complex osc = 2.0 * Complex(0.0, 1.0) * w * t * t * f1 + t * f2;
  rho(0, 3) = 0.5 * L * decay * osc;
  rho(3, 0) = std::conj(rho(0, 3));
  // rho_23 = (1/2) e^{-Lt} (L^2 cosh - 4 w^2)/O^2 = (1/2) e^{-Lt} (1 + L^2 t^2 f1)
  const Complex r23 = 0.5 * decay * (1.0 + L * L * t * t * f1);
  if (std::abs(r23.imag()) > 1e-12)
    throw std::runtime_error("evolve_analytic: rho_23 acquired an imaginary part");
  rho(1, 2) = rho(2, 1) = r23.real();
  return rho;
}

// Adaptive Dormand-Prince RK5(4) on the master equation. Integrates in a
// dimensionless time scaled by max(Lambda, omega) so the step controller
// is well conditioned across the full rate range.
inline DensityMatrix4 evolve_numeric(const DensityMatrix4& rho0,
                                     const EvolutionParams& p, double t,
                                     double tol = 1e-12) {
  if (t < 0.0) throw std::invalid_argument("evolve_numeric: t must be >= 0");
  const double scale = std::max(p.Lambda, p.omega);
  if (t == 0.0 || scale == 0.0) return rho0;

  const double L = p.Lambda / scale, w = p.omega / scale;
  const double tau_end = t * scale;
  auto rhs = [&](const DensityMatrix4& rho) -> DensityMatrix4 {
    return Complex(0.0, -w) * commutator_h(rho) - 0.5 * L * gamma_dissipator(rho);
  };

  // Dormand-Prince coefficients
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784,  11.0 / 84, 0.0};
  static const double b4[7] = {5179.0 / 57600,  0.0,  7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  DensityMatrix4 rho = rho0;
  double tau = 0.0;
  double h = std::min(0.01, tau_end);
  DensityMatrix4 k[7];
  k[0] = rhs(rho);
  int rejected_in_a_row = 0;
  while (tau < tau_end) {
    h = std::min(h, tau_end - tau);
    for (int i = 1; i < 7; ++i) {
      DensityMatrix4 y = rho;
      for (int j = 0; j < i; ++j) y += h * a[i][j] * k[j];
      k[i] = rhs(y);
    }
    DensityMatrix4 y5 = rho, err = DensityMatrix4::Zero();
    for (int i = 0; i < 7; ++i) {
      y5 += h * b5[i] * k[i];
      err += h * (b5[i] - b4[i]) * k[i];
    }
    const double err_norm = err.cwiseAbs().maxCoeff();
    if (err_norm <= tol) {
      tau += h;
      rho = y5;
      k[0] = k[6];  // FSAL
      rejected_in_a_row = 0;
    } else {
      k[0] = rhs(rho);
      if (++rejected_in_a_row > 60)
        throw std::runtime_error("evolve_numeric: step size underflow");
    }
    const double factor =
        0.9 * std::pow(tol / std::max(err_norm, 1e-300), 0.2);
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < 1e-14 * tau_end)
      throw std::runtime_error("evolve_numeric: step size underflow");
  }
  // re-symmetrize roundoff
  rho = 0.5 * (rho + rho.adjoint().eval());
  return rho;
}

// Decoherence exponent 4 eta delta_z^2 T; the exclusion boundary is the
// level set exponent = threshold.
inline double decoherence_exponent(double eta, const PhononGeometry& g) {
  if (eta < 0.0) throw std::invalid_argument("decoherence_exponent: eta must be >= 0");
  return 4.0 * eta * g.delta_z * g.delta_z * g.probe_delay;
}

}  // namespace csl
