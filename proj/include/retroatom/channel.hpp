// channel.hpp — Predictive open-system evolution for the three atom-field
// couplings: exact superoperators plus an independent Runge-Kutta oracle
#pragma once

#include <array>

#include "retroatom/states.hpp"

namespace retroatom {

enum class ChannelKind { SpontaneousEmission, Thermal, Driven };

// Physical parameters selecting one channel. gamma is half the spontaneous
// A-coefficient, nbar the mean thermal occupation, v the drive strength
// (same units as gamma), tau the interval between preparation and
// measurement. All rates dimensionless apart from the shared 1/time unit.
struct ChannelParams {
  ChannelKind kind = ChannelKind::SpontaneousEmission;
  double gamma = 1.0;
  double nbar = 0.0;
  double v = 0.0;
  double tau = 0.0;

  static ChannelParams spontaneous(double gamma, double tau);
  static ChannelParams thermal(double gamma, double nbar, double tau);
  static ChannelParams driven(double gamma, double v, double tau);

  ChannelParams with_tau(double new_tau) const;
  void validate() const;
};

// Linear map on the four-dimensional operator space of the atom, stored as
// a dense 4x4 complex matrix acting on vec(A) = (A_ee, A_eg, A_ge, A_gg).
class Superoperator {
 public:
  Superoperator() : m_{} {}

  static Superoperator identity();

  Complex entry(int row, int col) const { return m_[4 * row + col]; }
  void set_entry(int row, int col, Complex value) { m_[4 * row + col] = value; }

  Operator2 apply(const Operator2& a) const;

  // Hilbert-Schmidt adjoint: the conjugate transpose of the matrix. For the
  // physical channels this is the (unnormalized) retrodictive map.
  Superoperator adjoint() const;

  // Composition: (a * b)(x) = a(b(x)).
  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

  double inf_norm_diff(const Superoperator& other) const;

 private:
  std::array<Complex, 16> m_;
};

// Exact superoperator for the channel: columns are the images of the four
// basis operators |i><k| under the closed-form channel action.
Superoperator build_superoperator(const ChannelParams& params);

// Right-hand side of the master equation for the channel (tau ignored).
Operator2 lindblad_rhs(const ChannelParams& params, const Operator2& rho);

// Classic fixed-step RK4 over [0, tau]. The operator overload integrates the
// linear master equation for an arbitrary initial operator and is the
// numerically independent oracle for every closed form above. The density
// overload additionally renormalizes when the trace drifts beyond
// TRACE_DRIFT_TOL and reports that through `renormalized`.
Operator2 integrate_lindblad_op(const ChannelParams& params, const Operator2& a0, int steps);
DensityMatrix integrate_lindblad(const ChannelParams& params, const DensityMatrix& rho0,
                                 int steps, bool* renormalized = nullptr);

// Bloch vector of the driven channel's fixed point.
BlochVector driven_steady_state(double gamma, double v);

// Choi matrix of the map, C[2i+k][2j+l] = <k| S(|i><j|) |l>. Positive
// semi-definite exactly when the map is completely positive.
std::array<Complex, 16> choi_matrix(const Superoperator& s);

// Eigenvalues of a 4x4 Hermitian matrix (row-major), ascending. Cyclic
// complex Jacobi; used for the complete-positivity checks.
std::array<double, 4> hermitian_eigenvalues4(std::array<Complex, 16> a);

// cos(Omega tau) and sin(Omega tau)/Omega for Omega^2 = omega_sq of either
// sign, with a series fallback near Omega = 0 so the overdamped drive
// regime stays smooth.
struct RabiTrig {
  double c = 1.0;  // cos(Omega tau), continued to cosh for omega_sq < 0
  double s = 0.0;  // sin(Omega tau)/Omega, continued to sinh/|Omega|
};
RabiTrig rabi_trig(double omega_sq, double tau);

}  // namespace retroatom
