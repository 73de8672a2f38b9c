// operator2.hpp — Exact 2x2 complex operator algebra in the (e, g) basis
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "retroatom/errors.hpp"

namespace retroatom {

using Complex = std::complex<double>;

// Basis ordering is fixed everywhere as (e, g): index 0 is the excited state.
inline constexpr int kExcited = 0;
inline constexpr int kGround = 1;

// Dense 2x2 complex operator with entry(r, c) = <r|A|c>. Entries are checked
// finite at construction, so downstream code never sees NaN or Inf.
class Operator2 {
 public:
  Operator2() : e_{} {}

  Operator2(Complex ee, Complex eg, Complex ge, Complex gg) : e_{ee, eg, ge, gg} {
    for (const Complex& z : e_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw NonPhysicalError("operator entry is not finite");
      }
    }
  }

  static Operator2 zero() { return {}; }
  static Operator2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  // |row><col| in the (e, g) basis.
  static Operator2 ketbra(int row, int col) {
    Operator2 a;
    a.e_[2 * row + col] = 1.0;
    return a;
  }

  Complex entry(int row, int col) const { return e_[2 * row + col]; }
  Complex ee() const { return e_[0]; }
  Complex eg() const { return e_[1]; }
  Complex ge() const { return e_[2]; }
  Complex gg() const { return e_[3]; }

  Complex trace() const { return e_[0] + e_[3]; }

  Operator2 dagger() const {
    return {std::conj(e_[0]), std::conj(e_[2]), std::conj(e_[1]), std::conj(e_[3])};
  }

  double inf_norm() const {
    double m = 0.0;
    for (const Complex& z : e_) m = std::max(m, std::abs(z));
    return m;
  }

  friend Operator2 operator+(const Operator2& a, const Operator2& b) {
    return {a.e_[0] + b.e_[0], a.e_[1] + b.e_[1], a.e_[2] + b.e_[2], a.e_[3] + b.e_[3]};
  }
  friend Operator2 operator-(const Operator2& a, const Operator2& b) {
    return {a.e_[0] - b.e_[0], a.e_[1] - b.e_[1], a.e_[2] - b.e_[2], a.e_[3] - b.e_[3]};
  }
  friend Operator2 operator*(Complex s, const Operator2& a) {
    return {s * a.e_[0], s * a.e_[1], s * a.e_[2], s * a.e_[3]};
  }
  friend Operator2 operator*(const Operator2& a, Complex s) { return s * a; }
  friend Operator2 operator*(const Operator2& a, const Operator2& b) {
    return {a.e_[0] * b.e_[0] + a.e_[1] * b.e_[2], a.e_[0] * b.e_[1] + a.e_[1] * b.e_[3],
            a.e_[2] * b.e_[0] + a.e_[3] * b.e_[2], a.e_[2] * b.e_[1] + a.e_[3] * b.e_[3]};
  }

 private:
  std::array<Complex, 4> e_;  // row-major: ee, eg, ge, gg
};

// Hilbert-Schmidt inner product Tr(A†B).
inline Complex hs_inner(const Operator2& a, const Operator2& b) {
  Complex acc = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) acc += std::conj(a.entry(r, c)) * b.entry(r, c);
  return acc;
}

inline bool is_hermitian(const Operator2& a, double tol) {
  return (a - a.dagger()).inf_norm() <= tol;
}

// Closed-form eigenvalues of a 2x2 Hermitian operator, returned ascending.
// Computed from the Hermitian part, so callers only need Hermiticity within
// their own tolerance.
inline std::pair<double, double> hermitian_eigenvalues(const Operator2& a) {
  const double mean = 0.5 * (a.ee().real() + a.gg().real());
  const double half_gap = 0.5 * (a.ee().real() - a.gg().real());
  const Complex off = 0.5 * (a.eg() + std::conj(a.ge()));
  const double radius = std::hypot(half_gap, std::abs(off));
  return {mean - radius, mean + radius};
}

// sigma_1 = |e><g| + |g><e|, sigma_2 = i(|g><e| - |e><g|),
// sigma_3 = |e><e| - |g><g|.
inline Operator2 pauli(int index) {
  switch (index) {
    case 1:
      return {0.0, 1.0, 1.0, 0.0};
    case 2:
      return {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0};
    case 3:
      return {1.0, 0.0, 0.0, -1.0};
    default:
      throw std::invalid_argument("pauli index must be 1, 2 or 3");
  }
}

inline Operator2 sigma_plus() { return Operator2::ketbra(kExcited, kGround); }
inline Operator2 sigma_minus() { return Operator2::ketbra(kGround, kExcited); }

}  // namespace retroatom
