#include "retroatom/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "retroatom/tolerances.hpp"

namespace retroatom {

ChannelParams ChannelParams::spontaneous(double gamma, double tau) {
  ChannelParams p{ChannelKind::SpontaneousEmission, gamma, 0.0, 0.0, tau};
  p.validate();
  return p;
}

ChannelParams ChannelParams::thermal(double gamma, double nbar, double tau) {
  ChannelParams p{ChannelKind::Thermal, gamma, nbar, 0.0, tau};
  p.validate();
  return p;
}

ChannelParams ChannelParams::driven(double gamma, double v, double tau) {
  ChannelParams p{ChannelKind::Driven, gamma, 0.0, v, tau};
  p.validate();
  return p;
}

ChannelParams ChannelParams::with_tau(double new_tau) const {
  ChannelParams p = *this;
  p.tau = new_tau;
  p.validate();
  return p;
}

void ChannelParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("channel gamma must be positive and finite");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("channel tau must be non-negative and finite");
  }
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw std::invalid_argument("channel nbar must be non-negative and finite");
  }
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("channel drive strength must be non-negative and finite");
  }
}

Superoperator Superoperator::identity() {
  Superoperator s;
  for (int i = 0; i < 4; ++i) s.set_entry(i, i, 1.0);
  return s;
}

Operator2 Superoperator::apply(const Operator2& a) const {
  const std::array<Complex, 4> vec{a.ee(), a.eg(), a.ge(), a.gg()};
  std::array<Complex, 4> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += m_[4 * i + j] * vec[j];
  return {out[0], out[1], out[2], out[3]};
}

Superoperator Superoperator::adjoint() const {
  Superoperator s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s.set_entry(i, j, std::conj(m_[4 * j + i]));
  return s;
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  Superoperator s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += a.entry(i, k) * b.entry(k, j);
      s.set_entry(i, j, acc);
    }
  return s;
}

double Superoperator::inf_norm_diff(const Superoperator& other) const {
  double m = 0.0;
  for (int i = 0; i < 16; ++i) m = std::max(m, std::abs(m_[i] - other.m_[i]));
  return m;
}

RabiTrig rabi_trig(double omega_sq, double tau) {
  const double x = omega_sq * tau * tau;  // (Omega tau)^2, sign carried
  if (std::abs(x) < 1e-8) {
    // |Omega| tau < 1e-4: both branches below lose accuracy, the series
    // does not.
    const double c = 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
    const double s = tau * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
    return {c, s};
  }
  if (omega_sq > 0.0) {
    const double omega = std::sqrt(omega_sq);
    return {std::cos(omega * tau), std::sin(omega * tau) / omega};
  }
  const double kappa = std::sqrt(-omega_sq);
  return {std::cosh(kappa * tau), std::sinh(kappa * tau) / kappa};
}

BlochVector driven_steady_state(double gamma, double v) {
  const double denom = v * v + 2.0 * gamma * gamma;
  return {0.0, 2.0 * gamma * v / denom, -2.0 * gamma * gamma / denom};
}

namespace {

// A = (t*1 + x*sigma_1 + y*sigma_2 + z*sigma_3) / 2 with complex
// coefficients, so the closed forms extend linearly to non-Hermitian
// operators (needed for the basis columns |e><g| and |g><e|).
struct PauliComponents {
  Complex t, x, y, z;
};

PauliComponents decompose(const Operator2& a) {
  return {a.ee() + a.gg(), a.eg() + a.ge(), Complex(0.0, 1.0) * (a.eg() - a.ge()),
          a.ee() - a.gg()};
}

Operator2 recompose(const PauliComponents& c) {
  const Complex i(0.0, 1.0);
  return {0.5 * (c.t + c.z), 0.5 * (c.x - i * c.y), 0.5 * (c.x + i * c.y),
          0.5 * (c.t - c.z)};
}

Operator2 apply_spontaneous(double gamma, double tau, const Operator2& a) {
  const double e1 = std::exp(-gamma * tau);
  const double e2 = e1 * e1;
  return {e2 * a.ee(), e1 * a.eg(), e1 * a.ge(), a.gg() + (1.0 - e2) * a.ee()};
}

Operator2 apply_thermal(double gamma, double nbar, double tau, const Operator2& a) {
  const double r = 2.0 * nbar + 1.0;
  const double e1 = std::exp(-gamma * r * tau);  // coherence decay
  const double e2 = e1 * e1;                     // population relaxation
  const double pe = nbar / r;                    // steady excited population
  const double pg = (nbar + 1.0) / r;
  const Complex ee = a.ee() * (pe + pg * e2) + a.gg() * (pe * (1.0 - e2));
  const Complex gg = a.gg() * (pg + pe * e2) + a.ee() * (pg * (1.0 - e2));
  return {ee, e1 * a.eg(), e1 * a.ge(), gg};
}

// Exact exponential of the Bloch-space generator of the driven master
// equation: the sigma_1 component decays at gamma, the (sigma_2, sigma_3)
// block rotates at the Rabi frequency inside an exp(-3 gamma tau / 2)
// envelope, and the trace sources the drift toward the steady state.
Operator2 apply_driven(double gamma, double v, double tau, const Operator2& a) {
  const PauliComponents in = decompose(a);
  const RabiTrig tr = rabi_trig(v * v - 0.25 * gamma * gamma, tau);
  const double decay = std::exp(-1.5 * gamma * tau);
  const double evv = decay * (tr.c + 0.5 * gamma * tr.s);
  const double evw = decay * (-v * tr.s);
  const double ewv = decay * (v * tr.s);
  const double eww = decay * (tr.c - 0.5 * gamma * tr.s);
  const BlochVector ss = driven_steady_state(gamma, v);

  PauliComponents out;
  out.t = in.t;
  out.x = std::exp(-gamma * tau) * in.x;
  out.y = evv * in.y + evw * in.z + in.t * (ss.v - evv * ss.v - evw * ss.w);
  out.z = ewv * in.y + eww * in.z + in.t * (ss.w - ewv * ss.v - eww * ss.w);
  return recompose(out);
}

Operator2 apply_closed_form(const ChannelParams& p, const Operator2& a) {
  switch (p.kind) {
    case ChannelKind::SpontaneousEmission:
      return apply_spontaneous(p.gamma, p.tau, a);
    case ChannelKind::Thermal:
      return apply_thermal(p.gamma, p.nbar, p.tau, a);
    case ChannelKind::Driven:
      return apply_driven(p.gamma, p.v, p.tau, a);
  }
  throw std::invalid_argument("unknown channel kind");
}

// 2 L rho L† - L†L rho - rho L†L
Operator2 dissipator(const Operator2& l, const Operator2& rho) {
  const Operator2 ld = l.dagger();
  const Operator2 ldl = ld * l;
  return 2.0 * (l * rho * ld) - ldl * rho - rho * ldl;
}

}  // namespace

Superoperator build_superoperator(const ChannelParams& params) {
  params.validate();
  Superoperator s;
  for (int col = 0; col < 4; ++col) {
    const Operator2 basis = Operator2::ketbra(col / 2, col % 2);
    const Operator2 image = apply_closed_form(params, basis);
    s.set_entry(0, col, image.ee());
    s.set_entry(1, col, image.eg());
    s.set_entry(2, col, image.ge());
    s.set_entry(3, col, image.gg());
  }
  return s;
}

Operator2 lindblad_rhs(const ChannelParams& params, const Operator2& rho) {
  params.validate();
  const double gamma = params.gamma;
  switch (params.kind) {
    case ChannelKind::SpontaneousEmission:
      return gamma * dissipator(sigma_minus(), rho);
    case ChannelKind::Thermal:
      return gamma * (params.nbar + 1.0) * dissipator(sigma_minus(), rho) +
             gamma * params.nbar * dissipator(sigma_plus(), rho);
    case ChannelKind::Driven: {
      const Operator2 h = 0.5 * params.v * pauli(1);
      const Complex i(0.0, 1.0);
      return -i * (h * rho - rho * h) + gamma * dissipator(sigma_minus(), rho);
    }
  }
  throw std::invalid_argument("unknown channel kind");
}

Operator2 integrate_lindblad_op(const ChannelParams& params, const Operator2& a0, int steps) {
  params.validate();
  if (steps < 1) {
    throw std::invalid_argument("step count must be positive");
  }
  if (params.tau == 0.0) return a0;

  const double h = params.tau / static_cast<double>(steps);
  Operator2 a = a0;
  for (int n = 0; n < steps; ++n) {
    const Operator2 k1 = lindblad_rhs(params, a);
    const Operator2 k2 = lindblad_rhs(params, a + (0.5 * h) * k1);
    const Operator2 k3 = lindblad_rhs(params, a + (0.5 * h) * k2);
    const Operator2 k4 = lindblad_rhs(params, a + h * k3);
    a = a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return a;
}

DensityMatrix integrate_lindblad(const ChannelParams& params, const DensityMatrix& rho0,
                                 int steps, bool* renormalized) {
  Operator2 a = integrate_lindblad_op(params, rho0.op(), steps);
  bool flagged = false;
  const double tr = a.trace().real();
  if (std::abs(tr - 1.0) > TRACE_DRIFT_TOL) {
    a = (1.0 / tr) * a;
    flagged = true;
  }
  if (renormalized != nullptr) *renormalized = flagged;
  return DensityMatrix(a, rho0.role());
}

std::array<Complex, 16> choi_matrix(const Superoperator& s) {
  std::array<Complex, 16> c{};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l)
          c[4 * (2 * i + k) + (2 * j + l)] = s.entry(2 * k + l, 2 * i + j);
  return c;
}

namespace {

using Mat4 = std::array<Complex, 16>;

Mat4 mat4_mul(const Mat4& a, const Mat4& b) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += a[4 * i + k] * b[4 * k + j];
      out[4 * i + j] = acc;
    }
  return out;
}

Mat4 mat4_dagger(const Mat4& a) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[4 * i + j] = std::conj(a[4 * j + i]);
  return out;
}

}  // namespace

std::array<double, 4> hermitian_eigenvalues4(std::array<Complex, 16> a) {
  auto at = [&a](int r, int c) -> Complex { return a[4 * r + c]; };

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += std::norm(at(p, q));
    if (off < 1e-30) break;

    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const Complex apq = at(p, q);
        const double abs_apq = std::abs(apq);
        if (abs_apq < 1e-18) continue;

        // Factor out the phase of the pivot, then a real Jacobi rotation
        // zeroes it: tan(2 theta) = 2|apq| / (aqq - app).
        const Complex phase = apq / abs_apq;
        const double zeta = (at(q, q).real() - at(p, p).real()) / (2.0 * abs_apq);
        const double sign = (zeta >= 0.0) ? 1.0 : -1.0;
        const double t = 1.0 / (zeta + sign * std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        Mat4 rot{};
        for (int i = 0; i < 4; ++i) rot[4 * i + i] = 1.0;
        rot[4 * p + p] = c;
        rot[4 * p + q] = s * phase;
        rot[4 * q + p] = -s * std::conj(phase);
        rot[4 * q + q] = c;

        a = mat4_mul(mat4_dagger(rot), mat4_mul(a, rot));
      }
    }
  }

  std::array<double, 4> ev{at(0, 0).real(), at(1, 1).real(), at(2, 2).real(),
                           at(3, 3).real()};
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace retroatom
