#include <cmath>

#include <doctest.h>

#include "retroatom/channel.hpp"
#include "retroatom/tolerances.hpp"
#include "testutil.hpp"

using namespace retroatom;
using testutil::Rng;

TEST_CASE("channel parameters are validated") {
  CHECK_THROWS_AS(ChannelParams::spontaneous(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams::spontaneous(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams::spontaneous(1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams::thermal(1.0, -0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams::driven(1.0, -2.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(ChannelParams::thermal(2.0, 0.0, 0.0));
}

TEST_CASE("zero interval gives the identity map for every channel") {
  const Superoperator id = Superoperator::identity();
  CHECK(build_superoperator(ChannelParams::spontaneous(1.3, 0.0)).inf_norm_diff(id) == 0.0);
  CHECK(build_superoperator(ChannelParams::thermal(1.3, 0.7, 0.0)).inf_norm_diff(id) ==
        0.0);
  CHECK(build_superoperator(ChannelParams::driven(1.3, 2.0, 0.0)).inf_norm_diff(id) ==
        0.0);
}

TEST_CASE("undriven decay moves the excited population down at twice gamma") {
  const double gamma = 1.0, tau = 1.0;
  const Superoperator s = build_superoperator(ChannelParams::spontaneous(gamma, tau));
  const Operator2 out = s.apply(testutil::excited_projector());
  const double e2 = std::exp(-2.0);
  CHECK(out.ee().real() == doctest::Approx(e2).epsilon(1e-14));
  CHECK(out.gg().real() == doctest::Approx(1.0 - e2).epsilon(1e-14));
  CHECK(std::abs(out.eg()) <= 1e-15);

  // Coherences decay at gamma.
  const Operator2 coh = s.apply(Operator2::ketbra(0, 1));
  CHECK(coh.eg().real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(coh.ee()) + std::abs(coh.gg()) + std::abs(coh.ge()) <= 1e-15);

  // Everything ends in the ground state eventually.
  const Superoperator late = build_superoperator(ChannelParams::spontaneous(1.0, 30.0));
  CHECK(testutil::max_entry_diff(late.apply(testutil::excited_projector()),
                                 testutil::ground_projector()) <= 1e-12);
}

TEST_CASE("thermal channel reduces to the undriven one at zero occupation") {
  for (double tau : {0.05, 0.4, 2.0}) {
    const Superoperator spont = build_superoperator(ChannelParams::spontaneous(1.0, tau));
    CHECK(build_superoperator(ChannelParams::thermal(1.0, 0.0, tau))
              .inf_norm_diff(spont) <= 1e-12);
    CHECK(build_superoperator(ChannelParams::thermal(1.0, 1e-12, tau))
              .inf_norm_diff(spont) <= 1e-10);
  }
}

TEST_CASE("thermal populations relax toward the occupation-number ratio") {
  const double nbar = 1.0, gamma = 1.0, tau = 0.4;
  const Superoperator s = build_superoperator(ChannelParams::thermal(gamma, nbar, tau));
  const Operator2 out = s.apply(testutil::excited_projector());
  const double e2 = std::exp(-2.0 * gamma * (2.0 * nbar + 1.0) * tau);
  const double expected_ee = 1.0 / 3.0 + (2.0 / 3.0) * e2;
  CHECK(out.ee().real() == doctest::Approx(expected_ee).epsilon(1e-14));
  CHECK(out.gg().real() == doctest::Approx(1.0 - expected_ee).epsilon(1e-14));

  // Steady-state excited/ground ratio is nbar/(nbar + 1).
  const Operator2 late = build_superoperator(ChannelParams::thermal(gamma, nbar, 30.0))
                             .apply(testutil::excited_projector());
  CHECK(late.ee().real() / late.gg().real() == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("driven channel relaxes to the known steady state") {
  const double gamma = 1.0, v = 4.0;
  const Superoperator s = build_superoperator(ChannelParams::driven(gamma, v, 20.0));
  const BlochVector ss = driven_steady_state(gamma, v);
  CHECK(ss.v == doctest::Approx(8.0 / 18.0).epsilon(1e-15));
  CHECK(ss.w == doctest::Approx(-2.0 / 18.0).epsilon(1e-15));

  Rng rng(21);
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix rho0 = testutil::random_density(rng);
    const Operator2 out = s.apply(rho0.op());
    const BlochVector b = to_bloch(DensityMatrix(out, StateRole::Predictive));
    CHECK(std::abs(b.u - ss.u) <= 1e-8);
    CHECK(std::abs(b.v - ss.v) <= 1e-8);
    CHECK(std::abs(b.w - ss.w) <= 1e-8);
  }
}

TEST_CASE("driven channel with zero drive is the undriven channel") {
  for (double tau : {0.2, 1.0, 4.0}) {
    CHECK(build_superoperator(ChannelParams::driven(1.0, 0.0, tau))
              .inf_norm_diff(build_superoperator(ChannelParams::spontaneous(1.0, tau))) <=
          1e-12);
  }
}

TEST_CASE("drive strength is continuous across the oscillatory threshold") {
  for (double tau : {0.3, 1.0, 3.0}) {
    const Superoperator lo = build_superoperator(ChannelParams::driven(1.0, 0.5 - 1e-6, tau));
    const Superoperator hi = build_superoperator(ChannelParams::driven(1.0, 0.5 + 1e-6, tau));
    CHECK(lo.inf_norm_diff(hi) <= 1e-4);
  }
}

TEST_CASE("rabi trig helper agrees with the direct evaluation away from zero") {
  // Oscillatory side.
  CHECK(rabi_trig(4.0, 0.7).c == doctest::Approx(std::cos(1.4)).epsilon(1e-15));
  CHECK(rabi_trig(4.0, 0.7).s == doctest::Approx(std::sin(1.4) / 2.0).epsilon(1e-15));
  // Overdamped side.
  CHECK(rabi_trig(-4.0, 0.7).c == doctest::Approx(std::cosh(1.4)).epsilon(1e-15));
  CHECK(rabi_trig(-4.0, 0.7).s == doctest::Approx(std::sinh(1.4) / 2.0).epsilon(1e-15));
  // Series window continuity, both signs.
  for (double omega_sq : {1e-9, -1e-9, 9.9e-9, -9.9e-9}) {
    const RabiTrig series = rabi_trig(omega_sq, 1.0);
    const double omega = std::sqrt(std::abs(omega_sq));
    const double c = omega_sq > 0.0 ? std::cos(omega) : std::cosh(omega);
    const double s = omega_sq > 0.0 ? std::sin(omega) / omega : std::sinh(omega) / omega;
    CHECK(series.c == doctest::Approx(c).epsilon(1e-13));
    CHECK(series.s == doctest::Approx(s).epsilon(1e-13));
  }
  CHECK(rabi_trig(3.0, 0.0).c == 1.0);
  CHECK(rabi_trig(3.0, 0.0).s == 0.0);
}

TEST_CASE("adjoint is an involution and fixes the identity map") {
  const Superoperator id = Superoperator::identity();
  CHECK(id.adjoint().inf_norm_diff(id) == 0.0);
  const Superoperator s = build_superoperator(ChannelParams::driven(1.0, 4.0, 0.9));
  CHECK(s.adjoint().adjoint().inf_norm_diff(s) == 0.0);
}

TEST_CASE("adjoint of the undriven channel pumps ground-outcome weight upward") {
  const double gamma = 1.0, tau = 0.8;
  const Superoperator s = build_superoperator(ChannelParams::spontaneous(gamma, tau));
  const Operator2 img = s.adjoint().apply(testutil::ground_projector());
  const double e2 = std::exp(-2.0 * gamma * tau);
  CHECK(img.ee().real() == doctest::Approx(1.0 - e2).epsilon(1e-14));
  CHECK(img.gg().real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(img.eg()) + std::abs(img.ge()) <= 1e-15);
}

TEST_CASE("adjoint satisfies the inner-product identity on random operators") {
  Rng rng(22);
  for (ChannelKind kind : testutil::all_kinds()) {
    for (int i = 0; i < 20; ++i) {
      const ChannelParams p = testutil::random_params(rng, kind, 4.0);
      const Superoperator s = build_superoperator(p);
      const Operator2 a = testutil::random_operator(rng);
      const Operator2 b = testutil::random_operator(rng);
      CHECK(std::abs(hs_inner(a, s.apply(b)) - hs_inner(s.adjoint().apply(a), b)) <=
            1e-12);
    }
  }
}

TEST_CASE("master-equation right-hand side has the expected fixed points") {
  const ChannelParams spont = ChannelParams::spontaneous(1.0, 1.0);
  CHECK(lindblad_rhs(spont, testutil::ground_projector()).inf_norm() == 0.0);

  const Operator2 rhs = lindblad_rhs(spont, testutil::excited_projector());
  CHECK(rhs.ee().real() == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(rhs.gg().real() == doctest::Approx(2.0).epsilon(1e-15));

  const ChannelParams driven = ChannelParams::driven(1.0, 4.0, 1.0);
  const DensityMatrix steady = from_bloch(driven_steady_state(1.0, 4.0));
  CHECK(lindblad_rhs(driven, steady.op()).inf_norm() <= 1e-12);
}

TEST_CASE("master-equation right-hand side is traceless") {
  Rng rng(23);
  for (ChannelKind kind : testutil::all_kinds()) {
    for (int i = 0; i < 20; ++i) {
      const ChannelParams p = testutil::random_params(rng, kind, 4.0);
      const Operator2 rhs = lindblad_rhs(p, testutil::random_density(rng).op());
      CHECK(std::abs(rhs.trace().real()) + std::abs(rhs.trace().imag()) <= 1e-14);
    }
  }
}

TEST_CASE("fixed-step integrator reproduces the closed-form populations") {
  CHECK_THROWS_AS(integrate_lindblad(ChannelParams::spontaneous(1.0, 1.0),
                                     from_bloch({0.0, 0.0, 1.0}), 0),
                  std::invalid_argument);

  const DensityMatrix excited = from_bloch({0.0, 0.0, 1.0});
  const DensityMatrix unchanged =
      integrate_lindblad(ChannelParams::thermal(1.0, 1.0, 0.0), excited, 100);
  CHECK(testutil::max_entry_diff(unchanged.op(), excited.op()) == 0.0);

  bool renormalized = false;
  const DensityMatrix decayed = integrate_lindblad(ChannelParams::spontaneous(1.0, 1.0),
                                                   excited, 10000, &renormalized);
  CHECK(std::abs(decayed.op().ee().real() - std::exp(-2.0)) <= 1e-9);

  const DensityMatrix thermalized =
      integrate_lindblad(ChannelParams::thermal(1.0, 1.0, 3.0), excited, 10000);
  const double expected = 1.0 / 3.0 + (2.0 / 3.0) * std::exp(-18.0);
  CHECK(std::abs(thermalized.op().ee().real() - expected) <= 1e-8);
}

TEST_CASE("superoperators agree with the integrator oracle on random cases") {
  Rng rng(24);
  for (ChannelKind kind : testutil::all_kinds()) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const ChannelParams p = testutil::random_params(rng, kind, 5.0);
      const DensityMatrix rho0 = testutil::random_density(rng);
      const Operator2 via_superop = build_superoperator(p).apply(rho0.op());
      const Operator2 via_rk4 = integrate_lindblad_op(p, rho0.op(), 10000);
      worst = std::max(worst, testutil::max_entry_diff(via_superop, via_rk4));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("channels compose over split intervals") {
  Rng rng(25);
  for (ChannelKind kind : testutil::all_kinds()) {
    for (int i = 0; i < 20; ++i) {
      const ChannelParams p = testutil::random_params(rng, kind, 5.0);
      const double tau2 = testutil::uniform(rng, 0.0, 5.0) / p.gamma;
      const Superoperator joint = build_superoperator(p.with_tau(p.tau + tau2));
      const Superoperator split =
          build_superoperator(p.with_tau(tau2)) * build_superoperator(p);
      CHECK(joint.inf_norm_diff(split) <= 1e-10);
    }
  }
}

TEST_CASE("channels preserve trace and hermiticity") {
  Rng rng(26);
  for (ChannelKind kind : testutil::all_kinds()) {
    for (int i = 0; i < 20; ++i) {
      const ChannelParams p = testutil::random_params(rng, kind, 5.0);
      const Superoperator s = build_superoperator(p);

      const Operator2 evolved = s.apply(testutil::random_density(rng).op());
      CHECK(std::abs(evolved.trace() - Complex(1.0)) <= 1e-12);

      const Operator2 a = testutil::random_operator(rng);
      CHECK(testutil::max_entry_diff(s.apply(a.dagger()), s.apply(a).dagger()) <= 1e-12);

      CHECK(testutil::max_entry_diff(s.adjoint().apply(Operator2::identity()),
                                     Operator2::identity()) <= 1e-10);
    }
  }
}

TEST_CASE("choi matrices of the physical channels are positive") {
  Rng rng(27);
  for (ChannelKind kind : testutil::all_kinds()) {
    for (int i = 0; i < 10; ++i) {
      const ChannelParams p = testutil::random_params(rng, kind, 5.0);
      const auto ev = hermitian_eigenvalues4(choi_matrix(build_superoperator(p)));
      CHECK(ev.front() >= -1e-10);
    }
  }
  // Identity channel: one maximally entangled direction of weight two.
  const auto id_ev = hermitian_eigenvalues4(choi_matrix(Superoperator::identity()));
  CHECK(std::abs(id_ev[0]) <= 1e-12);
  CHECK(std::abs(id_ev[1]) <= 1e-12);
  CHECK(std::abs(id_ev[2]) <= 1e-12);
  CHECK(id_ev[3] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("four-dimensional hermitian eigenvalues match matrix moments") {
  Rng rng(28);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<Complex, 16> h{};
    for (int r = 0; r < 4; ++r) {
      for (int c = r; c < 4; ++c) {
        const Complex z(testutil::uniform(rng, -1.0, 1.0),
                        r == c ? 0.0 : testutil::uniform(rng, -1.0, 1.0));
        h[4 * r + c] = z;
        h[4 * c + r] = std::conj(z);
      }
    }
    const auto ev = hermitian_eigenvalues4(h);

    // Compare sum(lambda^k) with Tr(H^k) for k = 1..4.
    std::array<Complex, 16> power = h;
    for (int k = 1; k <= 4; ++k) {
      double moment = 0.0;
      for (const double lambda : ev) moment += std::pow(lambda, k);
      Complex tr = 0.0;
      for (int d = 0; d < 4; ++d) tr += power[4 * d + d];
      CHECK(moment == doctest::Approx(tr.real()).epsilon(1e-9));
      CHECK(std::abs(tr.imag()) <= 1e-10);
      // power <- power * h
      std::array<Complex, 16> next{};
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
          Complex acc = 0.0;
          for (int m = 0; m < 4; ++m) acc += power[4 * r + m] * h[4 * m + c];
          next[4 * r + c] = acc;
        }
      power = next;
    }
  }
}
