#include "retroatom/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "retroatom/retrodiction.hpp"
#include "retroatom/scenarios.hpp"
#include "retroatom/tolerances.hpp"

namespace retroatom::selfcheck {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Operator2 random_operator(Rng& rng) {
  auto z = [&rng]() { return Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)); };
  return {z(), z(), z(), z()};
}

PomElement random_pom(Rng& rng) {
  for (;;) {
    const Operator2 g = random_operator(rng);
    const Operator2 p = g.dagger() * g;
    if (p.trace().real() > 1e-3) return PomElement(p, "random");
  }
}

DensityMatrix random_density(Rng& rng) {
  return normalize_to_density(random_pom(rng).op(), StateRole::Predictive);
}

PreparationEnsemble random_ensemble(Rng& rng) {
  const int count = (uniform(rng, 0.0, 1.0) < 0.5) ? 2 : 3;
  std::vector<double> weights(count);
  double total = 0.0;
  for (double& w : weights) {
    w = uniform(rng, 0.1, 1.0);
    total += w;
  }
  std::vector<PreparationEnsemble::Item> items;
  for (int i = 0; i < count; ++i) {
    items.emplace_back("p" + std::to_string(i),
                       (weights[i] / total) * random_density(rng).op());
  }
  return PreparationEnsemble(std::move(items));
}

ChannelParams random_params(Rng& rng, ChannelKind kind, double gamma_tau_max) {
  const double gamma = uniform(rng, 0.5, 2.0);
  const double tau = uniform(rng, 0.0, gamma_tau_max) / gamma;
  switch (kind) {
    case ChannelKind::SpontaneousEmission:
      return ChannelParams::spontaneous(gamma, tau);
    case ChannelKind::Thermal:
      return ChannelParams::thermal(gamma, uniform(rng, 0.0, 3.0), tau);
    case ChannelKind::Driven:
      return ChannelParams::driven(gamma, uniform(rng, 0.0, 6.0) * gamma, tau);
  }
  throw std::invalid_argument("unknown channel kind");
}

const std::vector<ChannelKind>& all_kinds() {
  static const std::vector<ChannelKind> kinds = {
      ChannelKind::SpontaneousEmission, ChannelKind::Thermal, ChannelKind::Driven};
  return kinds;
}

const char* kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::SpontaneousEmission: return "spontaneous";
    case ChannelKind::Thermal: return "thermal";
    case ChannelKind::Driven: return "driven";
  }
  return "?";
}

double max_abs_posterior_diff(const PreparationPosterior& a, const PreparationPosterior& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    worst = std::max(worst, std::abs(a.entries()[i].second - b.entries()[i].second));
  }
  return worst;
}

// Five POM elements exercising every worked measurement outcome.
std::vector<PomElement> stock_poms() {
  std::vector<PomElement> poms;
  poms.emplace_back(Operator2::ketbra(kExcited, kExcited), "excited");
  poms.emplace_back(Operator2::ketbra(kGround, kGround), "ground");
  poms.emplace_back(0.5 * (Operator2::identity() + pauli(1)), "plus");
  poms.emplace_back(0.5 * (Operator2::identity() + pauli(2)), "sigma2-plus");
  poms.push_back(projector_theta(1.234));
  return poms;
}

class Suite {
 public:
  explicit Suite(const CheckOptions& options) : options_(options) {}

  CheckReport run() {
    channel_invariants();
    retrodiction_invariants();
    scenario_invariants();
    transcription_audit();
    return std::move(report_);
  }

 private:
  // Channel construction as seen by the checks; the corrupted variant doubles
  // the thermal coherence decay rate, which the integrator oracle must catch.
  Superoperator checked_superoperator(const ChannelParams& p) const {
    Superoperator s = build_superoperator(p);
    if (options_.corrupt_thermal_coherence && p.kind == ChannelKind::Thermal) {
      const double extra = std::exp(-p.gamma * (2.0 * p.nbar + 1.0) * p.tau);
      s.set_entry(1, 1, s.entry(1, 1) * extra);
      s.set_entry(2, 2, s.entry(2, 2) * extra);
    }
    return s;
  }

  void add_invariant(const std::string& name, double measured, double tol) {
    report_.invariants.push_back({name, measured <= tol, measured, tol});
  }

  void add_audit(const std::string& name, double measured, double tol) {
    report_.audit.push_back({name, measured <= tol, measured, tol});
  }

  void channel_invariants() {
    Rng rng(options_.seed);

    double worst_identity = 0.0;
    double worst_dual_unit = 0.0;
    double worst_herm = 0.0;
    double worst_trace = 0.0;
    double worst_semigroup = 0.0;
    double worst_choi = 0.0;
    double worst_rhs_trace = 0.0;
    for (ChannelKind kind : all_kinds()) {
      double worst_oracle = 0.0;
      for (int i = 0; i < 50; ++i) {
        const ChannelParams p = random_params(rng, kind, 5.0);
        const Superoperator s = checked_superoperator(p);

        const DensityMatrix rho0 = random_density(rng);
        const Operator2 via_superop = s.apply(rho0.op());
        const Operator2 via_rk4 = integrate_lindblad_op(p, rho0.op(), 10000);
        worst_oracle = std::max(worst_oracle, (via_superop - via_rk4).inf_norm());

        worst_identity = std::max(
            worst_identity, build_superoperator(p.with_tau(0.0))
                                .inf_norm_diff(Superoperator::identity()));
        worst_dual_unit =
            std::max(worst_dual_unit, (s.adjoint().apply(Operator2::identity()) -
                                       Operator2::identity())
                                          .inf_norm());
        worst_trace =
            std::max(worst_trace, std::abs(via_superop.trace().real() - 1.0) +
                                      std::abs(via_superop.trace().imag()));

        const Operator2 a = random_operator(rng);
        worst_herm = std::max(
            worst_herm, (s.apply(a.dagger()) - s.apply(a).dagger()).inf_norm());

        const double tau2 = uniform(rng, 0.0, 5.0) / p.gamma;
        worst_semigroup = std::max(
            worst_semigroup,
            build_superoperator(p.with_tau(p.tau + tau2))
                .inf_norm_diff(build_superoperator(p.with_tau(tau2)) *
                               build_superoperator(p)));

        const auto choi_ev = hermitian_eigenvalues4(choi_matrix(s));
        worst_choi = std::max(worst_choi, -choi_ev.front());

        const Complex rhs_trace = lindblad_rhs(p, rho0.op()).trace();
        worst_rhs_trace = std::max(
            worst_rhs_trace, std::abs(rhs_trace.real()) + std::abs(rhs_trace.imag()));
      }
      add_invariant(std::string("channel[") + kind_name(kind) +
                        "]: closed form matches integrator oracle",
                    worst_oracle, 1e-6);
    }
    add_invariant("channel: zero interval gives the identity map", worst_identity, 1e-14);
    add_invariant("channel: adjoint maps identity to identity", worst_dual_unit, 1e-10);
    add_invariant("channel: hermiticity preserved", worst_herm, 1e-12);
    add_invariant("channel: trace preserved on density inputs", worst_trace, 1e-12);
    add_invariant("channel: composition over split intervals", worst_semigroup, 1e-10);
    add_invariant("channel: Choi matrix positive semi-definite", worst_choi, 1e-10);
    add_invariant("channel: generator output is traceless", worst_rhs_trace, 1e-14);

    // Continuity across the Rabi degeneracy.
    double worst_cont = 0.0;
    for (double tau : {0.3, 1.0, 3.0}) {
      const Superoperator lo =
          build_superoperator(ChannelParams::driven(1.0, 0.5 - 1e-6, tau));
      const Superoperator hi =
          build_superoperator(ChannelParams::driven(1.0, 0.5 + 1e-6, tau));
      worst_cont = std::max(worst_cont, lo.inf_norm_diff(hi));
    }
    add_invariant("channel: drive continuous across the oscillatory threshold",
                  worst_cont, 1e-4);

    double worst_nbar0 = 0.0;
    for (double tau : {0.1, 0.7, 2.5}) {
      worst_nbar0 = std::max(
          worst_nbar0,
          build_superoperator(ChannelParams::thermal(1.0, 1e-12, tau))
              .inf_norm_diff(build_superoperator(ChannelParams::spontaneous(1.0, tau))));
    }
    add_invariant("channel: thermal reduces to spontaneous at zero occupation",
                  worst_nbar0, 1e-10);

    // The driven fixed point is stationary under the generator.
    double worst_steady = 0.0;
    for (double v : {0.2, 1.0, 4.0}) {
      const DensityMatrix ss = from_bloch(driven_steady_state(1.0, v));
      worst_steady = std::max(
          worst_steady,
          lindblad_rhs(ChannelParams::driven(1.0, v, 1.0), ss.op()).inf_norm());
    }
    add_invariant("channel: driven steady state is stationary", worst_steady, 1e-12);
  }

  void retrodiction_invariants() {
    Rng rng(options_.seed + 1);

    double worst_bayes = 0.0;
    double worst_bayes_rk4 = 0.0;
    double worst_pauli = 0.0;
    double worst_scale = 0.0;
    double worst_sum = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ChannelKind kind = all_kinds()[static_cast<std::size_t>(i) % 3];
      const ChannelParams p = random_params(rng, kind, 4.0);
      const PomElement pom = random_pom(rng);
      const PreparationEnsemble ensemble = random_ensemble(rng);

      const RetrodictionResult open = retrodict_open(p, pom);
      const PreparationPosterior via_retro = preparation_posterior(open.rho_retr, ensemble);
      const PreparationPosterior via_bayes = forward_bayes(p, ensemble, pom);
      worst_bayes = std::max(worst_bayes, max_abs_posterior_diff(via_retro, via_bayes));

      const PreparationPosterior via_rk4 = forward_bayes_rk4(p, ensemble, pom, 10000);
      worst_bayes_rk4 = std::max(worst_bayes_rk4,
                                 max_abs_posterior_diff(via_retro, via_rk4));

      const RetrodictionResult alt = retrodict_pauli(p, pom);
      worst_pauli = std::max(
          worst_pauli, (open.rho_retr.op() - alt.rho_retr.op()).inf_norm());

      const double scale = uniform(rng, 0.25, 4.0);
      const RetrodictionResult scaled =
          retrodict_open(p, PomElement(scale * pom.op(), "scaled"));
      worst_scale = std::max(
          worst_scale,
          std::max((scaled.rho_retr.op() - open.rho_retr.op()).inf_norm(),
                   std::abs(scaled.normalization - scale * open.normalization)));

      double sum = 0.0;
      for (const auto& [label, prob] : via_retro.entries()) sum += prob;
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    add_invariant("retrodiction: posterior matches direct Bayes route", worst_bayes, 1e-10);
    add_invariant("retrodiction: posterior matches Bayes route through integrator",
                  worst_bayes_rk4, 1e-6);
    add_invariant("retrodiction: adjoint and Pauli-expansion routes agree", worst_pauli,
                  1e-12);
    add_invariant("retrodiction: invariant under POM element rescaling", worst_scale,
                  1e-10);
    add_invariant("retrodiction: posteriors sum to one", worst_sum, 1e-10);

    // Zero interval: the retrodictive state is the normalized POM element.
    double worst_anchor = 0.0;
    for (ChannelKind kind : all_kinds()) {
      for (int i = 0; i < 20; ++i) {
        ChannelParams p = random_params(rng, kind, 4.0);
        p = p.with_tau(0.0);
        const PomElement pom = random_pom(rng);
        const Operator2 expected =
            (1.0 / pom.op().trace().real()) * pom.op();
        worst_anchor = std::max(
            worst_anchor,
            (retrodict_open(p, pom).rho_retr.op() - expected).inf_norm());
      }
    }
    add_invariant("retrodiction: zero interval returns the normalized POM element",
                  worst_anchor, 1e-12);

    // Long intervals erase preparation information for the thermal and
    // driven channels.
    double worst_noinfo = 0.0;
    const Operator2 half = 0.5 * Operator2::identity();
    for (const PomElement& pom : stock_poms()) {
      const ChannelParams thermal = ChannelParams::thermal(1.0, 1.0, 30.0);
      const ChannelParams driven = ChannelParams::driven(1.0, 4.0, 30.0);
      worst_noinfo = std::max(
          worst_noinfo, (retrodict_open(thermal, pom).rho_retr.op() - half).inf_norm());
      worst_noinfo = std::max(
          worst_noinfo, (retrodict_open(driven, pom).rho_retr.op() - half).inf_norm());
    }
    add_invariant("retrodiction: long intervals give the zero-information state",
                  worst_noinfo, 1e-6);

    // Excited outcome under pure decay retrodicts the excited state at any
    // interval, and pins the posterior.
    double worst_excited = 0.0;
    const PomElement excited(Operator2::ketbra(kExcited, kExcited), "excited");
    const PreparationEnsemble unbiased({{"e", 0.5 * Operator2::ketbra(kExcited, kExcited)},
                                        {"g", 0.5 * Operator2::ketbra(kGround, kGround)}});
    for (double gamma_tau : {0.0, 0.1, 1.0, 10.0, 30.0}) {
      const ChannelParams p = ChannelParams::spontaneous(1.0, gamma_tau);
      const RetrodictionResult res = retrodict_open(p, excited);
      worst_excited = std::max(
          worst_excited, (res.rho_retr.op() - excited.op()).inf_norm());
      const PreparationPosterior post = preparation_posterior(res.rho_retr, unbiased);
      worst_excited = std::max(worst_excited, std::abs(post.probability("e") - 1.0));
      worst_excited = std::max(worst_excited, std::abs(post.probability("g")));
    }
    add_invariant("retrodiction: excited outcome under pure decay stays excited",
                  worst_excited, 1e-12);

    // Defining property of the adjoint map.
    double worst_adjoint = 0.0;
    for (int i = 0; i < 30; ++i) {
      const ChannelKind kind = all_kinds()[static_cast<std::size_t>(i) % 3];
      const ChannelParams p = random_params(rng, kind, 4.0);
      const Superoperator s = checked_superoperator(p);
      const Operator2 a = random_operator(rng);
      const Operator2 b = random_operator(rng);
      worst_adjoint = std::max(
          worst_adjoint,
          std::abs(hs_inner(a, s.apply(b)) - hs_inner(s.adjoint().apply(a), b)));
    }
    add_invariant("retrodiction: adjoint satisfies the inner-product identity",
                  worst_adjoint, 1e-12);
  }

  void scenario_invariants() {
    std::vector<double> grid(50);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid[i] = 5.0 * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }

    // Anchors of the undriven preparation probabilities.
    double worst_anchor = 0.0;
    {
      const auto at_zero = scenarios::spont_prep_probs(1.0, 0.0);
      worst_anchor = std::max(std::abs(at_zero.first), std::abs(at_zero.second - 1.0));
      const double tau_half = 0.5 * std::log(2.0);  // exp(-2 gamma tau) = 1/2
      const auto at_half = scenarios::spont_prep_probs(1.0, tau_half);
      worst_anchor = std::max(worst_anchor, std::abs(at_half.first - 1.0 / 3.0));
      worst_anchor = std::max(worst_anchor, std::abs(at_half.second - 2.0 / 3.0));
      const auto at_late = scenarios::spont_prep_probs(1.0, 30.0);
      worst_anchor = std::max(worst_anchor, std::abs(at_late.first - 0.5));
      worst_anchor = std::max(worst_anchor, std::abs(at_late.second - 0.5));
    }
    add_invariant("scenarios: undriven preparation probability anchors", worst_anchor,
                  1e-10);

    double worst_spont = 0.0;
    double worst_thermal = 0.0;
    double worst_sigma1 = 0.0;
    double worst_super = 0.0;
    const PreparationEnsemble biased({{"e", 0.35 * Operator2::ketbra(kExcited, kExcited)},
                                      {"plus", 0.65 * (0.5 * (Operator2::identity() +
                                                              pauli(1)))}});
    for (const double gt : grid) {
      for (const PomElement& pom : stock_poms()) {
        const Operator2 via_open =
            retrodict_open(ChannelParams::spontaneous(1.0, gt), pom).rho_retr.op();
        worst_spont = std::max(
            worst_spont,
            (scenarios::spont_retro_elements(pom, 1.0, gt) - via_open).inf_norm());

        const Operator2 via_open_th =
            retrodict_open(ChannelParams::thermal(1.0, 1.0, gt), pom).rho_retr.op();
        worst_thermal = std::max(
            worst_thermal,
            (scenarios::thermal_retro_elements(pom, 1.0, 1.0, gt) - via_open_th)
                .inf_norm());
      }

      const PomElement plus(0.5 * (Operator2::identity() + pauli(1)), "plus");
      const Operator2 via_open_s1 =
          retrodict_open(ChannelParams::driven(1.0, 4.0, gt), plus).rho_retr.op();
      worst_sigma1 = std::max(
          worst_sigma1,
          (scenarios::driven_retro_sigma1(1.0, 4.0, gt) - via_open_s1).inf_norm());

      const double theta = 1.1;
      const auto closed = scenarios::superposition_posterior(theta, 0.35, 1.0, gt);
      const PreparationPosterior bayes = forward_bayes(
          ChannelParams::spontaneous(1.0, gt), biased, projector_theta(theta));
      worst_super = std::max(worst_super,
                             std::abs(closed.first - bayes.probability("e")));
      worst_super = std::max(worst_super,
                             std::abs(closed.second - bayes.probability("plus")));
    }
    add_invariant("scenarios: undriven retrodictive elements match adjoint route",
                  worst_spont, 1e-12);
    add_invariant("scenarios: thermal retrodictive elements match adjoint route",
                  worst_thermal, 1e-12);
    add_invariant("scenarios: driven real-dipole outcome closed form matches adjoint route",
                  worst_sigma1, 1e-10);
    add_invariant("scenarios: superposition posterior matches forward Bayes",
                  worst_super, 1e-10);
  }

  void transcription_audit() {
    std::vector<double> grid(50);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid[i] = 5.0 * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }

    // Literal forward Bloch coefficients vs the generator exponential.
    double worst_bloch = 0.0;
    Rng rng(options_.seed + 2);
    for (const double gt : grid) {
      const BlochVector b0{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5),
                           uniform(rng, -0.5, 0.5)};
      const BlochVector via_form = scenarios::driven_bloch(b0, 1.0, 4.0, gt);
      const BlochVector via_channel = to_bloch(DensityMatrix(
          build_superoperator(ChannelParams::driven(1.0, 4.0, gt))
              .apply(from_bloch(b0).op()),
          StateRole::Predictive));
      worst_bloch = std::max({worst_bloch, std::abs(via_form.u - via_channel.u),
                              std::abs(via_form.v - via_channel.v),
                              std::abs(via_form.w - via_channel.w)});
    }
    add_audit("driven Bloch literal coefficients vs generator exponential", worst_bloch,
              1e-6);

    double worst_excited = 0.0;
    double worst_sigma2 = 0.0;
    const PomElement excited(Operator2::ketbra(kExcited, kExcited), "excited");
    const PomElement s2(0.5 * (Operator2::identity() + pauli(2)), "sigma2-plus");
    for (const double gt : grid) {
      const ChannelParams p = ChannelParams::driven(1.0, 4.0, gt);
      worst_excited = std::max(
          worst_excited, (scenarios::driven_retro_excited(1.0, 4.0, gt) -
                          retrodict_open(p, excited).rho_retr.op())
                             .inf_norm());
      worst_sigma2 = std::max(
          worst_sigma2, (scenarios::driven_retro_sigma2(1.0, 4.0, gt) -
                         retrodict_open(p, s2).rho_retr.op())
                            .inf_norm());
    }
    add_audit("driven excited-outcome literal elements vs adjoint route", worst_excited,
              1e-6);
    add_audit("driven imaginary-dipole outcome literal elements vs adjoint route",
              worst_sigma2, 1e-6);

    // The literal plus-branch numerator of the superposition posterior decays
    // its coherence term at the population rate instead of the dipole rate;
    // audited against the trace-ratio route.
    double worst_plus = 0.0;
    for (const double gt : grid) {
      const double theta = 1.1, p = 0.35, e1 = std::exp(-gt), e2 = e1 * e1;
      const double ct = std::cos(theta), st = std::sin(theta);
      const double literal_num = (1.0 - p) * (1.0 + ct * (1.0 - e2) + st * e2);
      const double denom = 1.0 + ct * (1.0 - e2) + (1.0 - p) * st * e1 - p * ct * e2;
      const double literal_plus = literal_num / denom;
      const double via_op = scenarios::superposition_posterior(theta, p, 1.0, gt).second;
      worst_plus = std::max(worst_plus, std::abs(literal_plus - via_op));
    }
    add_audit("superposition plus-branch literal numerator vs trace-ratio route",
              worst_plus, 1e-6);
  }

  CheckOptions options_;
  CheckReport report_;
};

}  // namespace

bool CheckReport::all_pass() const {
  return std::all_of(invariants.begin(), invariants.end(),
                     [](const CheckItem& item) { return item.pass; });
}

CheckReport run_self_check(const CheckOptions& options) { return Suite(options).run(); }

}  // namespace retroatom::selfcheck
